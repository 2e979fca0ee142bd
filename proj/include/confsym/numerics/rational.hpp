#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace confsym {

struct RationalApprox {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  double residual = 0.0;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// First continued-fraction convergent of x with denominator <= max_den and
/// |x - p/q| <= 1e-8 / max_den.
inline std::optional<RationalApprox> rational_reconstruct(double x, std::int64_t max_den) {
  if (max_den < 1 || !std::isfinite(x)) return std::nullopt;
  const double bound = 1e-8 / static_cast<double>(max_den);
  // Convergents h_k / k_k with the usual recurrences.
  std::int64_t h_prev = 1, k_prev = 0;
  double a = std::floor(x);
  if (std::abs(a) > 9e15) return std::nullopt;
  std::int64_t h = static_cast<std::int64_t>(a), k = 1;
  double frac = x - a;
  for (int iter = 0; iter < 64; ++iter) {
    const double residual = std::abs(x - static_cast<double>(h) / static_cast<double>(k));
    if (residual <= bound) return RationalApprox{h, k, residual};
    if (frac <= 0.0) break;
    const double inv = 1.0 / frac;
    a = std::floor(inv);
    frac = inv - a;
    if (a > 9e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t k_next = ai * k + k_prev;
    if (k_next > max_den) break;
    const std::int64_t h_next = ai * h + h_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace confsym
