#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "confsym/numerics/alt_tensor.hpp"
#include "confsym/numerics/finite_diff.hpp"
#include "confsym/numerics/linalg.hpp"
#include "confsym/numerics/random.hpp"

namespace confsym {

/// A pair (omega, theta) with d omega + theta ^ omega = 0 and d theta = 0.
struct ConformalStructure {
  FormField omega;
  FormField theta;
};

inline double theta_of(const FormField& theta, const Vec& p, const Vec& x) { return theta(p).vector().dot(x); }

/// p -> i(X) alpha.
inline FormField interior_field(VectorFieldMap X, FormField alpha) {
  if (alpha.rank == 0) throw RankOverflow("interior product of a function");
  FormField out{alpha.dim, alpha.rank - 1, {}, alpha.domain};
  out.eval = [X = std::move(X), alpha = std::move(alpha)](const Vec& p) { return interior(X(p), alpha(p)); };
  return out;
}

/// d_theta alpha = d alpha + theta ^ alpha.
inline AltTensor d_theta(const FormField& alpha, const FormField& theta, const Vec& p, double step) {
  return finite_d(alpha, p, step) + wedge(theta(p), alpha(p));
}

inline FormField d_theta_field(FormField alpha, FormField theta, double step) {
  FormField out{alpha.dim, alpha.rank + 1, {}, alpha.domain};
  out.eval = [alpha = std::move(alpha), theta = std::move(theta), step](const Vec& p) {
    return d_theta(alpha, theta, p, step);
  };
  return out;
}

/// L_theta(X) alpha = i(X) d alpha + d i(X) alpha + theta(X) alpha.
inline AltTensor lie_theta(const VectorFieldMap& X, const FormField& alpha, const FormField& theta, const Vec& p,
                           double step) {
  const Vec x = X(p);
  AltTensor out = theta_of(theta, p, x) * alpha(p);
  if (alpha.rank < alpha.dim) out += interior(x, finite_d(alpha, p, step));
  if (alpha.rank > 0) out += finite_d(interior_field(X, alpha), p, step);
  return out;
}

inline FormField lie_theta_field(VectorFieldMap X, FormField alpha, FormField theta, double step) {
  FormField out{alpha.dim, alpha.rank, {}, alpha.domain};
  out.eval = [X = std::move(X), alpha = std::move(alpha), theta = std::move(theta), step](const Vec& p) {
    return lie_theta(X, alpha, theta, p, step);
  };
  return out;
}

/// [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i by central differences.
inline Vec bracket(const VectorFieldMap& X, const VectorFieldMap& Y, const Vec& p, double step) {
  const Vec x = X(p), y = Y(p);
  Vec out = Vec::Zero(p.size());
  Vec q = p;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    q[j] = p[j] + step;
    const Vec yp = Y(q), xp = X(q);
    q[j] = p[j] - step;
    const Vec ym = Y(q), xm = X(q);
    q[j] = p[j];
    out += (x[j] * (yp - ym) - y[j] * (xp - xm)) / (2.0 * step);
  }
  return out;
}

inline VectorFieldMap bracket_field(VectorFieldMap X, VectorFieldMap Y, double step) {
  const int dim = X.dim;
  return {dim, [X = std::move(X), Y = std::move(Y), step](const Vec& p) { return bracket(X, Y, p, step); }};
}

/// Twisted Hamiltonian field of f: i(X_f) omega = d_theta f.
inline Vec hamiltonian_field(const ConformalStructure& s, const FormField& f, const Vec& p, double step) {
  return solve_skew(s.omega(p), d_theta(f, s.theta, p, step)).vector;
}

/// Lee field A: i(A) omega = theta.
inline Vec lee_field(const ConformalStructure& s, const Vec& p) { return solve_skew(s.omega(p), s.theta(p)).vector; }

/// Polynomial vector field of degree <= 2 with coefficients uniform in [-scale, scale].
inline VectorFieldMap polynomial_field(int dim, std::uint64_t seed, std::uint64_t index, double scale = 1.0) {
  CounterRng rng(seed, index);
  Vec c(dim);
  Mat L(dim, dim);
  std::vector<Mat> Q(dim, Mat(dim, dim));
  for (int i = 0; i < dim; ++i) c[i] = rng.uniform(-scale, scale);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) L(i, j) = rng.uniform(-scale, scale);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) Q[i](j, k) = j <= k ? rng.uniform(-scale, scale) : 0.0;
  return {dim, [c, L, Q](const Vec& p) {
            Vec v = c + L * p;
            for (std::size_t i = 0; i < Q.size(); ++i) v[static_cast<Eigen::Index>(i)] += p.dot(Q[i] * p);
            return v;
          }};
}

/// Residuals of the twisted graded-commutator table, each the max coefficient
/// of (lhs - rhs) divided by 1 + the largest coefficient among the terms.
struct CartanResiduals {
  double iota_iota = 0, lie_lie = 0, lie_d = 0, lie_iota = 0, d_d = 0, iota_d = 0, d_theta_omega = 0,
         d_theta_squared_probe = 0;

  std::vector<std::pair<std::string, double>> named() const {
    return {{"iota_iota", iota_iota}, {"lie_lie", lie_lie},
            {"lie_d", lie_d},         {"lie_iota", lie_iota},
            {"d_d", d_d},             {"iota_d", iota_d},
            {"d_theta_omega", d_theta_omega}, {"d_theta_squared_probe", d_theta_squared_probe}};
  }

  double max() const {
    double m = 0.0;
    for (const auto& [name, v] : named()) m = std::max(m, v);
    return m;
  }
};

namespace detail {

inline double normalized(const AltTensor& residual, std::initializer_list<const AltTensor*> terms) {
  double scale = 0.0;
  for (const auto* t : terms) scale = std::max(scale, t->max_abs());
  return residual.max_abs() / (1.0 + scale);
}

}  // namespace detail

/// Test 2-form omega + P with P a fixed quadratic 2-form, so the identities are
/// exercised on a form with no special relation to the structure.
inline FormField probe_two_form(const ConformalStructure& s) {
  const int n = s.omega.dim;
  AltTensor shape(n, 2);
  std::vector<double> a(shape.size()), b(shape.size());
  CounterRng rng(0x70726f6265ull, 2);
  for (std::size_t k = 0; k < shape.size(); ++k) a[k] = rng.uniform(-1, 1), b[k] = rng.uniform(-0.5, 0.5);
  FormField out{n, 2, {}, s.omega.domain};
  out.eval = [omega = s.omega, a, b, n](const Vec& p) {
    AltTensor t = omega(p);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto ij = detail::indices_of(t.mask(k));
      t[k] += a[k] + b[k] * p[ij[0]] * p[ij[1]] + 0.3 * b[k] * p[(ij[1] + 1) % n];
    }
    return t;
  };
  return out;
}

inline FormField probe_function(int dim, DomainPredicate domain) {
  return FormField::function(
      dim,
      [dim](const Vec& p) {
        double v = 0.25;
        for (int i = 0; i < dim; ++i) v += (0.5 + 0.1 * i) * p[i] + 0.2 * p[i] * p[(i + 1) % dim];
        return v;
      },
      std::move(domain));
}

inline CartanResiduals check_cartan(const ConformalStructure& s, const Vec& p, const VectorFieldMap& X,
                                    const VectorFieldMap& Y, double step) {
  const FormField& theta = s.theta;
  const FormField alpha = probe_two_form(s);
  const VectorFieldMap XY = bracket_field(X, Y, step);
  const Vec x = X(p), y = Y(p), xy = XY(p);
  CartanResiduals r;

  {
    const AltTensor a = interior(x, interior(y, alpha(p))), b = interior(y, interior(x, alpha(p)));
    r.iota_iota = detail::normalized(a + b, {&a, &b});
  }
  const FormField LYa = lie_theta_field(Y, alpha, theta, step);
  const FormField LXa = lie_theta_field(X, alpha, theta, step);
  {
    const AltTensor a = lie_theta(X, LYa, theta, p, step);
    const AltTensor b = lie_theta(Y, LXa, theta, p, step);
    const AltTensor c = lie_theta(XY, alpha, theta, p, step);
    r.lie_lie = detail::normalized(a - b - c, {&a, &b, &c});
  }
  const FormField dA = d_theta_field(alpha, theta, step);
  {
    const AltTensor a = lie_theta(X, dA, theta, p, step);
    const AltTensor b = d_theta(LXa, theta, p, step);
    r.lie_d = detail::normalized(a - b, {&a, &b});
  }
  {
    const AltTensor a = lie_theta(X, interior_field(Y, alpha), theta, p, step);
    const AltTensor b = interior(y, lie_theta(X, alpha, theta, p, step));
    const AltTensor c = interior(xy, alpha(p));
    r.lie_iota = detail::normalized(a - b - c, {&a, &b, &c});
  }
  {
    const AltTensor a = 2.0 * d_theta(dA, theta, p, step);
    r.d_d = detail::normalized(a, {&a});
  }
  {
    const AltTensor a = interior(x, dA(p));
    const AltTensor b = d_theta(interior_field(X, alpha), theta, p, step);
    const AltTensor c = lie_theta(X, alpha, theta, p, step);
    r.iota_d = detail::normalized(a + b - c, {&a, &b, &c});
  }
  {
    const AltTensor w = s.omega(p);
    const AltTensor a = d_theta(s.omega, theta, p, step);
    r.d_theta_omega = detail::normalized(a, {&w});
  }
  {
    const FormField f = probe_function(s.omega.dim, s.omega.domain);
    const AltTensor a = d_theta(d_theta_field(f, theta, step), theta, p, step);
    const AltTensor fp = f(p);
    r.d_theta_squared_probe = detail::normalized(a, {&fp});
  }
  return r;
}

}  // namespace confsym
