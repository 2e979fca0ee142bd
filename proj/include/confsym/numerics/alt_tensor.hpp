#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "confsym/errors.hpp"

namespace confsym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Largest chart dimension supported by the tensor tables.
inline constexpr int kMaxDim = 8;

namespace detail {

// Multi-indices of a fixed (dim, rank) are stored as bitmasks in
// lexicographic order of their increasing index lists.
struct MultiIndexTable {
  std::vector<std::uint16_t> masks;
  std::array<int, 1 << kMaxDim> position{};
};

inline const MultiIndexTable& table(int dim, int rank) {
  static const auto tables = [] {
    std::array<std::array<MultiIndexTable, kMaxDim + 1>, kMaxDim + 1> t{};
    for (int n = 0; n <= kMaxDim; ++n) {
      for (int k = 0; k <= n; ++k) {
        auto& tab = t[n][k];
        tab.position.fill(-1);
        // Enumerate k-subsets of {0..n-1} lexicographically.
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
          std::uint16_t m = 0;
          for (int i : idx) m |= std::uint16_t(1u << i);
          tab.position[m] = static_cast<int>(tab.masks.size());
          tab.masks.push_back(m);
          int i = k - 1;
          while (i >= 0 && idx[i] == n - k + i) --i;
          if (i < 0) break;
          ++idx[i];
          for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
      }
    }
    return t;
  }();
  return tables[dim][rank];
}

/// Sign of the shuffle that sorts the concatenation (I, J) of two disjoint
/// increasing index sets.
inline int shuffle_sign(std::uint16_t I, std::uint16_t J) {
  int inversions = 0;
  for (std::uint16_t rest = I; rest; rest &= rest - 1) {
    int i = std::countr_zero(rest);
    inversions += std::popcount(static_cast<std::uint16_t>(J & ((1u << i) - 1)));
  }
  return (inversions & 1) ? -1 : 1;
}

inline std::vector<int> indices_of(std::uint16_t mask) {
  std::vector<int> out;
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

}  // namespace detail

/// Pointwise value of a differential k-form on an N-dimensional chart.
///
/// Coefficients live on strictly increasing multi-indices; the form is
///   a = sum_I a_I dx^{i_1} ^ ... ^ dx^{i_k},
/// with dx^{i_1} ^ ... ^ dx^{i_k}(e_{i_1}, ..., e_{i_k}) = 1 (determinant
/// normalization).
class AltTensor {
 public:
  AltTensor() : AltTensor(1, 0) {}

  AltTensor(int dim, int rank) : dim_(dim), rank_(rank) {
    if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("ambient dimension out of range");
    if (rank < 0 || rank > dim) throw RankOverflow("rank " + std::to_string(rank) +
                                                   " exceeds dimension " + std::to_string(dim));
    coeffs_.assign(detail::table(dim, rank).masks.size(), 0.0);
  }

  static AltTensor scalar(int dim, double value) {
    AltTensor t(dim, 0);
    t.coeffs_[0] = value;
    return t;
  }

  /// dx^i
  static AltTensor basis_covector(int dim, int i) {
    AltTensor t(dim, 1);
    t.coeffs_[i] = 1.0;
    return t;
  }

  static AltTensor covector(const Vec& components) {
    AltTensor t(static_cast<int>(components.size()), 1);
    for (int i = 0; i < components.size(); ++i) t.coeffs_[i] = components[i];
    return t;
  }

  /// Rank-2 tensor from its coefficient matrix Omega_ij = a(e_i, e_j).
  /// Only the strict upper triangle is read.
  static AltTensor from_matrix(const Mat& m) {
    const int n = static_cast<int>(m.rows());
    AltTensor t(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) t.at2(i, j) = m(i, j);
    return t;
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return coeffs_.size(); }

  double& operator[](std::size_t k) { return coeffs_[k]; }
  double operator[](std::size_t k) const { return coeffs_[k]; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  std::uint16_t mask(std::size_t k) const { return detail::table(dim_, rank_).masks[k]; }

  /// Coefficient on an increasing multi-index given as a bitmask.
  double by_mask(std::uint16_t m) const {
    int p = detail::table(dim_, rank_).position[m];
    return p < 0 ? 0.0 : coeffs_[p];
  }
  double& by_mask(std::uint16_t m) { return coeffs_[detail::table(dim_, rank_).position[m]]; }

  double& at2(int i, int j) {
    return by_mask(static_cast<std::uint16_t>((1u << i) | (1u << j)));
  }

  /// Fully antisymmetric component a_{i_1...i_k} for an arbitrary index list.
  double component(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank_) throw RankOverflow("index list length != rank");
    std::uint16_t m = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (m & (1u << idx[a])) return 0.0;
      m |= std::uint16_t(1u << idx[a]);
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[b] < idx[a]) ++inversions;
    }
    return (inversions & 1 ? -1.0 : 1.0) * by_mask(m);
  }

  /// a(v_1, ..., v_k).
  double evaluate(std::span<const Vec> vs) const {
    if (static_cast<int>(vs.size()) != rank_) throw RankOverflow("argument count != rank");
    if (rank_ == 0) return coeffs_[0];
    double total = 0.0;
    Mat minor(rank_, rank_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0.0) continue;
      auto rows = detail::indices_of(mask(k));
      for (int r = 0; r < rank_; ++r)
        for (int c = 0; c < rank_; ++c) minor(r, c) = vs[c][rows[r]];
      total += coeffs_[k] * minor.determinant();
    }
    return total;
  }

  /// Coefficient matrix of a rank-2 tensor, Omega_ij = a(e_i, e_j).
  Mat matrix() const {
    if (rank_ != 2) throw RankOverflow("matrix() requires rank 2");
    Mat m = Mat::Zero(dim_, dim_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      auto ij = detail::indices_of(mask(k));
      m(ij[0], ij[1]) = coeffs_[k];
      m(ij[1], ij[0]) = -coeffs_[k];
    }
    return m;
  }

  Vec vector() const {
    if (rank_ != 1) throw RankOverflow("vector() requires rank 1");
    return Eigen::Map<const Vec>(coeffs_.data(), dim_);
  }

  double max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  AltTensor& operator+=(const AltTensor& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  AltTensor& operator-=(const AltTensor& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  AltTensor& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }

  friend AltTensor operator+(AltTensor a, const AltTensor& b) { return a += b; }
  friend AltTensor operator-(AltTensor a, const AltTensor& b) { return a -= b; }
  friend AltTensor operator*(double s, AltTensor a) { return a *= s; }
  friend AltTensor operator*(AltTensor a, double s) { return a *= s; }

  friend bool operator==(const AltTensor& a, const AltTensor& b) {
    return a.dim_ == b.dim_ && a.rank_ == b.rank_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same_shape(const AltTensor& o) const {
    if (o.dim_ != dim_ || o.rank_ != rank_) throw DimensionMismatch("tensor shapes differ");
  }

  int dim_;
  int rank_;
  std::vector<double> coeffs_;
};

/// Exterior product with the shuffle normalization.
///
/// Terms of each output coefficient are summed in an order that depends only
/// on the unordered pair of index sets, so a^b = (-1)^{pq} b^a holds exactly.
inline AltTensor wedge(const AltTensor& a, const AltTensor& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of tensors on different charts");
  const int p = a.rank(), q = b.rank();
  if (p + q > a.dim())
    throw RankOverflow("wedge of ranks " + std::to_string(p) + " and " + std::to_string(q) +
                       " on dimension " + std::to_string(a.dim()));
  AltTensor out(a.dim(), p + q);
  auto term = [&](std::uint16_t I, std::uint16_t J) {
    return detail::shuffle_sign(I, J) * (a.by_mask(I) * b.by_mask(J));
  };
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint16_t K = out.mask(k);
    double sum = 0.0;
    // Submasks S of K in increasing order; S is the smaller half of the split.
    for (std::uint16_t S = 0;; S = static_cast<std::uint16_t>((S - K) & K)) {
      const auto T = static_cast<std::uint16_t>(K ^ S);
      if (S < T || (S == T && S == 0)) {
        const int c = std::popcount(S);
        if (p == q) {
          if (c == p) sum += term(S, T) + term(T, S);
        } else if (c == p) {
          sum += term(S, T);
        } else if (c == q) {
          sum += term(T, S);
        }
      }
      if (S == K) break;
    }
    out[k] = sum;
  }
  return out;
}

/// Contraction in the first slot: (i(v)a)(w_1..w_{k-1}) = a(v, w_1, ..., w_{k-1}).
inline AltTensor interior(const Vec& v, const AltTensor& a) {
  if (v.size() != a.dim()) throw DimensionMismatch("vector and tensor dimensions differ");
  if (a.rank() == 0) throw RankOverflow("interior product of a rank-0 tensor");
  AltTensor out(a.dim(), a.rank() - 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    const auto K = a.mask(k);
    int pos = 0;
    for (std::uint16_t rest = K; rest; rest &= rest - 1, ++pos) {
      const int i = std::countr_zero(rest);
      if (v[i] == 0.0) continue;
      out.by_mask(static_cast<std::uint16_t>(K & ~(1u << i))) += ((pos & 1) ? -1.0 : 1.0) * v[i] * a[k];
    }
  }
  return out;
}

}  // namespace confsym
