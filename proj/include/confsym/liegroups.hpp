#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "confsym/errors.hpp"
#include "confsym/numerics/linalg.hpp"
#include "confsym/numerics/random.hpp"

namespace confsym {

/// Supported compact groups.
///
/// Conventions, fixed here for every moment evaluator:
///  - Lie algebra elements are coordinate vectors in the basis returned by
///    GroupSpec::basis_matrix / basis_name.
///  - Torus(n): basis i E_jj of diagonal u(n); dual and chamber are R^n with the
///    dot product.
///  - UnitaryCentralizer(n, zeta): K is the centralizer of i diag(zeta) in U(n),
///    block diagonal over runs of equal zeta entries. Basis: i E_jj, then for
///    j < k in one block i (E_jk + E_kj) and (E_jk - E_kj). A basis element
///    is xi_a = i S_a with S_a Hermitian. A dual vector mu is stored as the
///    Hermitian matrix H = -i mu, so <mu, i S> = -tr(mu i S) = tr(H S). The
///    matrix is flattened as (H_11..H_nn, Re H_12, Im H_12, Re H_13, ...).
///  - SpecialOrthogonal3: basis e_1, e_2, e_3 of so(3) = R^3 (cross product);
///    chamber is |v|.
///  - CircleTimesSO3: K = S^1 x SO(3); basis (generator of S^1, e_1, e_2, e_3);
///    dual (mu_0, v); chamber (mu_0, |v|).
enum class GroupKind { Torus, UnitaryCentralizer, SpecialOrthogonal3, CircleTimesSO3 };

struct DualVector {
  Vec coords;
};

struct LeeElement {
  Vec coords;  // Lie algebra coordinates
};

/// Unitary kinds use `matrix`; SO(3) uses its real part; CircleTimesSO3 adds
/// the S^1 parameter `central`.
struct GroupElement {
  CMat matrix;
  double central = 0.0;
};

class GroupSpec {
 public:
  static GroupSpec torus(int n) {
    if (n < 1) throw SpecMismatch("torus rank must be positive");
    GroupSpec g(GroupKind::Torus, n);
    return g;
  }

  /// zeta positive with equal entries contiguous.
  static GroupSpec unitary_centralizer(const Vec& zeta) {
    const int n = static_cast<int>(zeta.size());
    if (n < 1) throw SpecMismatch("empty zeta");
    for (int j = 0; j < n; ++j)
      if (!(zeta[j] > 0.0)) throw SpecMismatch("zeta entries must satisfy zeta_1>=...>=zeta_n>0");
    GroupSpec g(GroupKind::UnitaryCentralizer, n);
    g.zeta_ = zeta;
    int start = 0;
    for (int j = 1; j <= n; ++j) {
      if (j == n || zeta[j] != zeta[start]) {
        g.blocks_.emplace_back(start, j);
        start = j;
      }
    }
    for (std::size_t a = 0; a < g.blocks_.size(); ++a)
      for (std::size_t b = a + 1; b < g.blocks_.size(); ++b)
        if (zeta[g.blocks_[a].first] == zeta[g.blocks_[b].first])
          throw SpecMismatch("equal zeta entries must be contiguous");
    for (int j = 0; j < n; ++j) g.pairs_.push_back({j, j});
    for (auto [s, e] : g.blocks_)
      for (int j = s; j < e; ++j)
        for (int k = j + 1; k < e; ++k) g.pairs_.push_back({j, k});
    return g;
  }

  static GroupSpec so3() { return GroupSpec(GroupKind::SpecialOrthogonal3, 3); }
  static GroupSpec circle_times_so3() { return GroupSpec(GroupKind::CircleTimesSO3, 3); }

  GroupKind kind() const { return kind_; }
  int n() const { return n_; }
  const Vec& zeta() const { return zeta_; }
  const std::vector<std::pair<int, int>>& blocks() const { return blocks_; }

  bool is_unitary() const { return kind_ == GroupKind::Torus || kind_ == GroupKind::UnitaryCentralizer; }

  int dual_dim() const {
    switch (kind_) {
      case GroupKind::Torus: return n_;
      case GroupKind::UnitaryCentralizer: return n_ * n_;
      case GroupKind::SpecialOrthogonal3: return 3;
      case GroupKind::CircleTimesSO3: return 4;
    }
    return 0;
  }

  int chamber_dim() const {
    switch (kind_) {
      case GroupKind::Torus:
      case GroupKind::UnitaryCentralizer: return n_;
      case GroupKind::SpecialOrthogonal3: return 1;
      case GroupKind::CircleTimesSO3: return 2;
    }
    return 0;
  }

  int algebra_dim() const {
    switch (kind_) {
      case GroupKind::Torus: return n_;
      case GroupKind::UnitaryCentralizer: return n_ + 2 * (static_cast<int>(pairs_.size()) - n_);
      case GroupKind::SpecialOrthogonal3: return 3;
      case GroupKind::CircleTimesSO3: return 4;
    }
    return 0;
  }

  std::string kind_name() const {
    switch (kind_) {
      case GroupKind::Torus: return "Torus(" + std::to_string(n_) + ")";
      case GroupKind::UnitaryCentralizer: return "UnitaryCentralizer(" + std::to_string(n_) + ")";
      case GroupKind::SpecialOrthogonal3: return "SO(3)";
      case GroupKind::CircleTimesSO3: return "S1xSO(3)";
    }
    return "";
  }

  std::string basis_name(int a) const {
    if (kind_ == GroupKind::UnitaryCentralizer && a >= n_) {
      const auto [j, k] = pairs_[n_ + (a - n_) / 2];
      return ((a - n_) % 2 == 0 ? "sym_" : "anti_") + std::to_string(j + 1) + std::to_string(k + 1);
    }
    if (kind_ == GroupKind::CircleTimesSO3) return a == 0 ? "circle" : "so3_" + std::to_string(a);
    return "e_" + std::to_string(a + 1);
  }

  /// Hermitian S_a with xi_a = i S_a (unitary kinds only).
  CMat hermitian_basis(int a) const {
    require_unitary();
    CMat S = CMat::Zero(n_, n_);
    if (a < n_) {
      S(a, a) = 1.0;
      return S;
    }
    const auto [j, k] = pairs_[n_ + (a - n_) / 2];
    if ((a - n_) % 2 == 0) {
      S(j, k) = S(k, j) = 1.0;
    } else {
      S(j, k) = cplx(0, -1);
      S(k, j) = cplx(0, 1);
    }
    return S;
  }

  /// Anti-Hermitian matrix of an algebra element (unitary kinds).
  CMat algebra_matrix(const Vec& xi) const {
    require_unitary();
    check_algebra(xi);
    CMat X = CMat::Zero(n_, n_);
    for (int a = 0; a < algebra_dim(); ++a) X += cplx(0, xi[a]) * hermitian_basis(a);
    return X;
  }

  /// H = -i mu as a matrix (unitary kinds).
  CMat hermitian(const DualVector& mu) const {
    require_unitary();
    check_dual(mu);
    if (kind_ == GroupKind::Torus) return mu.coords.cast<cplx>().asDiagonal();
    CMat H = CMat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) H(j, j) = mu.coords[j];
    int idx = n_;
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k, idx += 2) {
        H(j, k) = cplx(mu.coords[idx], mu.coords[idx + 1]);
        H(k, j) = std::conj(H(j, k));
      }
    return H;
  }

  DualVector from_hermitian(const CMat& H) const {
    require_unitary();
    if (kind_ == GroupKind::Torus) return {H.diagonal().real()};
    Vec c = Vec::Zero(dual_dim());
    for (int j = 0; j < n_; ++j) c[j] = H(j, j).real();
    int idx = n_;
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k, idx += 2) {
        if (block_of(j) != block_of(k)) continue;
        c[idx] = H(j, k).real();
        c[idx + 1] = H(j, k).imag();
      }
    return {c};
  }

  /// Dual vector with prescribed pairings <mu, xi_a> = components[a].
  DualVector from_components(const Vec& components) const {
    check_algebra(components);
    if (!is_unitary() || kind_ == GroupKind::Torus) return {components};
    CMat H = CMat::Zero(n_, n_);
    for (int a = 0; a < algebra_dim(); ++a) {
      const CMat S = hermitian_basis(a);
      H += (components[a] / (S * S).trace().real()) * S;
    }
    return from_hermitian(H);
  }

  /// Pairings <mu, xi_a> for every basis element.
  Vec components(const DualVector& mu) const {
    Vec c(algebra_dim());
    for (int a = 0; a < algebra_dim(); ++a) c[a] = pair(mu, Vec::Unit(algebra_dim(), a));
    return c;
  }

  double pair(const DualVector& mu, const Vec& xi) const {
    check_dual(mu);
    check_algebra(xi);
    if (kind_ != GroupKind::UnitaryCentralizer) return mu.coords.dot(xi);
    // -tr(mu xi) with mu = i H.
    const CMat H = hermitian(mu);
    const CMat X = algebra_matrix(xi);
    return -(cplx(0, 1) * H * X).trace().real();
  }

  Vec chamber_project(const DualVector& mu) const {
    check_dual(mu);
    switch (kind_) {
      case GroupKind::Torus: return mu.coords;
      case GroupKind::UnitaryCentralizer: {
        const CMat H = hermitian(mu);
        Vec out(n_);
        for (auto [s, e] : blocks_) out.segment(s, e - s) = eig_desc(H.block(s, s, e - s, e - s));
        return out;
      }
      case GroupKind::SpecialOrthogonal3: return Vec::Constant(1, mu.coords.norm());
      case GroupKind::CircleTimesSO3: {
        Vec out(2);
        out << mu.coords[0], mu.coords.tail(3).norm();
        return out;
      }
    }
    return {};
  }

  /// Linear functional w on the chamber with <c, w> = <mu, zeta> for c = q(mu).
  Vec chamber_pairing(const LeeElement& zeta) const {
    check_algebra(zeta.coords);
    switch (kind_) {
      case GroupKind::Torus: return zeta.coords;
      case GroupKind::UnitaryCentralizer: {
        const CMat Z = algebra_matrix(zeta.coords);
        if ((Z - CMat(Z.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 0.0)
          throw SpecMismatch("chamber pairing needs a diagonal (central) Lee element");
        return Z.diagonal().imag();
      }
      case GroupKind::SpecialOrthogonal3: throw SpecMismatch("so(3) has no central Lee element");
      case GroupKind::CircleTimesSO3: {
        if (zeta.coords.tail(3).cwiseAbs().maxCoeff() > 0.0)
          throw SpecMismatch("chamber pairing needs a central Lee element");
        Vec w(2);
        w << zeta.coords[0], 0.0;
        return w;
      }
    }
    return {};
  }

  void check_element(const GroupElement& g) const {
    const int m = kind_ == GroupKind::Torus || kind_ == GroupKind::UnitaryCentralizer ? n_ : 3;
    if (g.matrix.rows() != m || g.matrix.cols() != m) throw NotInGroup("wrong matrix size");
    const double dev = (g.matrix * g.matrix.adjoint() - CMat::Identity(m, m)).cwiseAbs().maxCoeff();
    if (dev > 1e-10) throw NotInGroup("matrix is not unitary (deviation " + std::to_string(dev) + ")");
    switch (kind_) {
      case GroupKind::Torus:
        if ((g.matrix - CMat(g.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-10)
          throw NotInGroup("torus element must be diagonal");
        break;
      case GroupKind::UnitaryCentralizer: {
        const CMat Z = zeta_.cast<cplx>().asDiagonal();
        if ((g.matrix * Z - Z * g.matrix).cwiseAbs().maxCoeff() > 1e-10)
          throw NotInGroup("element does not commute with zeta");
        break;
      }
      case GroupKind::SpecialOrthogonal3:
      case GroupKind::CircleTimesSO3:
        if (g.matrix.imag().cwiseAbs().maxCoeff() > 1e-10 || std::abs(g.matrix.real().determinant() - 1.0) > 1e-10)
          throw NotInGroup("element is not a real rotation");
        break;
    }
  }

  /// Ad*_g: H -> g H g^* for matrix kinds, v -> R v for rotations.
  DualVector coadjoint(const GroupElement& g, const DualVector& mu) const {
    check_element(g);
    check_dual(mu);
    switch (kind_) {
      case GroupKind::Torus: return mu;
      case GroupKind::UnitaryCentralizer: {
        CMat H = g.matrix * hermitian(mu) * g.matrix.adjoint();
        return from_hermitian(0.5 * (H + H.adjoint()));
      }
      case GroupKind::SpecialOrthogonal3: return {g.matrix.real() * mu.coords};
      case GroupKind::CircleTimesSO3: {
        Vec out = mu.coords;
        out.tail(3) = g.matrix.real() * mu.coords.tail(3);
        return {out};
      }
    }
    return mu;
  }

  GroupElement exponential(const Vec& xi) const {
    check_algebra(xi);
    switch (kind_) {
      case GroupKind::Torus:
      case GroupKind::UnitaryCentralizer: {
        // exp(i S) = V diag(e^{i lambda}) V^*
        CMat S = CMat::Zero(n_, n_);
        for (int a = 0; a < algebra_dim(); ++a) S += xi[a] * hermitian_basis(a);
        const auto es = eig_desc_full(S);
        CVec phases(n_);
        for (int j = 0; j < n_; ++j) phases[j] = std::exp(cplx(0, es.values[j]));
        return {es.vectors * phases.asDiagonal() * es.vectors.adjoint(), 0.0};
      }
      case GroupKind::SpecialOrthogonal3: return {rotation(xi).cast<cplx>(), 0.0};
      case GroupKind::CircleTimesSO3: return {rotation(xi.tail(3)).cast<cplx>(), xi[0]};
    }
    return {};
  }

  GroupElement random_element(CounterRng& rng) const {
    Vec xi(algebra_dim());
    for (int a = 0; a < algebra_dim(); ++a) xi[a] = rng.normal() * 2.0;
    return exponential(xi);
  }

  static Mat rotation(const Vec& axis_angle) {
    const double t = axis_angle.norm();
    Mat K = Mat::Zero(3, 3);
    K(0, 1) = -axis_angle[2];
    K(0, 2) = axis_angle[1];
    K(1, 0) = axis_angle[2];
    K(1, 2) = -axis_angle[0];
    K(2, 0) = -axis_angle[1];
    K(2, 1) = axis_angle[0];
    if (t == 0.0) return Mat::Identity(3, 3);
    return Mat::Identity(3, 3) + (std::sin(t) / t) * K + ((1 - std::cos(t)) / (t * t)) * K * K;
  }

  void check_dual(const DualVector& mu) const {
    if (mu.coords.size() != dual_dim())
      throw SpecMismatch("dual vector of size " + std::to_string(mu.coords.size()) + " for " + kind_name());
  }
  void check_algebra(const Vec& xi) const {
    if (xi.size() != algebra_dim())
      throw SpecMismatch("algebra element of size " + std::to_string(xi.size()) + " for " + kind_name());
  }

 private:
  GroupSpec(GroupKind k, int n) : kind_(k), n_(n) {}

  void require_unitary() const {
    if (!is_unitary()) throw SpecMismatch("operation needs a unitary group kind");
  }

  int block_of(int j) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (j >= blocks_[b].first && j < blocks_[b].second) return static_cast<int>(b);
    return -1;
  }

  GroupKind kind_;
  int n_;
  Vec zeta_;
  std::vector<std::pair<int, int>> blocks_;
  std::vector<std::pair<int, int>> pairs_;
};

inline double pair(const GroupSpec& g, const DualVector& mu, const Vec& xi) { return g.pair(mu, xi); }

inline Vec chamber_project(const GroupSpec& g, const DualVector& mu) { return g.chamber_project(mu); }

inline DualVector coadjoint(const GroupSpec& g, const GroupElement& e, const DualVector& mu) {
  return g.coadjoint(e, mu);
}

/// v -> v / <v, zeta> on the open halfspace <v, zeta> > 0.
inline DualVector rescale(const GroupSpec& g, const DualVector& mu, const LeeElement& zeta) {
  const double s = g.pair(mu, zeta.coords);
  if (!(s > 1e-14)) throw OutsideHalfspace("<mu, zeta> = " + std::to_string(s));
  return {mu.coords / s};
}

/// The same map on chamber coordinates.
inline Vec rescale_in_chamber(const GroupSpec& g, const Vec& c, const LeeElement& zeta) {
  const double s = c.dot(g.chamber_pairing(zeta));
  if (!(s > 1e-14)) throw OutsideHalfspace("<c, zeta> = " + std::to_string(s));
  return c / s;
}

}  // namespace confsym
