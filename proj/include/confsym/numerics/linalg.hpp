#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "confsym/errors.hpp"
#include "confsym/numerics/alt_tensor.hpp"

namespace confsym {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct SkewSolve {
  Vec vector;
  double condition_number;
  double residual;  // max_j |omega(A, e_j) - theta_j|
};

/// Solves omega(A, .) = theta for A. With Omega_ij = omega(e_i, e_j) this is
/// Omega^T A = theta, i.e. A = -Omega^{-1} theta.
inline SkewSolve solve_skew(const AltTensor& omega, const AltTensor& theta) {
  if (omega.rank() != 2 || theta.rank() != 1) throw RankOverflow("solve_skew expects ranks (2, 1)");
  if (omega.dim() != theta.dim()) throw DimensionMismatch("solve_skew dimensions differ");
  const Mat W = omega.matrix();
  const Vec t = theta.vector();
  Eigen::JacobiSVD<Mat> svd(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s(0), smin = s(s.size() - 1);
  if (smax == 0.0 || smin < 1e-12 * smax)
    throw SingularForm("smallest singular value " + std::to_string(smin) + " vs largest " +
                       std::to_string(smax));
  SkewSolve out;
  out.vector = svd.solve(-t);
  out.condition_number = smax / smin;
  out.residual = (W.transpose() * out.vector - t).cwiseAbs().maxCoeff();
  return out;
}

struct Eigensystem {
  Vec values;     // descending
  CMat vectors;   // columns; first nonzero entry real and positive
  int sweeps = 0;
};

namespace detail {

inline double max_abs(const CMat& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) r = std::max(r, std::abs(m.data()[i]));
  return r;
}

inline double off_diagonal(const CMat& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

inline double leading_component(const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-12) return v(i).real();
  return 0.0;
}

}  // namespace detail

/// Cyclic Jacobi on a Hermitian matrix.
inline Eigensystem eig_desc_full(const CMat& H) {
  const Eigen::Index n = H.rows();
  if (H.cols() != n) throw NotHermitian("matrix is not square");
  const double norm = detail::max_abs(H);
  if (detail::max_abs(H - H.adjoint()) > 1e-12 * std::max(1.0, norm))
    throw NotHermitian("asymmetry exceeds 1e-12");

  CMat A = 0.5 * (H + H.adjoint());
  CMat V = CMat::Identity(n, n);
  const double threshold = 1e-13 * norm;
  int sweep = 0;
  for (; sweep < 50 && detail::off_diagonal(A) > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(A(p, q));
        if (r == 0.0) continue;
        // Phase the pair so the off-diagonal entry is real, then rotate.
        const cplx phase = A(p, q) / r;
        const double app = A(p, p).real(), aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        CMat R = CMat::Identity(n, n);
        R(p, p) = c;
        R(p, q) = s;
        R(q, p) = -s * std::conj(phase);
        R(q, q) = c * std::conj(phase);
        A = R.adjoint() * A * R;
        V = V * R;
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  CMat vecs = V;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(vecs(i, k)) > 1e-12) {
        vecs.col(k) *= std::conj(vecs(i, k)) / std::abs(vecs(i, k));
        break;
      }
    }
  }
  const double tie = 1e-12 * std::max(1.0, norm);
  // Insertion sort: tolerance-based ties are not a strict weak ordering.
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = i; j > 0; --j) {
      const Eigen::Index a = order[j - 1], b = order[j];
      const double la = A(a, a).real(), lb = A(b, b).real();
      const bool swap = (lb > la + tie) ||
                        (std::abs(lb - la) <= tie &&
                         detail::leading_component(vecs.col(b)) > detail::leading_component(vecs.col(a)));
      if (!swap) break;
      std::swap(order[j - 1], order[j]);
    }
  }

  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = A(order[k], order[k]).real();
    out.vectors.col(k) = vecs.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

inline Vec eig_desc(const CMat& H) { return eig_desc_full(H).values; }

struct FormRank {
  int rank = 0;
  std::vector<Vec> kernel;
  bool odd_rank_warning = false;
  Vec singular_values;
};

inline FormRank rank_of_form(const AltTensor& omega, double tol = 1e-8) {
  if (omega.rank() != 2) throw RankOverflow("rank_of_form expects a 2-form");
  Eigen::JacobiSVD<Mat> svd(omega.matrix(), Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  FormRank out;
  out.singular_values = s;
  const double smax = s.size() ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > tol * smax) ++out.rank;
  for (Eigen::Index i = out.rank; i < s.size(); ++i) out.kernel.push_back(svd.matrixV().col(i));
  out.odd_rank_warning = (out.rank % 2) != 0;
  return out;
}

/// Pullback of a 2-form to the span of the columns of `basis`.
inline AltTensor restrict_form(const AltTensor& omega, const Mat& basis) {
  if (omega.rank() != 2) throw RankOverflow("restrict_form expects a 2-form");
  if (basis.rows() != omega.dim()) throw DimensionMismatch("basis rows != ambient dimension");
  return AltTensor::from_matrix(basis.transpose() * omega.matrix() * basis);
}

/// Orthonormal basis (columns) of the kernel of a nonzero covector.
inline Mat covector_kernel(const AltTensor& theta) {
  if (theta.rank() != 1) throw RankOverflow("covector_kernel expects a 1-form");
  Mat row = theta.vector().transpose();
  Eigen::JacobiSVD<Mat> svd(row, Eigen::ComputeFullV);
  if (svd.singularValues()(0) == 0.0) return Mat::Identity(theta.dim(), theta.dim());
  return svd.matrixV().rightCols(theta.dim() - 1);
}

}  // namespace confsym
