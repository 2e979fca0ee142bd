#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "confsym/numerics/linalg.hpp"
#include "confsym/scenarios/invariants.hpp"
#include "confsym/scenarios/scenario.hpp"

namespace confsym {

enum class LeeVerdict { LeeType, NotLeeType };

struct LeeTypeReport {
  LeeVerdict verdict = LeeVerdict::NotLeeType;
  Vec zeta;                     // declared or least-squares witness
  double residual = 0.0;        // max |Phi^zeta - 1| (declared) or RMS least-squares residual
  std::vector<double> table;    // per-probe residual Phi^zeta(p_i) - 1
  bool least_squares = false;
};

/// Fixed probe design: first 64 Full samples of seed 0.
inline std::vector<Vec> lee_probe_points(const Scenario& s, double sigma = 1.0) {
  return s.sample(64, 0, Strategy::full(), sigma).points;
}

/// Lee type iff Phi^zeta == 1. Without a declared zeta, the best xi in the
/// least-squares sense is reported together with its irreducible residual.
inline LeeTypeReport lee_type_check(const Scenario& s, const std::vector<Vec>& probes, double tol = 1e-9) {
  if (probes.size() < 8) throw BadParams("lee_type_check needs at least 8 probe points");
  LeeTypeReport r;
  const int m = static_cast<int>(probes.size());
  const int k = s.group().algebra_dim();
  Mat M(m, k);
  for (int i = 0; i < m; ++i) M.row(i) = s.moment_components(probes[static_cast<std::size_t>(i)]).transpose();
  if (s.zeta()) {
    r.zeta = s.zeta()->coords;
  } else {
    r.least_squares = true;
    r.zeta = M.colPivHouseholderQr().solve(Vec::Ones(m));
  }
  const Vec res = M * r.zeta - Vec::Ones(m);
  r.table.assign(res.data(), res.data() + m);
  if (r.least_squares) {
    r.residual = std::sqrt(res.squaredNorm() / m);
  } else {
    r.residual = res.cwiseAbs().maxCoeff();
  }
  r.verdict = r.residual <= tol ? LeeVerdict::LeeType : LeeVerdict::NotLeeType;
  return r;
}

inline std::string to_string(LeeVerdict v) { return v == LeeVerdict::LeeType ? "LeeType" : "NotLeeType"; }

/// max |Phi(g x) - Ad*_g Phi(x)| over dual coordinates.
inline double equivariance_residual(const Scenario& s, const GroupElement& g, const Vec& p) {
  const DualVector lhs = s.moment(s.group_action(g, p));
  const DualVector rhs = s.group().coadjoint(g, s.moment(p));
  return (lhs.coords - rhs.coords).cwiseAbs().maxCoeff();
}

/// Corank of omega restricted to ker theta (the leaf tangent space).
inline int leaf_corank(const Scenario& s, const Vec& p, double tol = 1e-8) {
  const Mat K = covector_kernel(s.theta(p));
  const auto fr = rank_of_form(restrict_form(s.omega(p), K), tol);
  return static_cast<int>(K.cols()) - fr.rank;
}

/// Diagnostics for a first-kind structure with anti-Lee field B at p.
struct FirstKindSample {
  double theta_of_b = 0.0;        // theta(B)
  double volume = 0.0;            // top coefficient of theta ^ alpha ^ (d alpha)^{n-1}
  double reeb_vs_lee = 0.0;       // |R + A|
  double reeb_vs_analytic = 0.0;  // |R - R_analytic| (NaN when unknown)
  double contact_moment = 0.0;    // max_xi |Psi^xi - Phi^xi|, Psi^xi = -alpha(xi_M)
};

namespace detail {

inline AltTensor power(const AltTensor& a, int k) {
  AltTensor out = AltTensor::scalar(a.dim(), 1.0);
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

}  // namespace detail

/// alpha = i(B) omega as a field.
inline FormField contact_form_field(const Scenario& s) {
  const auto B = s.anti_lee();
  if (!B) throw BadParams(s.name() + " has no anti-Lee field");
  return interior_field(*B, s.structure().omega);
}

/// Reeb field of alpha on the leaf through p: the kernel of d alpha on ker theta,
/// normalized by alpha(R) = 1.
inline Vec reeb_field(const Scenario& s, const Vec& p, double step) {
  const FormField alpha = contact_form_field(s);
  const AltTensor da = finite_d(alpha, p, step);
  const Mat K = covector_kernel(s.theta(p));
  const auto fr = rank_of_form(restrict_form(da, K), 1e-6);
  if (fr.kernel.size() != 1)
    throw SingularForm("d alpha on the leaf has kernel of dimension " + std::to_string(fr.kernel.size()));
  Vec R = K * fr.kernel.front();
  R /= alpha(p).vector().dot(R);
  return R;
}

inline FirstKindSample first_kind_sample(const Scenario& s, const Vec& p, double step) {
  const auto B = s.anti_lee();
  if (!B) throw BadParams(s.name() + " has no anti-Lee field");
  FirstKindSample r;
  const Vec b = (*B)(p);
  const AltTensor theta = s.theta(p);
  r.theta_of_b = theta.vector().dot(b);
  const FormField alpha_f = contact_form_field(s);
  const AltTensor alpha = alpha_f(p);
  const AltTensor da = finite_d(alpha_f, p, step);
  const int n = s.dim() / 2;
  r.volume = wedge(wedge(theta, alpha), detail::power(da, n - 1))[0];
  const Vec R = reeb_field(s, p, step);
  r.reeb_vs_lee = (R + s.lee_field(p)).cwiseAbs().maxCoeff();
  const auto Ra = s.analytic_reeb(p);
  r.reeb_vs_analytic = Ra ? (R - *Ra).cwiseAbs().maxCoeff() : std::nan("");
  const Vec phi = s.moment_components(p);
  for (int a = 0; a < s.group().algebra_dim(); ++a) {
    const Vec xi = Vec::Unit(s.group().algebra_dim(), a);
    const double psi = -alpha.vector().dot(s.infinitesimal_action(xi, p));
    r.contact_moment = std::max(r.contact_moment, std::abs(psi - phi[a]));
  }
  return r;
}

/// Relative deviation of Phi_tilde(F_0(t, q)) from e^t Psi(q) for q on the leaf f = 0,
/// with F_0 the flow of B.
inline double cone_moment_residual(const Scenario& s, const Vec& q, double t) {
  const auto moved = s.anti_lee_flow(t, q);
  if (!moved) throw BadParams(s.name() + " has no anti-Lee flow");
  const Vec alpha = contact_form_field(s)(q).vector();
  const int k = s.group().algebra_dim();
  Vec psi(k);
  for (int a = 0; a < k; ++a) psi[a] = -alpha.dot(s.infinitesimal_action(Vec::Unit(k, a), q));
  const Vec lhs = s.moment_tilde(*moved);
  const Vec rhs = std::exp(t) * psi;
  return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1e-300, rhs.cwiseAbs().maxCoeff());
}

}  // namespace confsym
