#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "confsym/cartan.hpp"
#include "confsym/scenarios/scenario.hpp"

namespace confsym {

/// max |grad f - central differences of f|, step shrunk where f is steep.
inline double gradient_residual(const Scenario& s, const Vec& p) {
  const Vec g = s.potential_gradient(p);
  const double h = 1e-5 * std::max(1.0, p.norm()) / (1.0 + g.norm());
  Vec q = p;
  double r = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    q[i] = p[i] + h;
    const double fp = s.potential(q);
    q[i] = p[i] - h;
    const double fm = s.potential(q);
    q[i] = p[i];
    r = std::max(r, std::abs((fp - fm) / (2 * h) - g[i]));
  }
  return r;
}

inline double gradient_tolerance(const Scenario& s, const Vec& p) {
  return 1e-8 * (1.0 + s.potential_gradient(p).norm());
}

/// |f(gamma p) - f(p) - chi(gamma)|
inline double deck_potential_residual(const Scenario& s, const DeckGenerator& g, const Vec& p) {
  return std::abs(s.potential(g.map(p)) - s.potential(p) - g.chi);
}

/// Relative deviation of gamma^* omega_tilde from e^{chi} omega_tilde.
inline double deck_omega_residual(const Scenario& s, const DeckGenerator& g, const Vec& p) {
  const int n = s.dim();
  Mat J(n, n);
  const double h = 1e-3 * std::max(1.0, p.norm());
  Vec q = p;
  for (int i = 0; i < n; ++i) {
    q[i] = p[i] + h;
    const Vec a = g.map(q);
    q[i] = p[i] - h;
    const Vec b = g.map(q);
    q[i] = p[i];
    J.col(i) = (a - b) / (2 * h);
  }
  const Mat pulled = J.transpose() * s.omega_tilde(g.map(p)).matrix() * J;
  const Mat expected = std::exp(g.chi) * s.omega_tilde(p).matrix();
  return (pulled - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff();
}

/// |e^{-chi} Phi_tilde(gamma p) - Phi_tilde(p)| relative to |Phi_tilde(p)|.
inline double deck_moment_residual(const Scenario& s, const DeckGenerator& g, const Vec& p) {
  const Vec a = s.moment_tilde(p), b = s.moment_tilde(g.map(p));
  return (std::exp(-g.chi) * b - a).cwiseAbs().maxCoeff() / std::max(1e-300, a.cwiseAbs().maxCoeff());
}

/// max coefficient of d omega + theta ^ omega.
inline double d_theta_omega_residual(const Scenario& s, const Vec& p, double step) {
  const auto st = s.structure();
  return d_theta(st.omega, st.theta, p, step).max_abs();
}

inline double theta_closed_residual(const Scenario& s, const Vec& p, double step) {
  return finite_d(s.structure().theta, p, step).max_abs();
}

/// |<Phi(p), zeta> - 1|
inline double lee_hyperplane_residual(const Scenario& s, const Vec& p) {
  return std::abs(s.group().pair(s.moment(p), s.zeta()->coords) - 1.0);
}

/// max coefficient of i(xi_M) omega - d_theta Phi^xi for basis element a.
inline double moment_condition_residual(const Scenario& s, const Vec& p, int a, double step) {
  const auto st = s.structure();
  const Vec xi = Vec::Unit(s.group().algebra_dim(), a);
  const AltTensor lhs = interior(s.infinitesimal_action(xi, p), st.omega(p));
  const AltTensor rhs = d_theta(s.moment_field(a), st.theta, p, step);
  return (lhs - rhs).max_abs();
}

/// |xi_M(p) - d/dt exp(t xi) p| with the derivative by central differences.
inline double action_crosscheck_residual(const Scenario& s, const Vec& xi, const Vec& p) {
  const double h = 1e-5;
  const Vec fd = (s.group_action(s.group().exponential(h * xi), p) - s.group_action(s.group().exponential(-h * xi), p)) /
                 (2 * h);
  return (fd - s.infinitesimal_action(xi, p)).cwiseAbs().maxCoeff();
}

}  // namespace confsym
