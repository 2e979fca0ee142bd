#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "confsym/scenarios/scenario.hpp"

namespace confsym {

/// T^*T^2 with coordinates (a, b, p_a, p_b), Liouville form alpha = p_a da + p_b db
/// and Lee form theta = c da (closed, not exact on the torus).
///
///   f            = c a                  (on the cover a in R)
///   omega        = d alpha + theta ^ alpha
///   omega_tilde  = e^{c a} omega = d(e^{c a} alpha)
///   K            = S^1 acting by b -> b + phi (cotangent lift)
///   Phi          = -i(xi_M) alpha = -p_b,  Phi_tilde = -e^{c a} p_b
///
/// Phi is unbounded in both directions, so no zeta has Phi^zeta = 1.
class CotangentScenario : public Scenario {
 public:
  struct Params {
    double c = 1.0;
  };

  static Params parse(const json& j) {
    if (!j.is_object()) throw BadParams("params must be an object");
    Params p;
    if (j.contains("c")) {
      if (!j["c"].is_number()) throw BadParams("c must be a number");
      p.c = j["c"].get<double>();
    }
    if (p.c == 0.0 || !std::isfinite(p.c)) throw BadParams("c must be a nonzero constant");
    return p;
  }

  explicit CotangentScenario(const Params& p)
      : Scenario("cotangent_circle", 4, GroupSpec::torus(1), std::nullopt, json{{"c", p.c}}), p_(p) {}

  bool in_domain(const Vec& p) const override { return p.size() == 4 && p.allFinite(); }

  double potential(const Vec& p) const override { return p_.c * p[0]; }

  Vec potential_gradient(const Vec&) const override { return (Vec(4) << p_.c, 0, 0, 0).finished(); }

  /// d(e^{ca} alpha) = e^{ca} (c da ^ (p_a da + p_b db) + dp_a ^ da + dp_b ^ db).
  AltTensor omega_tilde(const Vec& p) const override {
    const double e = std::exp(p_.c * p[0]);
    AltTensor w(4, 2);
    w.at2(0, 1) = e * p_.c * p[3];
    w.at2(0, 2) = -e;
    w.at2(1, 3) = -e;
    return w;
  }

  Vec moment_tilde_components(const Vec& p) const override {
    return Vec::Constant(1, -std::exp(p_.c * p[0]) * p[3]);
  }

  Vec infinitesimal_action(const Vec& xi, const Vec&) const override {
    group().check_algebra(xi);
    return (Vec(4) << 0, xi[0], 0, 0).finished();
  }

  Vec group_action(const GroupElement& g, const Vec& p) const override {
    group().check_element(g);
    Vec q = p;
    q[1] += std::arg(g.matrix(0, 0));
    return q;
  }

  std::vector<DeckGenerator> deck() const override {
    const double two_pi = 2.0 * std::numbers::pi;
    return {{[two_pi](const Vec& p) {
               Vec q = p;
               q[0] += two_pi;
               return q;
             },
             two_pi * p_.c, "a -> a + 2 pi"},
            {[two_pi](const Vec& p) {
               Vec q = p;
               q[1] += two_pi;
               return q;
             },
             0.0, "b -> b + 2 pi"}};
  }

  int rank() const override { return 1; }

  std::string description() const override {
    return "Cotangent bundle of T^2 with Lee form c da and the lifted circle action on b (not of Lee type)";
  }

 protected:
  Vec sample_level(CounterRng& rng, double level, double sigma) const override {
    Vec p(4);
    p << level / p_.c, rng.uniform(0.0, 2.0 * std::numbers::pi), sigma * rng.normal(), sigma * rng.normal();
    return p;
  }

 private:
  Params p_;
};

}  // namespace confsym
