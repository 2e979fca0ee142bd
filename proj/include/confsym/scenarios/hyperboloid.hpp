#pragma once

#include <cmath>
#include <string>

#include "confsym/scenarios/scenario.hpp"

namespace confsym {

/// The domain q(x, y) = c x.y > 0 in R^3 x R^3, coordinates (x_1, x_2, x_3, y_1, y_2, y_3).
///
///   f               = log q
///   omega_tilde     = sum_j dx_j ^ dy_j
///   K               = S^1 x SO(3); S^1 generated by (x, y) -> (e^t x, e^{-t} y),
///                     SO(3) acting diagonally
///   Phi_tilde       = (x.y, x cross y)   (circle component, then so(3) components)
///   zeta            = (c, 0, 0, 0), zeta_M = c (x, -y)
///   reduced moment  = (1/c, |x cross y| / q)
///
/// Deck group: exp(zeta) with chi = 0 and the dilation e^{d/2} with chi = d.
class HyperboloidScenario : public Scenario {
 public:
  struct Params {
    double c = 1.0;
    double deck_shift = 1.0;
  };

  static Params parse(const json& j) {
    if (!j.is_object()) throw BadParams("params must be an object");
    Params p;
    if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<int>() != 3)) throw BadParams("hyperboloid requires n = 3");
    if (j.contains("c")) {
      if (!j["c"].is_number()) throw BadParams("c must be a number");
      p.c = j["c"].get<double>();
    }
    if (j.contains("zeta")) {
      const auto& z = j["zeta"];
      if (!z.is_array() || z.size() != 3) throw BadParams("zeta must be c times the identity, given as [c, c, c]");
      for (const auto& e : z)
        if (!e.is_number() || e.get<double>() != z[0].get<double>())
          throw BadParams("zeta must be c times the identity, given as [c, c, c]");
      if (j.contains("c") && z[0].get<double>() != p.c) throw BadParams("zeta and c disagree");
      p.c = z[0].get<double>();
    }
    if (!(p.c > 0.0) || !std::isfinite(p.c)) throw BadParams("zeta entries must satisfy zeta_1>=...>=zeta_n>0 (c > 0)");
    p.deck_shift = j.value("deck_shift", 1.0);
    if (p.deck_shift == 0.0 || !std::isfinite(p.deck_shift)) throw BadParams("deck_shift must be nonzero");
    return p;
  }

  static json echo(const Params& p) { return {{"n", 3}, {"c", p.c}, {"deck_shift", p.deck_shift}}; }

  explicit HyperboloidScenario(const Params& p)
      : Scenario("hyperboloid", 6, GroupSpec::circle_times_so3(), LeeElement{(Vec(4) << p.c, 0, 0, 0).finished()},
                 echo(p)),
        p_(p) {}

  static Eigen::Vector3d xs(const Vec& p) { return p.head(3); }
  static Eigen::Vector3d ys(const Vec& p) { return p.tail(3); }

  double q(const Vec& p) const { return p_.c * xs(p).dot(ys(p)); }

  bool in_domain(const Vec& p) const override { return p.size() == 6 && p.allFinite() && q(p) > 0.0; }

  double potential(const Vec& p) const override { return std::log(q(p)); }

  Vec potential_gradient(const Vec& p) const override {
    const double s = xs(p).dot(ys(p));
    Vec g(6);
    g << ys(p) / s, xs(p) / s;
    return g;
  }

  AltTensor omega_tilde(const Vec&) const override {
    AltTensor w(6, 2);
    for (int j = 0; j < 3; ++j) w.at2(j, 3 + j) = 1.0;
    return w;
  }

  Vec moment_tilde_components(const Vec& p) const override {
    Vec c(4);
    c << xs(p).dot(ys(p)), xs(p).cross(ys(p));
    return c;
  }

  Vec infinitesimal_action(const Vec& xi, const Vec& p) const override {
    group().check_algebra(xi);
    const Eigen::Vector3d w = xi.tail(3);
    Vec v(6);
    v << xi[0] * xs(p) + w.cross(xs(p)), -xi[0] * ys(p) + w.cross(ys(p));
    return v;
  }

  Vec group_action(const GroupElement& g, const Vec& p) const override {
    group().check_element(g);
    const Mat R = g.matrix.real();
    Vec v(6);
    v << std::exp(g.central) * (R * xs(p)), std::exp(-g.central) * (R * ys(p));
    return v;
  }

  std::vector<DeckGenerator> deck() const override {
    const double c = p_.c, d = p_.deck_shift;
    return {{[c](const Vec& p) {
               Vec v(6);
               v << std::exp(c) * p.head(3), std::exp(-c) * p.tail(3);
               return v;
             },
             0.0, "exp(zeta)"},
            {[d](const Vec& p) { return Vec(std::exp(0.5 * d) * p); }, d, "dilation e^{d/2}"}};
  }

  int rank() const override { return 1; }

  std::optional<Vec> analytic_lee(const Vec& p) const override {
    Vec v(6);
    v << p_.c * xs(p), -p_.c * ys(p);
    return v;
  }

  std::string description() const override {
    return "Hyperboloid x.y > 0 in R^3 x R^3 with S^1 x SO(3) symmetry; moment body is an unbounded ray";
  }

 protected:
  Vec sample_level(CounterRng& rng, double level, double sigma) const override {
    Eigen::Vector3d x;
    do {
      for (int i = 0; i < 3; ++i) x[i] = rng.normal();
    } while (x.norm() < 0.5);
    Eigen::Vector3d w;
    for (int i = 0; i < 3; ++i) w[i] = sigma * rng.normal();
    w -= (w.dot(x) / x.squaredNorm()) * x;
    const Eigen::Vector3d y = x / (p_.c * x.squaredNorm()) + w;
    const double s = std::exp(0.5 * level);
    Vec p(6);
    p << s * x, s * y;
    return p;
  }

 private:
  Params p_;
};

}  // namespace confsym
