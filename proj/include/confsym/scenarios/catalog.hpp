#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "confsym/scenarios/cotangent.hpp"
#include "confsym/scenarios/ellipsoid.hpp"
#include "confsym/scenarios/hyperboloid.hpp"
#include "confsym/scenarios/invariants.hpp"
#include "confsym/scenarios/scenario.hpp"

namespace confsym {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"hopf_ellipsoid", "cylinder_contact", "mapping_torus", "hyperboloid",
                                                 "cotangent_circle"};
  return names;
}

namespace detail {

inline std::string format_point(const Vec& p) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << "]";
  return os.str();
}

inline void smoke_require(bool ok, const std::string& what, double value, const Vec& p) {
  if (!ok) throw SmokeFail(what + " = " + std::to_string(value) + " at " + format_point(p));
}

}  // namespace detail

/// Type invariants of a scenario on a 64-point sample.
inline void smoke_test(const Scenario& s) {
  constexpr double step = 1e-5;
  const auto batch = s.sample(64, 0x736d6f6b65ull, Strategy::full(), 1.0);
  const auto gens = s.deck();
  for (const Vec& p : batch.points) {
    const double g = gradient_residual(s, p);
    detail::smoke_require(g <= gradient_tolerance(s, p), "potential gradient residual", g, p);
    for (const auto& gen : gens) {
      const double df = deck_potential_residual(s, gen, p);
      detail::smoke_require(df <= 1e-10, "deck potential residual (" + gen.label + ")", df, p);
      const double dw = deck_omega_residual(s, gen, p);
      detail::smoke_require(dw <= 1e-8, "deck omega residual (" + gen.label + ")", dw, p);
    }
    const double dto = d_theta_omega_residual(s, p, step);
    detail::smoke_require(dto <= 1e-5, "d_theta omega residual", dto, p);
    if (s.zeta()) {
      const double lee = lee_hyperplane_residual(s, p);
      detail::smoke_require(lee <= 1e-9, "Lee hyperplane residual", lee, p);
    }
    for (int a = 0; a < s.group().algebra_dim(); ++a) {
      const double mc = moment_condition_residual(s, p, a, step);
      detail::smoke_require(mc <= 1e-5, "moment condition residual (" + s.group().basis_name(a) + ")", mc, p);
    }
  }
}

/// Builds a catalog scenario; validates parameters and runs the smoke test.
inline ScenarioPtr build(const std::string& name, const json& params = json::object(), bool smoke = true) {
  const json& j = params.is_null() ? json::object() : params;
  ScenarioPtr s;
  if (name == "hopf_ellipsoid") {
    s = std::make_shared<EllipsoidScenario>(EllipsoidScenario::Variant::Hopf,
                                            EllipsoidScenario::parse(j, EllipsoidScenario::Variant::Hopf));
  } else if (name == "cylinder_contact") {
    s = std::make_shared<EllipsoidScenario>(EllipsoidScenario::Variant::Cylinder,
                                            EllipsoidScenario::parse(j, EllipsoidScenario::Variant::Cylinder));
  } else if (name == "mapping_torus") {
    s = std::make_shared<EllipsoidScenario>(EllipsoidScenario::Variant::MappingTorus,
                                            EllipsoidScenario::parse(j, EllipsoidScenario::Variant::MappingTorus));
  } else if (name == "hyperboloid") {
    s = std::make_shared<HyperboloidScenario>(HyperboloidScenario::parse(j));
  } else if (name == "cotangent_circle") {
    s = std::make_shared<CotangentScenario>(CotangentScenario::parse(j));
  } else {
    throw BadParams("unknown scenario \"" + name + "\"");
  }
  if (smoke) smoke_test(*s);
  return s;
}

}  // namespace confsym
