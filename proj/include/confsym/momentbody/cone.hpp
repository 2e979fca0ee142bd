#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "confsym/momentbody/body.hpp"

namespace confsym {

struct ConeReport {
  double max_deviation = 0.0;        // distance of q(r(Phi_tilde)) to the body
  double hyperplane_residual = 0.0;  // max |<Phi, zeta> - 1|
  std::size_t worst_index = 0;
  bool pass = false;
};

/// Rescales each Phi_tilde sample onto the zeta-hyperplane, projects to the
/// chamber and measures the distance to the body.
inline ConeReport verify_cone(const Scenario& s, const MomentCloud& cloud, const Polytope& body_hull, double tol,
                              double hyperplane_tol = 1e-9) {
  if (!s.zeta()) throw BadParams(s.name() + " is not of Lee type");
  const LeeElement& zeta = *s.zeta();
  const GroupSpec& g = s.group();
  ConeReport r;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    DualVector v;
    try {
      v = rescale(g, cloud.tilde[i], zeta);
    } catch (const OutsideHalfspace& e) {
      throw OutsideHalfspace(std::string(e.what()) + " (sample " + std::to_string(i) + ")");
    }
    const double d = body_hull.distance(g.chamber_project(v));
    if (d > r.max_deviation) {
      r.max_deviation = d;
      r.worst_index = i;
    }
    r.hyperplane_residual = std::max(r.hyperplane_residual, std::abs(g.pair(cloud.raw[i], zeta.coords) - 1.0));
  }
  r.pass = r.max_deviation <= tol && r.hyperplane_residual <= hyperplane_tol;
  return r;
}

}  // namespace confsym
