#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "confsym/momentbody/body.hpp"

namespace confsym {

struct LocalConeReport {
  Vec apex;
  std::vector<Vec> directions;  // clustered unit directions r_i - apex
  std::vector<Vec> rays;        // extreme rays, unit length
  std::vector<Facet> facets;    // facets through the apex, outward normals
  std::vector<Facet> equations; // affine span of the cone
  bool pointed = true;
  std::optional<double> containment_violation;
  std::optional<double> analytic_angle_deg;  // worst mismatch against the closed form
};

inline double angle_deg(const Vec& a, const Vec& b) {
  const double c = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

/// Greedy clustering of unit vectors at the given angular resolution.
inline std::vector<Vec> cluster_directions(const std::vector<Vec>& dirs, double angle_tol_deg) {
  std::vector<Vec> sums, reps;
  const double c = std::cos(angle_tol_deg * std::numbers::pi / 180.0);
  for (const auto& d : dirs) {
    bool placed = false;
    for (std::size_t k = 0; k < reps.size() && !placed; ++k) {
      if (d.dot(reps[k]) >= c) {
        sums[k] += d;
        placed = true;
      }
    }
    if (!placed) {
      sums.push_back(d);
      reps.push_back(d);
    }
  }
  for (std::size_t k = 0; k < reps.size(); ++k) reps[k] = sums[k].normalized();
  return reps;
}

/// Extreme rays of the cone generated by unit directions. For a pointed cone the
/// directions are cut by the plane <m, x> = 1 with m their mean; the hull
/// vertices of the section are the extreme rays.
inline std::vector<Vec> extreme_rays(const std::vector<Vec>& dirs, bool& pointed) {
  pointed = true;
  if (dirs.size() <= 1) return dirs;
  Vec m = Vec::Zero(dirs.front().size());
  for (const auto& d : dirs) m += d;
  if (m.norm() < 1e-9) {
    pointed = false;
    return dirs;
  }
  m.normalize();
  std::vector<Vec> section;
  for (const auto& d : dirs) {
    const double h = d.dot(m);
    if (h < 1e-6) {
      pointed = false;
      return dirs;
    }
    section.push_back(d / h);
  }
  std::vector<Vec> rays;
  for (const auto& v : hull(section).vertices) rays.push_back(v.normalized());
  return rays;
}

/// Local cone of the reduced moment map at a point, estimated from a ball of
/// samples around it.
inline LocalConeReport local_cone(const Scenario& s, const Vec& point, double radius, std::size_t count,
                                  std::uint64_t seed, double sigma = 1.0, double angle_tol_deg = 2.0,
                                  const Polytope* body_hull = nullptr) {
  LocalConeReport r;
  r.apex = s.reduced_moment(point);
  const MomentCloud cloud = compute_cloud(s, count, seed, Strategy::ball(point, radius), sigma);
  const double floor = 1e-8 * std::max(1.0, r.apex.norm());
  std::vector<Vec> dirs;
  std::vector<Vec> image{r.apex};
  for (const auto& x : cloud.reduced) {
    const Vec d = x - r.apex;
    image.push_back(x);
    if (d.norm() > floor) dirs.push_back(d.normalized());
  }
  const int local_rank = hull(image).affine_rank;
  r.directions = cluster_directions(dirs, angle_tol_deg);
  r.rays = cluster_directions(extreme_rays(dirs, r.pointed), angle_tol_deg);
  if (!r.pointed) r.rays = r.directions;
  if (static_cast<int>(r.rays.size()) < local_rank)
    throw TooFewRays("found " + std::to_string(r.rays.size()) + " rays for a cone of rank " +
                     std::to_string(local_rank));

  std::vector<Vec> gens{r.apex};
  for (const auto& u : r.rays) gens.push_back(r.apex + u);
  const Polytope P = hull(gens);
  r.equations = P.equations;
  const double scale = std::max(1.0, r.apex.norm());
  for (const auto& f : P.facets)
    if (std::abs(f.normal.dot(r.apex) - f.offset) <= 1e-9 * scale) r.facets.push_back(f);

  if (body_hull) {
    double v = 0.0;
    for (const auto& x : body_hull->vertices) {
      for (const auto& f : r.facets) v = std::max(v, f.normal.dot(x) - f.offset);
      for (const auto& e : r.equations) v = std::max(v, std::abs(e.normal.dot(x) - e.offset));
    }
    r.containment_violation = v;
  }
  return r;
}

/// Closed-form rays of the torus ellipsoid at the axis point z = e_j:
/// directions from e_j / zeta_j toward every other vertex e_k / zeta_k.
inline std::optional<std::vector<Vec>> analytic_axis_rays(const Scenario& s, const Vec& point) {
  const auto* e = dynamic_cast<const EllipsoidScenario*>(&s);
  if (!e || s.group().kind() != GroupKind::Torus) return std::nullopt;
  const Vec& zeta = e->ellipsoid_params().zeta;
  const int n = static_cast<int>(zeta.size());
  int axis = -1;
  const double scale = point.norm();
  for (int k = 0; k < n; ++k) {
    const double mod = std::hypot(point[2 * k], point[2 * k + 1]);
    if (mod > 1e-12 * scale) {
      if (axis >= 0) return std::nullopt;
      axis = k;
    }
  }
  if (axis < 0) return std::nullopt;
  const Vec apex = Vec::Unit(n, axis) / zeta[axis];
  std::vector<Vec> rays;
  for (int k = 0; k < n; ++k)
    if (k != axis) rays.push_back((Vec::Unit(n, k) / zeta[k] - apex).normalized());
  return rays;
}

/// Symmetric worst angle between two ray sets.
inline double ray_set_angle(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) return a.size() == b.size() ? 0.0 : 180.0;
  auto one_way = [](const std::vector<Vec>& x, const std::vector<Vec>& y) {
    double worst = 0.0;
    for (const auto& u : x) {
      double best = 180.0;
      for (const auto& v : y) best = std::min(best, angle_deg(u, v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

inline LocalConeReport local_cone_with_reference(const Scenario& s, const Vec& point, double radius, std::size_t count,
                                                 std::uint64_t seed, const Polytope* body_hull) {
  LocalConeReport r = local_cone(s, point, radius, count, seed, 1.0, 2.0, body_hull);
  if (const auto ref = analytic_axis_rays(s, point)) r.analytic_angle_deg = ray_set_angle(r.rays, *ref);
  return r;
}

}  // namespace confsym
