#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "confsym/momentbody/cloud.hpp"
#include "confsym/numerics/hull.hpp"
#include "confsym/numerics/rational.hpp"
#include "confsym/scenarios/ellipsoid.hpp"

namespace confsym {

/// Rational fit of a normal direction: coordinates divided by the
/// largest-magnitude one, each reconstructed at max_den.
struct NormalRationality {
  Vec normalized;
  std::vector<std::optional<RationalApprox>> coords;
  bool rational = false;
};

inline NormalRationality normal_rationality(const Vec& n, std::int64_t max_den) {
  NormalRationality r;
  Eigen::Index k = 0;
  n.cwiseAbs().maxCoeff(&k);
  r.normalized = n / n[k];
  r.rational = true;
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    r.coords.push_back(rational_reconstruct(r.normalized[i], max_den));
    r.rational = r.rational && r.coords.back().has_value();
  }
  return r;
}

/// Rationality of the linear span of the affine-hull normals: the reduced
/// row echelon form of a rational subspace has rational entries.
inline std::vector<NormalRationality> span_rationality(const std::vector<Facet>& equations, int dim,
                                                       std::int64_t max_den) {
  const auto k = static_cast<Eigen::Index>(equations.size());
  Mat E(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) E.row(i) = equations[static_cast<std::size_t>(i)].normal.transpose();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < dim && row < k; ++col) {
    Eigen::Index piv = row;
    E.col(col).segment(row, k - row).cwiseAbs().maxCoeff(&piv);
    piv += row;
    if (std::abs(E(piv, col)) < 1e-9) continue;
    E.row(row).swap(E.row(piv));
    E.row(row) /= E(row, col);
    for (Eigen::Index i = 0; i < k; ++i)
      if (i != row) E.row(i) -= E(i, col) * E.row(row);
    ++row;
  }
  std::vector<NormalRationality> out;
  for (Eigen::Index i = 0; i < row; ++i) out.push_back(normal_rationality(E.row(i).transpose(), max_den));
  return out;
}

struct BodyReport {
  Polytope polytope;
  double max_facet_violation = 0.0;
  std::optional<double> hausdorff_to_reference;
  bool unbounded_suspected = false;
  double diameter = 0.0;
  std::optional<double> diameter_at_double_spread;
  std::vector<Vec> recession_directions;  // unbounded bodies only
  std::vector<NormalRationality> facet_rationality;
  std::vector<NormalRationality> hull_rationality;  // affine-hull normals
  std::string note;

  /// Semirationality verdict: the affine hull of the body is cut out by
  /// rational normals. Facet normals inside the hull are sampled estimates
  /// and are reported but do not enter the verdict.
  bool semirational() const {
    for (const auto& r : hull_rationality)
      if (!r.rational) return false;
    return true;
  }
};

/// Hull of the reduced cloud with the facet violation of every point.
inline BodyReport body(const std::vector<Vec>& reduced, std::int64_t max_den = 10000) {
  BodyReport r;
  r.polytope = hull(reduced);
  for (const auto& x : reduced) r.max_facet_violation = std::max(r.max_facet_violation, r.polytope.violation(x));
  r.diameter = r.polytope.diameter();
  for (const auto& f : r.polytope.facets) r.facet_rationality.push_back(normal_rationality(f.normal, max_den));
  r.hull_rationality = span_rationality(r.polytope.equations, r.polytope.ambient_dim, max_den);
  return r;
}

inline BodyReport body(const MomentCloud& cloud, std::int64_t max_den = 10000) { return body(cloud.reduced, max_den); }

/// Vertices e_b / zeta_b of the ellipsoid body, one per block of equal zeta.
inline std::optional<std::vector<Vec>> analytic_body_vertices(const Scenario& s) {
  const auto* e = dynamic_cast<const EllipsoidScenario*>(&s);
  if (!e) return std::nullopt;
  const Vec& zeta = e->ellipsoid_params().zeta;
  const int n = static_cast<int>(zeta.size());
  std::vector<Vec> out;
  if (s.group().kind() == GroupKind::Torus) {
    for (int j = 0; j < n; ++j) out.push_back(Vec::Unit(n, j) / zeta[j]);
  } else {
    for (const auto& blk : s.group().blocks()) out.push_back(Vec::Unit(n, blk.first) / zeta[blk.first]);
  }
  return out;
}

/// Distances that grow when the spread doubles, clustered into unit directions
/// from the base point of the first hull.
inline std::vector<Vec> growth_directions(const Polytope& small, const Polytope& large, double tol) {
  std::vector<Vec> dirs;
  for (const auto& v : large.vertices) {
    if (small.distance(v) <= tol) continue;
    const Vec d = (v - small.base_point).normalized();
    bool seen = false;
    for (const auto& e : dirs) seen = seen || d.dot(e) > std::cos(2.0 * std::numbers::pi / 180.0);
    if (!seen) dirs.push_back(d);
  }
  return dirs;
}

/// body() with the unboundedness protocol: rerun at twice the spread and flag
/// a diameter increase above 20%.
inline BodyReport body_with_protocol(const Scenario& s, const MomentCloud& cloud, std::int64_t max_den = 10000) {
  BodyReport r = body(cloud, max_den);
  const auto& b = cloud.batch;
  const MomentCloud wide = compute_cloud(s, b.points.size(), b.seed, b.strategy, 2.0 * b.sigma);
  const Polytope wide_hull = hull(wide.reduced);
  r.diameter_at_double_spread = wide_hull.diameter();
  r.unbounded_suspected = *r.diameter_at_double_spread > 1.2 * r.diameter;
  r.polytope.unbounded_suspected = r.unbounded_suspected;
  if (r.unbounded_suspected) {
    r.recession_directions = growth_directions(r.polytope, wide_hull, cloud_tolerance(cloud.size()));
    r.note = "unbounded: hull is truncated at the sampled spread; polyhedrality is not asserted";
  } else if (const auto ref = analytic_body_vertices(s)) {
    r.hausdorff_to_reference = hausdorff(r.polytope, hull(*ref));
  }
  return r;
}

}  // namespace confsym
