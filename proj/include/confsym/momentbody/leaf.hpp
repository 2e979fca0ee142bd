#pragma once

#include <algorithm>
#include <vector>

#include "confsym/momentbody/body.hpp"
#include "confsym/scenarios/checks.hpp"

namespace confsym {

struct LeafStabilityReport {
  std::vector<double> levels;
  std::vector<BodyReport> bodies;
  Mat hausdorff;                          // pairwise between level bodies
  std::vector<std::vector<int>> corank;   // [level][probe]
  double max_hausdorff = 0.0;
  bool all_corank_one = true;
  bool unbounded = false;
};

inline LeafStabilityReport leaf_stability(const Scenario& s, const std::vector<double>& levels, std::size_t count,
                                          std::uint64_t seed, double sigma = 1.0, int probes = 10) {
  if (levels.empty()) throw EmptyInput("no leaf levels");
  LeafStabilityReport r;
  r.levels = levels;
  const auto m = static_cast<Eigen::Index>(levels.size());
  r.hausdorff = Mat::Zero(m, m);
  for (double t : levels) {
    const MomentCloud cloud = compute_cloud(s, count, seed, Strategy::leaf(t), sigma);
    r.bodies.push_back(body(cloud));
    const MomentCloud wide = compute_cloud(s, count, seed, Strategy::leaf(t), 2.0 * sigma);
    r.unbounded = r.unbounded || hull(wide.reduced).diameter() > 1.2 * r.bodies.back().diameter;
    std::vector<int> row;
    for (int i = 0; i < probes; ++i) row.push_back(leaf_corank(s, cloud.batch.points[static_cast<std::size_t>(i) % cloud.size()]));
    r.all_corank_one = r.all_corank_one && std::all_of(row.begin(), row.end(), [](int c) { return c == 1; });
    r.corank.push_back(std::move(row));
  }
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double h = hausdorff(r.bodies[static_cast<std::size_t>(i)].polytope, r.bodies[static_cast<std::size_t>(j)].polytope);
      r.hausdorff(i, j) = r.hausdorff(j, i) = h;
      r.max_hausdorff = std::max(r.max_hausdorff, h);
    }
  return r;
}

}  // namespace confsym
