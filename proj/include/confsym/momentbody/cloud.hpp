#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "confsym/scenarios/scenario.hpp"

namespace confsym {

/// Sampled points with Phi, Phi_tilde and q o Phi, index-aligned with the batch.
struct MomentCloud {
  std::string scenario;
  SampleBatch batch;
  std::vector<double> f_values;
  std::vector<DualVector> raw;
  std::vector<DualVector> tilde;
  std::vector<Vec> reduced;

  std::size_t size() const { return reduced.size(); }
};

inline MomentCloud compute_cloud(const Scenario& s, SampleBatch batch) {
  MomentCloud c;
  c.scenario = s.name();
  const std::size_t m = batch.points.size();
  c.f_values.reserve(m);
  c.raw.reserve(m);
  c.tilde.reserve(m);
  c.reduced.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    try {
      const Vec& p = batch.points[i];
      const double f = s.potential(p);
      const DualVector mu = s.moment(p);
      c.f_values.push_back(f);
      c.tilde.push_back(DualVector{Vec(std::exp(f) * mu.coords)});
      c.reduced.push_back(s.group().chamber_project(mu));
      c.raw.push_back(mu);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (sample " + std::to_string(i) + ")");
    }
  }
  c.batch = std::move(batch);
  return c;
}

inline MomentCloud compute_cloud(const Scenario& s, std::size_t count, std::uint64_t seed, const Strategy& strategy,
                                 double sigma) {
  return compute_cloud(s, s.sample(count, seed, strategy, sigma));
}

/// Cloud of the deck-translated batch gamma(p_i).
inline MomentCloud translate_cloud(const Scenario& s, const MomentCloud& c, std::size_t generator) {
  SampleBatch b = c.batch;
  for (auto& p : b.points) p = s.deck_apply(generator, p);
  return compute_cloud(s, std::move(b));
}

/// Hull-discretization budget: 2e-2 at 10^4 samples, scaled as (10^4 / count)^{1/2}, floor 1e-3.
inline double cloud_tolerance(std::size_t count) {
  return std::max(1e-3, 2e-2 * std::sqrt(1e4 / static_cast<double>(std::max<std::size_t>(count, 1))));
}

}  // namespace confsym
