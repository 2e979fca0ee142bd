#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confsym/momentbody/suite.hpp"
#include "confsym/scenarios/catalog.hpp"

using namespace confsym;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

MomentCloud cloud_of(const ScenarioPtr& s, std::size_t count = 10000, std::uint64_t seed = 0) {
  return compute_cloud(*s, count, seed, Strategy::full(), 1.0);
}

// Polytope with the given vertices, for Hausdorff comparisons.
Polytope reference(const std::vector<Vec>& vs) { return hull(vs); }

}  // namespace

TEST(Cloud, ToleranceScaling) {
  EXPECT_DOUBLE_EQ(cloud_tolerance(10000), 2e-2);
  EXPECT_DOUBLE_EQ(cloud_tolerance(40000), 1e-2);
  EXPECT_DOUBLE_EQ(cloud_tolerance(100000000), 1e-3);
}

TEST(Cloud, ReducedMatchesClosedForm) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto c = cloud_of(s, 200);
  ASSERT_EQ(c.size(), 200u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec& p = c.batch.points[i];
    const double a = p[0] * p[0] + p[1] * p[1], b = p[2] * p[2] + p[3] * p[3];
    EXPECT_NEAR(c.reduced[i][0], a / (a + 2 * b), 1e-12);
    EXPECT_NEAR(c.reduced[i][1], b / (a + 2 * b), 1e-12);
    EXPECT_NEAR(c.tilde[i].coords[0], 0.5 * a, 1e-12 * (1 + a));
  }
}

TEST(Cloud, DeckTranslationLeavesReducedImageFixed) {
  for (const auto& name : {"hopf_ellipsoid", "mapping_torus", "hyperboloid"}) {
    const auto s = build(name);
    const auto c = cloud_of(s, 300, 3);
    const auto m = translate_cloud(*s, c, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      EXPECT_LE((m.reduced[i] - c.reduced[i]).cwiseAbs().maxCoeff(), 1e-10 * (1 + c.reduced[i].norm())) << name;
  }
}

TEST(Rationality, NormalExamples) {
  EXPECT_TRUE(normal_rationality(vec({1, 2}), 10000).rational);
  EXPECT_TRUE(normal_rationality(vec({-0.3, 0.9, 0.45}), 10000).rational);
  EXPECT_FALSE(normal_rationality(vec({1, std::sqrt(2.0)}), 10000).rational);
  const auto r = normal_rationality(vec({2, 6}), 10000);
  EXPECT_DOUBLE_EQ(r.normalized[0], 1.0 / 3.0);
  EXPECT_EQ(r.coords[0]->denominator, 3);
}

TEST(Rationality, SpanIgnoresChoiceOfBasis) {
  // Span of (1,0,1) and (0,1,2), presented through an irrational mixture.
  const Vec a = vec({1, 0, 1}), b = vec({0, 1, 2});
  const double c = std::cos(0.7), s = std::sin(0.7);
  std::vector<Facet> eqs{{Vec(c * a + s * b), 0.0, {}}, {Vec(-s * a + c * b), 0.0, {}}};
  const auto rows = span_rationality(eqs, 3, 10000);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_TRUE(r.rational);
  std::vector<Facet> bad{{vec({1, std::numbers::pi, 0}), 0.0, {}}, {vec({0, 0, 1}), 0.0, {}}};
  const auto rows2 = span_rationality(bad, 3, 10000);
  EXPECT_FALSE(rows2[0].rational && rows2[1].rational);
}

TEST(Body, TorusSegment) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto b = body_with_protocol(*s, cloud_of(s));
  EXPECT_EQ(b.polytope.affine_rank, 1);
  EXPECT_FALSE(b.unbounded_suspected);
  EXPECT_LE(hausdorff(b.polytope, reference({vec({1, 0}), vec({0, 0.5})})), 2e-2);
  ASSERT_TRUE(b.hausdorff_to_reference);
  EXPECT_LE(*b.hausdorff_to_reference, 2e-2);
  EXPECT_LE(b.max_facet_violation, 1e-9);
  EXPECT_TRUE(b.semirational());
}

TEST(Body, TorusTriangle) {
  const auto s = build("hopf_ellipsoid", {{"n", 3}, {"zeta", {1, 1, 2}}});
  const auto b = body_with_protocol(*s, cloud_of(s, 100000));
  EXPECT_EQ(b.polytope.affine_rank, 2);
  EXPECT_LE(hausdorff(b.polytope, reference({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 0.5})})), 1e-2);
  EXPECT_TRUE(b.semirational());
}

TEST(Body, FullCentralizerCollapsesBlocks) {
  const auto s = build("hopf_ellipsoid", {{"n", 3}, {"zeta", {1, 1, 2}}, {"subgroup", "full"}});
  const auto b = body_with_protocol(*s, cloud_of(s));
  EXPECT_EQ(b.polytope.affine_rank, 1);
  EXPECT_LE(hausdorff(b.polytope, reference({vec({1, 0, 0}), vec({0, 0, 0.5})})), 2e-2);
}

TEST(Body, UnitaryGroupGivesSinglePoint) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 1}}, {"subgroup", "full"}});
  const auto b = body_with_protocol(*s, cloud_of(s));
  EXPECT_EQ(b.polytope.affine_rank, 0);
  EXPECT_LE(hausdorff(b.polytope, reference({vec({1, 0})})), 1e-9);
  EXPECT_TRUE(b.semirational());
}

TEST(Body, IrrationalZetaIsNotSemirational) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, std::sqrt(2.0)}}});
  const auto b = body_with_protocol(*s, cloud_of(s));
  EXPECT_FALSE(b.semirational());
  EXPECT_LE(*b.hausdorff_to_reference, 2e-2);
}

TEST(Body, HyperboloidIsFlaggedUnbounded) {
  const auto s = build("hyperboloid");
  const auto b = body_with_protocol(*s, cloud_of(s, 4000));
  EXPECT_TRUE(b.unbounded_suspected);
  EXPECT_FALSE(b.hausdorff_to_reference);
  EXPECT_FALSE(b.recession_directions.empty());
  EXPECT_FALSE(b.note.empty());
}

TEST(Body, HausdorffShrinksWithSamples) {
  const auto s = build("hopf_ellipsoid", {{"n", 3}, {"zeta", {1, 3, 5}}});
  const auto ref = reference(*analytic_body_vertices(*s));
  const double coarse = hausdorff(body(cloud_of(s, 500)).polytope, ref);
  const double fine = hausdorff(body(cloud_of(s, 20000)).polytope, ref);
  EXPECT_LT(fine, coarse);
  EXPECT_LE(fine, cloud_tolerance(20000));
}

TEST(Cone, EllipsoidAndMappingTorus) {
  for (const auto& [name, params] : std::vector<std::pair<std::string, json>>{
           {"hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}}},
           {"mapping_torus", {{"n", 3}, {"zeta", {1, 3, 5}}, {"phases", {0.3, 1.0, -2.0}}}},
           {"cylinder_contact", {{"n", 2}, {"zeta", {1, 2}}}}}) {
    const auto s = build(name, params);
    const auto c = cloud_of(s);
    const auto b = body(c);
    const auto r = verify_cone(*s, c, b.polytope, 1e-2);
    EXPECT_TRUE(r.pass) << name;
    EXPECT_LE(r.max_deviation, 1e-2) << name;
    EXPECT_LE(r.hyperplane_residual, 1e-9) << name;
  }
}

TEST(Cone, DeckTranslatedCloudGivesSameReport) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto c = cloud_of(s, 2000);
  const auto b = body(c);
  const auto r1 = verify_cone(*s, c, b.polytope, 1e-2);
  const auto r2 = verify_cone(*s, translate_cloud(*s, c, 0), b.polytope, 1e-2);
  EXPECT_NEAR(r1.max_deviation, r2.max_deviation, 1e-8);
  EXPECT_NEAR(r1.hyperplane_residual, r2.hyperplane_residual, 1e-8);
}

TEST(Cone, OutsideHalfspaceNamesWitness) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  auto c = cloud_of(s, 20);
  c.tilde[7].coords = -c.tilde[7].coords;
  try {
    verify_cone(*s, c, body(c).polytope, 1e-2);
    FAIL() << "expected OutsideHalfspace";
  } catch (const OutsideHalfspace& e) {
    EXPECT_NE(std::string(e.what()).find("sample 7"), std::string::npos);
  }
}

TEST(Cone, RequiresLeeType) {
  const auto s = build("cotangent_circle");
  const auto c = cloud_of(s, 20);
  EXPECT_THROW(verify_cone(*s, c, body(c).polytope, 1e-2), BadParams);
}

TEST(Leaf, BodiesAgreeAcrossLevels) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto r = leaf_stability(*s, {-0.5, 0.0, 0.7}, 10000, 0);
  EXPECT_FALSE(r.unbounded);
  EXPECT_LE(r.max_hausdorff, 2e-2);
  EXPECT_TRUE(r.all_corank_one);
  ASSERT_EQ(r.corank.size(), 3u);
  EXPECT_EQ(r.corank[0].size(), 10u);
  EXPECT_EQ(r.hausdorff.rows(), 3);
  EXPECT_DOUBLE_EQ(r.hausdorff(1, 2), r.hausdorff(2, 1));
}

TEST(Leaf, HyperboloidLeavesAreUnbounded) {
  const auto s = build("hyperboloid");
  const auto r = leaf_stability(*s, {0.0, 0.5}, 2000, 0);
  EXPECT_TRUE(r.unbounded);
  EXPECT_TRUE(r.all_corank_one);
}

TEST(LocalCone, ClusteringAndExtremeRays) {
  std::vector<Vec> dirs;
  for (int k = 0; k <= 90; k += 5) {
    const double a = k * std::numbers::pi / 180.0;
    dirs.push_back(vec({std::cos(a), std::sin(a)}));
  }
  dirs.push_back(vec({1, 1e-4}).normalized());
  const auto reps = cluster_directions(dirs, 2.0);
  EXPECT_EQ(reps.size(), 19u);
  bool pointed = false;
  const auto rays = extreme_rays(reps, pointed);
  EXPECT_TRUE(pointed);
  ASSERT_EQ(rays.size(), 2u);
  EXPECT_LE(ray_set_angle(rays, {vec({1, 0}), vec({0, 1})}), 0.1);

  bool p2 = true;
  extreme_rays({vec({1, 0}), vec({-1, 0})}, p2);
  EXPECT_FALSE(p2);
}

TEST(LocalCone, TorusAxisPointsMatchClosedForm) {
  for (const auto& zeta : std::vector<std::vector<double>>{{1, 2}, {1, 3, 5}}) {
    const auto s = build("hopf_ellipsoid", {{"zeta", zeta}});
    const auto bh = body(cloud_of(s)).polytope;
    for (int j = 0; j < static_cast<int>(zeta.size()); ++j) {
      const Vec e = Vec::Unit(s->dim(), 2 * j);
      const auto r = local_cone_with_reference(*s, e, 0.1, 4000, 5, &bh);
      EXPECT_NEAR(r.apex[j], 1.0 / zeta[static_cast<std::size_t>(j)], 1e-12);
      ASSERT_TRUE(r.analytic_angle_deg);
      EXPECT_LE(*r.analytic_angle_deg, 2.0) << "axis " << j;
      EXPECT_LE(*r.containment_violation, 1e-2) << "axis " << j;
      EXPECT_EQ(static_cast<int>(r.rays.size()), static_cast<int>(zeta.size()) - 1);
    }
  }
}

TEST(LocalCone, AnalyticRaysOnlyOnAxes) {
  const auto s = build("hopf_ellipsoid", {{"zeta", {1, 2}}});
  EXPECT_TRUE(analytic_axis_rays(*s, vec({0, 0, 0.3, 0.4})));
  EXPECT_FALSE(analytic_axis_rays(*s, vec({1, 0, 0.3, 0})));
  const auto full = build("hopf_ellipsoid", {{"zeta", {1, 1}}, {"subgroup", "full"}});
  EXPECT_FALSE(analytic_axis_rays(*full, vec({1, 0, 0, 0})));
}

TEST(LocalCone, UnitaryPointHasNoRays) {
  const auto s = build("hopf_ellipsoid", {{"zeta", {1, 1}}, {"subgroup", "full"}});
  const auto r = local_cone(*s, vec({1, 0, 0, 0}), 0.1, 500, 1);
  EXPECT_TRUE(r.rays.empty());
}

TEST(Suite, EllipsoidPassesEveryCheck) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto res = run_suite(*s, SuiteConfig{});
  for (const auto& c : res.checks) {
    if (c.name == "first_kind") {
      EXPECT_EQ(c.status, CheckStatus::Skipped);
      continue;
    }
    EXPECT_EQ(c.status, CheckStatus::Pass) << c.name << " " << c.evidence.dump();
  }
  EXPECT_TRUE(res.pass());
  ASSERT_TRUE(res.body);
}

TEST(Suite, MappingTorusRunsFirstKind) {
  const auto s = build("mapping_torus", {{"n", 2}, {"zeta", {1, 2}}});
  SuiteConfig cfg;
  cfg.sampling.count = 3000;
  const auto res = run_suite(*s, cfg);
  const auto* fk = res.find("first_kind");
  ASSERT_NE(fk, nullptr);
  EXPECT_EQ(fk->status, CheckStatus::Pass) << fk->evidence.dump();
  EXPECT_TRUE(res.pass());
}

TEST(Suite, NonLeeScenarioSkipsLeeDependentChecks) {
  const auto s = build("cotangent_circle");
  SuiteConfig cfg;
  cfg.sampling.count = 2000;
  const auto res = run_suite(*s, cfg);
  for (const auto& n : {"cone", "leaf_stability", "local_cones", "semirationality"})
    EXPECT_EQ(res.find(n)->status, CheckStatus::Skipped) << n;
  EXPECT_EQ(res.find("lee_type")->status, CheckStatus::Pass) << res.find("lee_type")->evidence.dump();
  EXPECT_EQ(res.find("lee_type")->evidence["verdict"], "NotLeeType");
  EXPECT_TRUE(res.pass());
}

TEST(Suite, FaultIsCaughtByMomentCondition) {
  auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  s->inject_fault(0, 0.1);
  SuiteConfig cfg;
  cfg.sampling.count = 1000;
  const auto res = run_suite(*s, cfg);
  const auto* mc = res.find("moment_condition");
  EXPECT_EQ(mc->status, CheckStatus::Fail);
  EXPECT_GE(mc->evidence["moment_condition_max"].get<double>(), 0.05);
  EXPECT_FALSE(res.pass());
}

TEST(Suite, DisabledChecksAreSkipped) {
  const auto s = build("hopf_ellipsoid");
  SuiteConfig cfg;
  cfg.sampling.count = 500;
  for (const auto& n : check_names()) cfg.checks[n] = {false, default_tolerance(n, 500)};
  cfg.checks["equivariance"].enabled = true;
  const auto res = run_suite(*s, cfg);
  for (const auto& c : res.checks)
    EXPECT_EQ(c.status, c.name == "equivariance" ? CheckStatus::Pass : CheckStatus::Skipped) << c.name;
  EXPECT_FALSE(res.cloud);
}

TEST(Suite, UnknownCheckRejected) {
  const auto s = build("hopf_ellipsoid");
  SuiteConfig cfg;
  cfg.checks["volume"] = {};
  EXPECT_THROW(run_suite(*s, cfg), ConfigError);
}

TEST(Suite, IrrationalZetaStillPassesSemirationality) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, std::sqrt(2.0)}}});
  SuiteConfig cfg;
  for (const auto& n : check_names()) cfg.checks[n] = {n == "semirationality", default_tolerance(n, 10000)};
  const auto res = run_suite(*s, cfg);
  const auto* c = res.find("semirationality");
  EXPECT_EQ(c->status, CheckStatus::Pass) << c->evidence.dump();
  EXPECT_EQ(c->evidence["verdict"], "NotFound");
}

TEST(Cone, UnitaryRayDeviationVanishes) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 1}}, {"subgroup", "full"}});
  const auto c = cloud_of(s, 2000);
  EXPECT_LE(verify_cone(*s, c, body(c).polytope, 1e-9).max_deviation, 1e-9);
}

TEST(Leaf, SameLevelDifferentSeeds) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto a = body(compute_cloud(*s, 10000, 1, Strategy::leaf(0.3), 1.0));
  const auto b = body(compute_cloud(*s, 10000, 2, Strategy::leaf(0.3), 1.0));
  EXPECT_LE(hausdorff(a.polytope, b.polytope), 2e-2);
}

TEST(Properties, MidpointConvexityOnLeeTypeClouds) {
  for (const auto& [name, params] : std::vector<std::pair<std::string, json>>{
           {"hopf_ellipsoid", {{"zeta", {1, 2}}}},
           {"hopf_ellipsoid", {{"zeta", {1, 3, 5}}}},
           {"hopf_ellipsoid", {{"zeta", {1, 1, 2}}, {"subgroup", "full"}}},
           {"cylinder_contact", {{"zeta", {1, 2}}}},
           {"mapping_torus", {{"zeta", {1, 2}}}},
           {"hyperboloid", {{"c", 1.0}}}}) {
    const auto s = build(name, params);
    const auto c = cloud_of(s, 5000, 8);
    const auto b = body(c);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      CounterRng rng(9, t);
      const auto i = static_cast<std::size_t>(rng.uniform() * 5000.0) % 5000;
      const auto j = static_cast<std::size_t>(rng.uniform() * 5000.0) % 5000;
      worst = std::max(worst, b.polytope.distance(0.5 * (c.reduced[i] + c.reduced[j])));
    }
    EXPECT_LE(worst, 2e-2) << name << " " << params.dump();
  }
}

TEST(Properties, TildeHullScalesByDeckCharacter) {
  for (const auto& name : {"hopf_ellipsoid", "mapping_torus"}) {
    const auto s = build(name, {{"zeta", {1, 2}}});
    const double chi = s->deck().front().chi;
    const auto c = cloud_of(s, 3000, 12);
    const auto m = translate_cloud(*s, c, 0);
    std::vector<Vec> t0, t1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      t0.push_back(std::exp(chi) * s->group().chamber_project(c.tilde[i]));
      t1.push_back(s->group().chamber_project(m.tilde[i]));
    }
    const auto h0 = hull(t0), h1 = hull(t1);
    ASSERT_EQ(h0.vertices.size(), h1.vertices.size()) << name;
    for (const auto& v : h1.vertices) {
      double best = 1e300;
      for (const auto& w : h0.vertices) best = std::min(best, (v - w).norm() / std::max(1e-300, w.norm()));
      EXPECT_LE(best, 1e-8) << name;
    }
    EXPECT_LE(hausdorff(body(c).polytope, body(m).polytope), 2e-2) << name;
  }
}

TEST(Properties, CoadjointTranslatedUnitaryCloudKeepsBody) {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 1}}, {"subgroup", "full"}});
  const auto c = cloud_of(s, 1000, 13);
  const auto ref = body(c).polytope;
  for (std::uint64_t k = 0; k < 10; ++k) {
    CounterRng rng(14, k);
    const auto g = s->group().random_element(rng);
    SampleBatch moved = c.batch;
    for (auto& p : moved.points) p = s->group_action(g, p);
    EXPECT_LE(hausdorff(body(compute_cloud(*s, moved)).polytope, ref), 1e-9);
  }
}

TEST(Properties, SemirationalityMatchesZetaLine) {
  for (const auto& zeta : std::vector<std::vector<double>>{
           {1, 2}, {1, 3, 5}, {1, std::sqrt(2.0)}, {1, std::numbers::e}, {2, 3}, {1, std::sqrt(3.0), 2}}) {
    bool expected = true;
    for (double z : zeta) expected = expected && rational_reconstruct(z / zeta[0], 10000).has_value();
    const auto s = build("hopf_ellipsoid", {{"zeta", zeta}});
    EXPECT_EQ(body(cloud_of(s)).semirational(), expected) << json(zeta).dump();
  }
}
