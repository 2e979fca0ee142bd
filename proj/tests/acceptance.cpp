#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "confsym/cli/runner.hpp"

using namespace confsym;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Entry {
  std::string name;
  json params;
};

const std::vector<Entry>& catalog() {
  static const std::vector<Entry> c{
      {"hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}}},
      {"hopf_ellipsoid", {{"n", 3}, {"zeta", {1, 1, 2}}}},
      {"hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 1}}, {"subgroup", "full"}}},
      {"cylinder_contact", {{"n", 2}, {"zeta", {1, 2}}}},
      {"mapping_torus", {{"n", 3}, {"zeta", {1, 3, 5}}, {"phases", {0.3, 1.0, -2.0}}}},
      {"hyperboloid", {{"c", 1.0}}},
      {"cotangent_circle", {{"c", 0.7}}},
  };
  return c;
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

Outcome cartan_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& e : catalog()) {
    const auto s = build(e.name, e.params);
    const auto st = s->structure();
    const auto pts = s->sample(100, 101, Strategy::full(), 1.0).points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto X = polynomial_field(s->dim(), 202, 2 * i), Y = polynomial_field(s->dim(), 202, 2 * i + 1);
      worst = std::max(worst, check_cartan(st, pts[i], X, Y, 1e-4).max());
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-4 && t <= 10.0, "max residual " + fmt("%.2e", worst) + " (<= 1e-4), " + fmt("%.2f", t) + " s (<= 10 s)"};
}

Outcome structure_and_moment() {
  double dto = 0.0, mc = 0.0;
  for (const auto& e : catalog()) {
    const auto s = build(e.name, e.params);
    for (const auto& p : s->sample(100, 303, Strategy::full(), 1.0).points) {
      dto = std::max(dto, d_theta_omega_residual(*s, p, 1e-4));
      for (int a = 0; a < s->group().algebra_dim(); ++a) mc = std::max(mc, moment_condition_residual(*s, p, a, 1e-4));
    }
  }
  return {dto <= 1e-5 && mc <= 1e-5,
          "|d omega + theta^omega| " + fmt("%.2e", dto) + ", moment condition " + fmt("%.2e", mc) + " (<= 1e-5)"};
}

Outcome lee_hyperplane() {
  double worst = 0.0;
  int count = 0;
  for (const auto& e : catalog()) {
    const auto s = build(e.name, e.params);
    if (!s->zeta()) continue;
    ++count;
    for (const auto& p : s->sample(10000, 404, Strategy::full(), 1.0).points)
      worst = std::max(worst, lee_hyperplane_residual(*s, p));
  }
  return {worst <= 1e-9 && count > 0,
          "max |Phi^zeta - 1| " + fmt("%.2e", worst) + " over 10^4 samples on " + std::to_string(count) + " scenarios"};
}

Outcome torus_bodies() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string d;
  bool ok = true;
  for (const auto& zeta : std::vector<std::vector<double>>{{1, 2}, {1, 1, 2}}) {
    const auto s = build("hopf_ellipsoid", {{"zeta", zeta}});
    const int n = static_cast<int>(zeta.size());
    std::vector<Vec> simplex;
    for (int j = 0; j < n; ++j) simplex.push_back(Vec::Unit(n, j) / zeta[static_cast<std::size_t>(j)]);
    const auto b = body(compute_cloud(*s, 100000, 0, Strategy::full(), 1.0));
    const double h = hausdorff(b.polytope, hull(simplex));
    ok = ok && h <= 1e-2 && b.polytope.affine_rank == n - 1;
    d += "n=" + std::to_string(n) + " H=" + fmt("%.2e", h) + "; ";
  }
  const double t = seconds_since(t0);
  return {ok && t <= 30.0, d + fmt("%.2f", t) + " s (<= 30 s)"};
}

Outcome unitary_collapse() {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 1}}, {"subgroup", "full"}});
  const auto b = body(compute_cloud(*s, 10000, 0, Strategy::full(), 1.0));
  const double h = hausdorff(b.polytope, hull({vec({1, 0})}));
  return {h <= 1e-9 && b.polytope.affine_rank == 0,
          "affine rank " + std::to_string(b.polytope.affine_rank) + ", distance to (1,0) " + fmt("%.2e", h)};
}

Outcome cone_relations() {
  bool ok = true;
  std::string d;
  for (const auto& zeta : std::vector<std::vector<double>>{{1, 2}, {1, 1, 2}}) {
    const auto s = build("hopf_ellipsoid", {{"zeta", zeta}});
    const auto c = compute_cloud(*s, 10000, 0, Strategy::full(), 1.0);
    const auto b = body(c);
    const auto r1 = verify_cone(*s, c, b.polytope, 1e-2);
    const auto r2 = verify_cone(*s, translate_cloud(*s, c, 0), b.polytope, 1e-2);
    const double diff = std::max(std::abs(r1.max_deviation - r2.max_deviation),
                                 std::abs(r1.hyperplane_residual - r2.hyperplane_residual));
    ok = ok && r1.max_deviation <= 1e-2 && diff <= 1e-8;
    d += "n=" + std::to_string(zeta.size()) + " deviation " + fmt("%.2e", r1.max_deviation) + " deck diff " +
         fmt("%.1e", diff) + "; ";
  }
  return {ok, d};
}

Outcome leaf_stability_check() {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto r = leaf_stability(*s, {-0.5, 0.0, 0.7}, 10000, 0);
  return {r.max_hausdorff <= 2e-2 && r.all_corank_one,
          "max pairwise Hausdorff " + fmt("%.2e", r.max_hausdorff) + " (<= 2e-2), corank 1 at all probes: " +
              (r.all_corank_one ? "yes" : "no")};
}

Outcome local_cones() {
  const auto s = build("hopf_ellipsoid", {{"n", 2}, {"zeta", {1, 2}}});
  const auto bh = body(compute_cloud(*s, 10000, 0, Strategy::full(), 1.0)).polytope;
  double angle = 0.0, contain = 0.0;
  for (int j = 0; j < 2; ++j) {
    const Vec e = Vec::Unit(4, 2 * j);
    const auto r = local_cone(*s, e, 0.1, 4000, 7 + static_cast<std::uint64_t>(j), 1.0, 2.0, &bh);
    // Closed-form cone at e_j points from e_j / zeta_j toward the other vertex.
    const Vec apex = Vec::Unit(2, j) / (j == 0 ? 1.0 : 2.0);
    const Vec other = Vec::Unit(2, 1 - j) / (j == 0 ? 2.0 : 1.0);
    angle = std::max(angle, ray_set_angle(r.rays, {(other - apex).normalized()}));
    contain = std::max(contain, *r.containment_violation);
  }
  return {angle <= 2.0 && contain <= 1e-2,
          "ray angle " + fmt("%.3f", angle) + " deg (<= 2), containment " + fmt("%.2e", contain) + " (<= 1e-2)"};
}

Outcome semirationality_grid() {
  bool ok = true;
  std::string d;
  const std::vector<std::pair<std::string, std::vector<double>>> grid{
      {"(1,2)", {1, 2}}, {"(1,3,5)", {1, 3, 5}}, {"(1,sqrt2)", {1, std::sqrt(2.0)}}, {"(1,e)", {1, std::numbers::e}}};
  for (const auto& [label, zeta] : grid) {
    bool expected = true;
    for (double z : zeta) expected = expected && rational_reconstruct(z / zeta[0], 10000).has_value();
    const auto s = build("hopf_ellipsoid", {{"zeta", zeta}});
    const bool found = body(compute_cloud(*s, 10000, 0, Strategy::full(), 1.0), 10000).semirational();
    ok = ok && found == expected;
    d += label + (found ? " Found" : " NotFound") + (found == expected ? "" : " (MISMATCH)") + "; ";
  }
  return {ok, d};
}

Outcome first_kind_suite() {
  bool ok = true;
  double tb = 0.0, vol = 1e300, rl = 0.0, cm = 0.0, cone = 0.0;
  for (const auto& [name, params] : std::vector<std::pair<std::string, json>>{
           {"cylinder_contact", {{"n", 2}, {"zeta", {1, 2}}}},
           {"mapping_torus", {{"n", 3}, {"zeta", {1, 3, 5}}, {"phases", {0.3, 1.0, -2.0}}}}}) {
    const auto s = build(name, params);
    for (const auto& p : s->sample(50, 505, Strategy::full(), 1.0).points) {
      const auto f = first_kind_sample(*s, p, 1e-4);
      tb = std::max(tb, std::abs(f.theta_of_b - 1.0));
      vol = std::min(vol, std::abs(f.volume));
      rl = std::max(rl, f.reeb_vs_lee);
      cm = std::max(cm, f.contact_moment);
    }
    const auto leaf = s->sample(50, 606, Strategy::leaf(0.0), 1.0).points;
    for (std::size_t i = 0; i < leaf.size(); ++i) {
      CounterRng rng(707, i);
      cone = std::max(cone, cone_moment_residual(*s, leaf[i], rng.uniform(-1.0, 1.0)));
    }
  }
  ok = tb <= 1e-9 && vol > 1e-3 && rl <= 1e-6 && cm <= 1e-7 && cone <= 1e-7;
  return {ok, "theta(B)-1 " + fmt("%.1e", tb) + ", min volume " + fmt("%.3f", vol) + ", |R+A| " + fmt("%.1e", rl) +
                  ", |Psi-Phi| " + fmt("%.1e", cm) + ", cone " + fmt("%.1e", cone)};
}

Outcome negative_controls(const fs::path& work) {
  const std::string cli = CONFSYM_CLI_PATH;
  const json cfg{{"scenario", {{"name", "hopf_ellipsoid"}, {"params", {{"zeta", {1, 2}}}}}},
                 {"sampling", {{"count", 2000}}},
                 {"fault", {{"component", 0}, {"offset", 0.1}}},
                 {"output_dir", (work / "fault").string()}};
  std::ofstream(work / "fault.json") << cfg.dump();
  const int code = shell(cli + " run " + (work / "fault.json").string());
  double residual = 0.0;
  bool failed = false;
  const json report = fs::exists(work / "fault" / "report.json") ? load_json(work / "fault" / "report.json") : json::object();
  if (report.contains("checks"))
    for (const auto& c : report["checks"])
      if (c["name"] == "moment_condition") {
        failed = c["status"] == "fail";
        residual = c["evidence"]["moment_condition_max"].get<double>();
      }
  const auto cot = build("cotangent_circle", {{"c", 0.7}});
  const auto lee = lee_type_check(*cot, lee_probe_points(*cot));
  const bool ok = code == 1 && failed && residual >= 0.05 && lee.verdict == LeeVerdict::NotLeeType && lee.residual >= 0.1;
  return {ok, "fault exit " + std::to_string(code) + ", moment residual " + fmt("%.3f", residual) +
                  " (>= 0.05); cotangent " + to_string(lee.verdict) + " residual " + fmt("%.3f", lee.residual) +
                  " (>= 0.1)"};
}

Outcome determinism(const fs::path& work) {
  const std::string cli = CONFSYM_CLI_PATH;
  json cfg{{"scenario", {{"name", "mapping_torus"}, {"params", {{"zeta", {1, 2}}}}}}, {"sampling", {{"count", 3000}, {"seed", 9}}}};
  json reports[2];
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    cfg["output_dir"] = (work / ("det" + std::to_string(k))).string();
    const fs::path file = work / ("det" + std::to_string(k) + ".json");
    std::ofstream(file) << cfg.dump();
    codes[k] = shell(cli + " run " + file.string());
    reports[k] = load_json(work / ("det" + std::to_string(k)) / "report.json");
    reports[k]["config"].erase("output_dir");
    for (auto& c : reports[k]["checks"]) c.erase("runtime_ms");
  }
  const bool same = reports[0] == reports[1];
  return {same && codes[0] == codes[1], std::string("report.json identical modulo timing: ") + (same ? "yes" : "no")};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "confsym_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Twisted Cartan suite", cartan_suite},
      {"Structure and moment condition", structure_and_moment},
      {"Lee hyperplane", lee_hyperplane},
      {"Torus ellipsoid bodies", torus_bodies},
      {"Nonabelian collapse", unitary_collapse},
      {"Cone relations", cone_relations},
      {"Leaf stability", leaf_stability_check},
      {"Local cones", local_cones},
      {"Semirationality grid", semirationality_grid},
      {"First-kind suite", first_kind_suite},
      {"Negative controls", [&] { return negative_controls(work); }},
      {"Determinism", [&] { return determinism(work); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
