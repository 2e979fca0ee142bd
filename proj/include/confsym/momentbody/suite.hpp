#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confsym/cartan.hpp"
#include "confsym/momentbody/cone.hpp"
#include "confsym/momentbody/leaf.hpp"
#include "confsym/momentbody/local_cone.hpp"
#include "confsym/scenarios/checks.hpp"

namespace confsym {

struct SamplingConfig {
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  std::string strategy = "full";
  double band_lo = -1.0, band_hi = 1.0;
  double level = 0.0;
  std::vector<double> center;
  double radius = 0.1;
  double sigma = 1.0;
  std::vector<double> leaf_levels{-0.5, 0.0, 0.7};

  bool operator==(const SamplingConfig&) const = default;

  Strategy to_strategy() const {
    if (strategy == "full") return Strategy::full(band_lo, band_hi);
    if (strategy == "leaf") return Strategy::leaf(level);
    if (strategy == "ball") {
      Vec c(static_cast<Eigen::Index>(center.size()));
      for (std::size_t i = 0; i < center.size(); ++i) c[static_cast<Eigen::Index>(i)] = center[i];
      return Strategy::ball(c, radius);
    }
    throw BadStrategy("unknown strategy \"" + strategy + "\"");
  }
};

struct CheckConfig {
  bool enabled = true;
  double tolerance = 0.0;

  bool operator==(const CheckConfig&) const = default;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"structure", "moment_condition", "equivariance",  "lee_type",
                                              "body",      "cone",             "leaf_stability", "local_cones",
                                              "semirationality", "first_kind"};
  return names;
}

inline bool is_check_name(const std::string& n) {
  const auto& v = check_names();
  return std::find(v.begin(), v.end(), n) != v.end();
}

/// Checks that only make sense for a declared Lee element.
inline bool lee_dependent(const std::string& n) {
  return n == "cone" || n == "leaf_stability" || n == "local_cones" || n == "semirationality";
}

inline double default_tolerance(const std::string& check, std::size_t count) {
  if (check == "structure") return 1e-4;
  if (check == "moment_condition") return 1e-5;
  if (check == "equivariance") return 1e-8;
  if (check == "lee_type") return 1e-9;
  if (check == "body" || check == "cone" || check == "leaf_stability") return cloud_tolerance(count);
  if (check == "local_cones") return 1e-2;
  if (check == "semirationality") return 1e-8;
  if (check == "first_kind") return 1e-6;
  throw ConfigError("unknown check \"" + check + "\"");
}

inline std::string check_description(const std::string& n) {
  static const std::map<std::string, std::string> d{
      {"structure", "Cartan identities for d_theta, L_theta and iota"},
      {"moment_condition", "d_theta omega = 0, d theta = 0, i(xi_M) omega = d_theta Phi^xi"},
      {"equivariance", "Phi(g x) = Ad*_g Phi(x) for random group elements"},
      {"lee_type", "Phi^zeta == 1 on the sample cloud"},
      {"body", "convex hull of the reduced moment image"},
      {"cone", "Phi_tilde rescaled onto the zeta-hyperplane lands in the body"},
      {"leaf_stability", "bodies of individual leaves agree; leaves have corank 1"},
      {"local_cones", "local cones at probe points contain the body"},
      {"semirationality", "body is semirational iff the zeta-line is rational"},
      {"first_kind", "anti-Lee field, contact form, Reeb field and contact moment map"}};
  return d.at(n);
}

struct SuiteConfig {
  SamplingConfig sampling;
  std::map<std::string, CheckConfig> checks;  // absent name: default enabled
  int probe_points = 100;
  double step = 1e-4;
  std::int64_t max_den = 10000;
  std::vector<std::vector<double>> local_cone_points;  // empty: scenario default
  double local_cone_radius = 0.1;

  bool operator==(const SuiteConfig&) const = default;

  CheckConfig check(const std::string& n) const {
    const auto it = checks.find(n);
    if (it != checks.end()) return it->second;
    return {true, default_tolerance(n, sampling.count)};
  }
};

enum class CheckStatus { Pass, Fail, Skipped };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  json evidence = json::object();
  double tolerance = 0.0;
  double runtime_ms = 0.0;
};

struct SuiteResult {
  std::vector<CheckResult> checks;
  std::optional<BodyReport> body;
  std::optional<MomentCloud> cloud;

  bool pass() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }
  const CheckResult* find(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return &c;
    return nullptr;
  }
};

inline json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline json to_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline json to_json(const Facet& f) { return {{"normal", to_json(f.normal)}, {"offset", f.offset}}; }

inline json to_json(const NormalRationality& r) {
  json coords = json::array();
  for (const auto& c : r.coords) {
    if (c) coords.push_back({{"p", c->numerator}, {"q", c->denominator}, {"residual", c->residual}});
    else coords.push_back(nullptr);
  }
  return {{"normalized", to_json(r.normalized)}, {"rational", r.rational}, {"coords", coords}};
}

inline json to_json(const Polytope& p) {
  json facets = json::array(), eqs = json::array();
  for (const auto& f : p.facets) facets.push_back(to_json(f));
  for (const auto& e : p.equations) eqs.push_back(to_json(e));
  return {{"ambient_dim", p.ambient_dim}, {"affine_rank", p.affine_rank}, {"vertices", to_json(p.vertices)},
          {"facets", facets},            {"equations", eqs},             {"unbounded_suspected", p.unbounded_suspected}};
}

inline json to_json(const BodyReport& b) {
  json fr = json::array(), hr = json::array();
  for (const auto& r : b.facet_rationality) fr.push_back(to_json(r));
  for (const auto& r : b.hull_rationality) hr.push_back(to_json(r));
  json j{{"polytope", to_json(b.polytope)},
         {"max_facet_violation", b.max_facet_violation},
         {"unbounded_suspected", b.unbounded_suspected},
         {"diameter", b.diameter},
         {"facet_rationality", fr},
         {"hull_rationality", hr},
         {"semirational", b.semirational()}};
  j["hausdorff_to_reference"] = b.hausdorff_to_reference ? json(*b.hausdorff_to_reference) : json(nullptr);
  if (b.diameter_at_double_spread) j["diameter_at_double_spread"] = *b.diameter_at_double_spread;
  if (!b.recession_directions.empty()) j["recession_directions"] = to_json(b.recession_directions);
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

namespace detail {

/// Lazily shared state across checks.
class SuiteContext {
 public:
  SuiteContext(const Scenario& s, const SuiteConfig& c) : s_(s), cfg_(c) {}

  const Scenario& scenario() const { return s_; }
  const SuiteConfig& config() const { return cfg_; }

  const MomentCloud& cloud() {
    if (!cloud_) {
      const auto& sc = cfg_.sampling;
      cloud_ = compute_cloud(s_, sc.count, sc.seed, sc.to_strategy(), sc.sigma);
    }
    return *cloud_;
  }

  const BodyReport& body() {
    if (!body_) body_ = body_with_protocol(s_, cloud(), cfg_.max_den);
    return *body_;
  }

  std::vector<Vec> probes(std::uint64_t stream, int count) const {
    const auto& sc = cfg_.sampling;
    return s_.sample(static_cast<std::size_t>(count), sc.seed ^ stream, Strategy::full(sc.band_lo, sc.band_hi),
                     sc.sigma)
        .points;
  }

  std::optional<MomentCloud> cloud_;
  std::optional<BodyReport> body_;

 private:
  const Scenario& s_;
  const SuiteConfig& cfg_;
};

inline CheckStatus verdict(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

inline void run_structure(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const auto st = s.structure();
  const auto pts = ctx.probes(0x7374727563ULL, ctx.config().probe_points);
  CartanResiduals worst;
  std::map<std::string, double> maxima;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto X = polynomial_field(s.dim(), ctx.config().sampling.seed + 1, 2 * i);
    const auto Y = polynomial_field(s.dim(), ctx.config().sampling.seed + 1, 2 * i + 1);
    const auto res = check_cartan(st, pts[i], X, Y, ctx.config().step);
    for (const auto& [name, v] : res.named()) maxima[name] = std::max(maxima[name], v);
  }
  double m = 0.0;
  for (const auto& [name, v] : maxima) m = std::max(m, v);
  r.evidence = {{"residuals", maxima}, {"max", m}, {"points", pts.size()}, {"step", ctx.config().step}};
  r.status = verdict(m <= r.tolerance);
}

inline void run_moment_condition(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const double step = ctx.config().step;
  const auto pts = ctx.probes(0x6d6f6d656eULL, ctx.config().probe_points);
  const int k = s.group().algebra_dim();
  double dto = 0.0, dth = 0.0, action = 0.0;
  std::vector<double> per_basis(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec& p = pts[i];
    dto = std::max(dto, d_theta_omega_residual(s, p, step));
    dth = std::max(dth, theta_closed_residual(s, p, step));
    for (int a = 0; a < k; ++a)
      per_basis[static_cast<std::size_t>(a)] =
          std::max(per_basis[static_cast<std::size_t>(a)], moment_condition_residual(s, p, a, step));
    CounterRng rng(ctx.config().sampling.seed ^ 0x6163ULL, i);
    Vec xi(k);
    for (int a = 0; a < k; ++a) xi[a] = rng.normal();
    action = std::max(action, action_crosscheck_residual(s, xi, p));
  }
  const double pm = *std::max_element(per_basis.begin(), per_basis.end());
  constexpr double action_tol = 1e-6;
  r.evidence = {{"d_theta_omega", dto},       {"d_theta", dth}, {"moment_condition_per_basis", per_basis},
                {"moment_condition_max", pm}, {"action_crosscheck", action},
                {"action_tolerance", action_tol}, {"points", pts.size()}, {"step", step}};
  r.status = verdict(dto <= r.tolerance && dth <= r.tolerance && pm <= r.tolerance && action <= action_tol);
}

inline void run_equivariance(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const auto pts = ctx.probes(0x6571756976ULL, 50);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CounterRng rng(ctx.config().sampling.seed ^ 0x67ULL, i);
    worst = std::max(worst, equivariance_residual(s, s.group().random_element(rng), pts[i]));
  }
  r.evidence = {{"max_residual", worst}, {"samples", pts.size()}};
  r.status = verdict(worst <= r.tolerance);
}

inline void run_lee_type(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  constexpr double not_lee_floor = 0.1;
  if (s.zeta()) {
    const auto& c = ctx.cloud();
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      worst = std::max(worst, std::abs(s.group().pair(c.raw[i], s.zeta()->coords) - 1.0));
    r.evidence = {{"declared_zeta", to_json(s.zeta()->coords)}, {"max_residual", worst}, {"samples", c.size()},
                  {"verdict", worst <= r.tolerance ? "LeeType" : "NotLeeType"}};
    r.status = verdict(worst <= r.tolerance);
  } else {
    const auto rep = lee_type_check(s, lee_probe_points(s, ctx.config().sampling.sigma), r.tolerance);
    r.evidence = {{"verdict", to_string(rep.verdict)},
                  {"least_squares_xi", to_json(rep.zeta)},
                  {"rms_residual", rep.residual},
                  {"expected_verdict", "NotLeeType"},
                  {"min_residual", not_lee_floor}};
    r.status = verdict(rep.verdict == LeeVerdict::NotLeeType && rep.residual >= not_lee_floor);
  }
}

inline void run_body(SuiteContext& ctx, CheckResult& r) {
  const BodyReport& b = ctx.body();
  r.evidence = to_json(b);
  bool ok = b.max_facet_violation <= r.tolerance;
  if (b.hausdorff_to_reference) ok = ok && *b.hausdorff_to_reference <= r.tolerance;
  if (!b.unbounded_suspected && b.polytope.affine_rank > 0) {
    const auto& pts = ctx.cloud().reduced;
    double mid = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      CounterRng rng(ctx.config().sampling.seed ^ 0x6d6964ULL, t);
      const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(pts.size())) % pts.size();
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(pts.size())) % pts.size();
      mid = std::max(mid, b.polytope.distance(0.5 * (pts[i] + pts[j])));
    }
    r.evidence["midpoint_convexity"] = mid;
    ok = ok && mid <= r.tolerance;
  }
  r.status = verdict(ok);
}

inline void run_cone(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const auto rep = verify_cone(s, ctx.cloud(), ctx.body().polytope, r.tolerance);
  r.evidence = {{"max_deviation", rep.max_deviation},
                {"hyperplane_residual", rep.hyperplane_residual},
                {"worst_index", rep.worst_index}};
  bool ok = rep.pass;
  if (!s.deck().empty()) {
    const MomentCloud moved = translate_cloud(s, ctx.cloud(), 0);
    const auto rep2 = verify_cone(s, moved, ctx.body().polytope, r.tolerance);
    const double diff = std::max(std::abs(rep2.max_deviation - rep.max_deviation),
                                 std::abs(rep2.hyperplane_residual - rep.hyperplane_residual));
    r.evidence["deck_translated_difference"] = diff;
    ok = ok && diff <= 1e-8;
  }
  r.status = verdict(ok);
}

inline void run_leaf_stability(SuiteContext& ctx, CheckResult& r) {
  const auto& sc = ctx.config().sampling;
  const auto rep = leaf_stability(ctx.scenario(), sc.leaf_levels, sc.count, sc.seed, sc.sigma);
  json bodies = json::array();
  for (const auto& b : rep.bodies) bodies.push_back(to_json(b.polytope));
  json H = json::array();
  for (Eigen::Index i = 0; i < rep.hausdorff.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < rep.hausdorff.cols(); ++j) row.push_back(rep.hausdorff(i, j));
    H.push_back(row);
  }
  r.evidence = {{"levels", rep.levels},         {"hausdorff", H},          {"max_hausdorff", rep.max_hausdorff},
                {"corank", rep.corank},         {"bodies", bodies},        {"unbounded", rep.unbounded}};
  bool ok = rep.all_corank_one;
  if (rep.unbounded) r.evidence["note"] = "unbounded leaf bodies: Hausdorff agreement not asserted";
  else ok = ok && rep.max_hausdorff <= r.tolerance;
  r.status = verdict(ok);
}

inline std::vector<Vec> default_local_cone_points(const Scenario& s) {
  std::vector<Vec> out;
  if (!dynamic_cast<const EllipsoidScenario*>(&s)) return out;
  const int n = s.dim() / 2;
  for (int j = 0; j < n; ++j) out.push_back(Vec::Unit(s.dim(), 2 * j));
  return out;
}

inline void run_local_cones(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const auto& cfg = ctx.config();
  std::vector<Vec> pts;
  for (const auto& p : cfg.local_cone_points) pts.push_back(Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size())));
  if (pts.empty()) pts = default_local_cone_points(s);
  if (pts.empty()) {
    r.status = CheckStatus::Skipped;
    r.evidence = {{"reason", "no probe points for this scenario"}};
    return;
  }
  constexpr double angle_tol = 2.0;
  const Polytope& bh = ctx.body().polytope;
  const std::size_t count = std::min<std::size_t>(cfg.sampling.count, 4000);
  json cones = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto rep = local_cone_with_reference(s, pts[i], cfg.local_cone_radius, count, cfg.sampling.seed + i, &bh);
    json c{{"point", to_json(pts[i])}, {"apex", to_json(rep.apex)}, {"rays", to_json(rep.rays)},
           {"pointed", rep.pointed}, {"containment_violation", *rep.containment_violation}};
    ok = ok && *rep.containment_violation <= r.tolerance;
    if (rep.analytic_angle_deg) {
      c["analytic_angle_deg"] = *rep.analytic_angle_deg;
      ok = ok && *rep.analytic_angle_deg <= angle_tol;
    }
    cones.push_back(c);
  }
  r.evidence = {{"cones", cones}, {"angle_tolerance_deg", angle_tol}, {"ball_samples", count}};
  r.status = verdict(ok);
}

inline void run_semirationality(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  const BodyReport& b = ctx.body();
  const Vec line = s.group().chamber_pairing(*s.zeta());
  const auto expected = normal_rationality(line, ctx.config().max_den);
  const bool found = b.semirational();
  r.evidence = {{"verdict", found ? "Found" : "NotFound"},
                {"expected", expected.rational ? "Found" : "NotFound"},
                {"zeta_line", to_json(expected)},
                {"max_den", ctx.config().max_den}};
  json hr = json::array();
  for (const auto& h : b.hull_rationality) hr.push_back(to_json(h));
  r.evidence["hull_rationality"] = hr;
  r.status = verdict(found == expected.rational);
}

inline void run_first_kind(SuiteContext& ctx, CheckResult& r) {
  const Scenario& s = ctx.scenario();
  if (!s.anti_lee()) {
    r.status = CheckStatus::Skipped;
    r.evidence = {{"reason", "scenario has no anti-Lee field"}};
    return;
  }
  const double step = ctx.config().step;
  const int m = std::min(ctx.config().probe_points, 50);
  const auto pts = ctx.probes(0x66697273ULL, m);
  double tb = 0.0, vol = 1e300, rl = 0.0, ra = 0.0, cm = 0.0;
  bool has_analytic = false;
  for (const auto& p : pts) {
    const auto f = first_kind_sample(s, p, step);
    tb = std::max(tb, std::abs(f.theta_of_b - 1.0));
    vol = std::min(vol, std::abs(f.volume));
    rl = std::max(rl, f.reeb_vs_lee);
    if (!std::isnan(f.reeb_vs_analytic)) {
      has_analytic = true;
      ra = std::max(ra, f.reeb_vs_analytic);
    }
    cm = std::max(cm, f.contact_moment);
  }
  const auto& sc = ctx.config().sampling;
  const auto leaf = s.sample(static_cast<std::size_t>(m), sc.seed ^ 0x636f6eULL, Strategy::leaf(0.0), sc.sigma).points;
  double cone = 0.0;
  for (std::size_t i = 0; i < leaf.size(); ++i) {
    CounterRng rng(sc.seed ^ 0x74ULL, i);
    cone = std::max(cone, cone_moment_residual(s, leaf[i], rng.uniform(-1.0, 1.0)));
  }
  constexpr double theta_tol = 1e-9, volume_floor = 1e-3, moment_tol = 1e-7;
  r.evidence = {{"theta_of_b_residual", tb}, {"min_volume", vol},   {"reeb_vs_minus_lee", rl},
                {"contact_moment", cm},      {"cone_moment", cone}, {"theta_tolerance", theta_tol},
                {"volume_floor", volume_floor}, {"moment_tolerance", moment_tol}};
  if (has_analytic) r.evidence["reeb_vs_analytic"] = ra;
  bool ok = tb <= theta_tol && vol > volume_floor && rl <= r.tolerance && cm <= moment_tol && cone <= moment_tol;
  if (has_analytic) ok = ok && ra <= r.tolerance;
  r.status = verdict(ok);
}

}  // namespace detail

/// Runs the enabled checks in catalog order. Lee-dependent checks are skipped
/// when the scenario declares no Lee element.
inline SuiteResult run_suite(const Scenario& s, const SuiteConfig& cfg) {
  using Runner = void (*)(detail::SuiteContext&, CheckResult&);
  static const std::map<std::string, Runner> runners{
      {"structure", detail::run_structure},   {"moment_condition", detail::run_moment_condition},
      {"equivariance", detail::run_equivariance}, {"lee_type", detail::run_lee_type},
      {"body", detail::run_body},             {"cone", detail::run_cone},
      {"leaf_stability", detail::run_leaf_stability}, {"local_cones", detail::run_local_cones},
      {"semirationality", detail::run_semirationality}, {"first_kind", detail::run_first_kind}};
  for (const auto& [name, c] : cfg.checks)
    if (!is_check_name(name)) throw ConfigError("unknown check \"" + name + "\"");

  detail::SuiteContext ctx(s, cfg);
  SuiteResult out;
  for (const auto& name : check_names()) {
    const CheckConfig cc = cfg.check(name);
    CheckResult r;
    r.name = name;
    r.tolerance = cc.tolerance;
    if (!cc.enabled) {
      r.evidence = {{"reason", "disabled"}};
    } else if (lee_dependent(name) && !s.zeta()) {
      r.evidence = {{"reason", "scenario declares no Lee element"}};
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        runners.at(name)(ctx, r);
      } catch (const Error& e) {
        r.status = CheckStatus::Fail;
        r.evidence["error"] = e.what();
      }
      r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    out.checks.push_back(std::move(r));
  }
  out.cloud = std::move(ctx.cloud_);
  out.body = std::move(ctx.body_);
  return out;
}

}  // namespace confsym
