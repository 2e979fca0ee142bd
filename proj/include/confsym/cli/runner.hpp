#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "confsym/cli/config.hpp"

namespace confsym {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitError = 2 };

struct RunOutcome {
  int exit_code = kExitError;
  json report;
  std::string message;
};

inline json make_report(const RunConfig& cfg, const Scenario& s, const SuiteResult& res) {
  json checks = json::array();
  for (const auto& c : res.checks)
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"pass", c.status == CheckStatus::Pass},
                      {"tolerance", c.tolerance},
                      {"evidence", c.evidence},
                      {"runtime_ms", c.runtime_ms}});
  return {{"toolkit", {{"name", "confsym"}, {"version", kToolkitVersion}}},
          {"seed", cfg.suite.sampling.seed},
          {"config", serialize(cfg)},
          {"scenario",
           {{"name", s.name()},
            {"description", s.description()},
            {"dim", s.dim()},
            {"group", s.group().kind_name()},
            {"lee_element", s.zeta() ? to_json(s.zeta()->coords) : json(nullptr)}}},
          {"checks", checks},
          {"verdict", res.pass() ? "pass" : "fail"}};
}

inline json make_polytopes(const SuiteResult& res) {
  json j = json::object();
  if (res.body) {
    j["body"] = to_json(res.body->polytope);
    if (!res.body->note.empty()) j["body"]["note"] = res.body->note;
  }
  if (const auto* leaf = res.find("leaf_stability"); leaf && leaf->evidence.contains("bodies")) {
    json leaves = json::array();
    const auto& levels = leaf->evidence["levels"];
    for (std::size_t i = 0; i < leaf->evidence["bodies"].size(); ++i) {
      json b = leaf->evidence["bodies"][i];
      b["level"] = levels[i];
      leaves.push_back(b);
    }
    j["leaves"] = leaves;
  }
  return j;
}

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_cloud_csv(std::ostream& os, const Scenario& s, const MomentCloud& c) {
  const int d = s.dim();
  const int k = s.group().dual_dim();
  const int r = s.group().chamber_dim();
  for (int i = 0; i < d; ++i) os << "x" << i << ",";
  os << "f_value";
  for (int i = 0; i < k; ++i) os << ",phi" << i;
  for (int i = 0; i < r; ++i) os << ",reduced" << i;
  os << "\n";
  for (std::size_t n = 0; n < c.size(); ++n) {
    for (int i = 0; i < d; ++i) os << format_g17(c.batch.points[n][i]) << ",";
    os << format_g17(c.f_values[n]);
    for (int i = 0; i < k; ++i) os << "," << format_g17(c.raw[n].coords[i]);
    for (int i = 0; i < r; ++i) os << "," << format_g17(c.reduced[n][i]);
    os << "\n";
  }
}

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write to " + p.string() + " failed");
}

}  // namespace detail

/// Builds the scenario, runs the suite and writes the report files.
inline RunOutcome run(const RunConfig& cfg, std::ostream& diag = std::cerr) {
  RunOutcome out;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
    const fs::path probe = dir / ".confsym_write_probe";
    {
      std::ofstream t(probe);
      if (!t) throw Error("output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);

    ScenarioPtr s = build(cfg.scenario.name, cfg.scenario.params, true);
    if (cfg.fault) s->inject_fault(cfg.fault->component, cfg.fault->offset);
    SuiteResult res = run_suite(*s, cfg.suite);
    out.report = make_report(cfg, *s, res);
    detail::write_text(dir / "report.json", out.report.dump(2) + "\n");
    detail::write_text(dir / "polytope.json", make_polytopes(res).dump(2) + "\n");
    if (cfg.emit_cloud) {
      const auto& sc = cfg.suite.sampling;
      const MomentCloud c = res.cloud ? *res.cloud : compute_cloud(*s, sc.count, sc.seed, sc.to_strategy(), sc.sigma);
      std::ofstream csv(dir / "cloud.csv", std::ios::binary | std::ios::trunc);
      if (!csv) throw Error("cannot open cloud.csv for writing");
      write_cloud_csv(csv, *s, c);
      if (!csv) throw Error("write to cloud.csv failed");
    }
    out.exit_code = res.pass() ? kExitPass : kExitCheckFailed;
    for (const auto& c : res.checks)
      if (c.status == CheckStatus::Fail) diag << "check failed: " << c.name << "\n";
  } catch (const std::exception& e) {
    out.exit_code = kExitError;
    out.message = e.what();
    diag << "error: " << e.what() << "\n";
  }
  return out;
}

}  // namespace confsym
