#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "confsym/momentbody/suite.hpp"
#include "confsym/scenarios/catalog.hpp"

namespace confsym {

struct ScenarioConfig {
  std::string name;
  json params = json::object();

  bool operator==(const ScenarioConfig&) const = default;
};

struct FaultConfig {
  int component = 0;
  double offset = 0.0;

  bool operator==(const FaultConfig&) const = default;
};

struct RunConfig {
  ScenarioConfig scenario;
  SuiteConfig suite;
  std::string output_dir = "confsym_out";
  bool emit_cloud = false;
  std::optional<FaultConfig> fault;

  bool operator==(const RunConfig&) const = default;
};

struct ConfigIssue {
  std::string path;
  std::string message;
};

struct Validation {
  std::optional<RunConfig> config;
  std::vector<ConfigIssue> errors;

  bool ok() const { return config.has_value(); }
};

namespace detail {

class IssueSink {
 public:
  void add(std::string path, std::string msg) { issues.push_back({std::move(path), std::move(msg)}); }

  void unknown_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) add(path.empty() ? k : path + "." + k, "unknown field");
  }

  template <class T>
  void read(const json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj[key];
    const std::string p = path.empty() ? key : path + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return add(p, "expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return add(p, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        return add(p, "expected a non-negative integer");
      out = v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return add(p, "expected an integer");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) return add(p, "expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) return add(p, "expected an array of numbers");
      std::vector<double> xs;
      for (const auto& e : v) {
        if (!e.is_number()) return add(p, "expected an array of numbers");
        xs.push_back(e.get<double>());
      }
      out = xs;
    }
  }

  std::vector<ConfigIssue> issues;
};

inline void parse_sampling(const json& j, SamplingConfig& s, IssueSink& sink) {
  const std::string P = "sampling";
  if (!j.is_object()) return sink.add(P, "expected an object");
  sink.unknown_keys(j, P, {"count", "seed", "strategy", "band", "level", "center", "radius", "sigma", "leaf_levels"});
  if (j.contains("count")) {
    if (!j["count"].is_number_integer() || j["count"].get<std::int64_t>() < 1) sink.add(P + ".count", "count must be an integer >= 1");
    else s.count = j["count"].get<std::size_t>();
  }
  sink.read(j, "seed", P, s.seed);
  sink.read(j, "strategy", P, s.strategy);
  if (s.strategy != "full" && s.strategy != "leaf" && s.strategy != "ball")
    sink.add(P + ".strategy", "strategy must be one of full, leaf, ball");
  if (j.contains("band")) {
    std::vector<double> b;
    sink.read(j, "band", P, b);
    if (b.size() != 2 || !(b[0] <= b[1])) sink.add(P + ".band", "band must be [lo, hi] with lo <= hi");
    else s.band_lo = b[0], s.band_hi = b[1];
  }
  sink.read(j, "level", P, s.level);
  sink.read(j, "center", P, s.center);
  sink.read(j, "radius", P, s.radius);
  if (!(s.radius > 0.0)) sink.add(P + ".radius", "radius must be positive");
  sink.read(j, "sigma", P, s.sigma);
  if (!(s.sigma > 0.0)) sink.add(P + ".sigma", "sigma must be positive");
  sink.read(j, "leaf_levels", P, s.leaf_levels);
  if (s.leaf_levels.empty()) sink.add(P + ".leaf_levels", "at least one leaf level is required");
  if (s.strategy == "ball" && s.center.empty()) sink.add(P + ".center", "ball sampling needs a center");
}

inline void parse_checks(const json& j, SuiteConfig& cfg, IssueSink& sink) {
  if (!j.is_array()) return sink.add("checks", "expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string P = "checks[" + std::to_string(i) + "]";
    const json& e = j[i];
    std::string name;
    if (e.is_string()) {
      name = e.get<std::string>();
    } else if (e.is_object()) {
      sink.unknown_keys(e, P, {"name", "enabled", "tolerance"});
      if (!e.contains("name") || !e["name"].is_string()) {
        sink.add(P + ".name", "missing check name");
        continue;
      }
      name = e["name"].get<std::string>();
    } else {
      sink.add(P, "expected a check name or an object");
      continue;
    }
    if (!is_check_name(name)) {
      sink.add(P + ".name", "unknown check \"" + name + "\"");
      continue;
    }
    if (cfg.checks.count(name)) sink.add(P + ".name", "check \"" + name + "\" listed twice");
    CheckConfig cc = cfg.check(name);
    if (e.is_object()) {
      sink.read(e, "enabled", P, cc.enabled);
      sink.read(e, "tolerance", P, cc.tolerance);
      if (!(cc.tolerance > 0.0)) sink.add(P + ".tolerance", "tolerance must be positive");
    }
    cfg.checks[name] = cc;
  }
}

inline void parse_options(const json& j, SuiteConfig& cfg, IssueSink& sink) {
  const std::string P = "options";
  if (!j.is_object()) return sink.add(P, "expected an object");
  sink.unknown_keys(j, P, {"probe_points", "step", "max_den", "local_cone_points", "local_cone_radius"});
  sink.read(j, "probe_points", P, cfg.probe_points);
  if (cfg.probe_points < 8) sink.add(P + ".probe_points", "probe_points must be >= 8");
  sink.read(j, "step", P, cfg.step);
  if (!(cfg.step > 0.0)) sink.add(P + ".step", "step must be positive");
  sink.read(j, "max_den", P, cfg.max_den);
  if (cfg.max_den < 1) sink.add(P + ".max_den", "max_den must be >= 1");
  if (j.contains("local_cone_points")) {
    const json& pts = j["local_cone_points"];
    if (!pts.is_array()) {
      sink.add(P + ".local_cone_points", "expected an array of points");
    } else {
      cfg.local_cone_points.clear();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<double> p;
        bool numeric = pts[i].is_array();
        if (numeric)
          for (const auto& x : pts[i]) numeric = numeric && x.is_number(), p.push_back(x.is_number() ? x.get<double>() : 0.0);
        if (!numeric) sink.add(P + ".local_cone_points[" + std::to_string(i) + "]", "expected an array of numbers");
        cfg.local_cone_points.push_back(p);
      }
    }
  }
  sink.read(j, "local_cone_radius", P, cfg.local_cone_radius);
  if (!(cfg.local_cone_radius > 0.0)) sink.add(P + ".local_cone_radius", "local_cone_radius must be positive");
}

}  // namespace detail

/// Structural and semantic validation; every problem is reported with its path.
inline Validation validate(const json& doc) {
  detail::IssueSink sink;
  Validation out;
  if (!doc.is_object()) {
    out.errors.push_back({"", "configuration must be a JSON object"});
    return out;
  }
  sink.unknown_keys(doc, "", {"scenario", "sampling", "checks", "options", "output_dir", "emit_cloud", "fault"});
  RunConfig cfg;

  ScenarioPtr scenario;
  if (!doc.contains("scenario") || !doc["scenario"].is_object()) {
    sink.add("scenario", "missing scenario object");
  } else {
    const json& sj = doc["scenario"];
    sink.unknown_keys(sj, "scenario", {"name", "params"});
    sink.read(sj, "name", "scenario", cfg.scenario.name);
    if (sj.contains("params")) cfg.scenario.params = sj["params"];
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), cfg.scenario.name) == names.end()) {
      sink.add("scenario.name", "unknown scenario \"" + cfg.scenario.name + "\"");
    } else {
      try {
        scenario = build(cfg.scenario.name, cfg.scenario.params, false);
        cfg.scenario.params = scenario->params();
      } catch (const Error& e) {
        sink.add("scenario.params", e.what());
      }
    }
  }

  if (doc.contains("sampling")) detail::parse_sampling(doc["sampling"], cfg.suite.sampling, sink);
  if (doc.contains("options")) detail::parse_options(doc["options"], cfg.suite, sink);
  if (doc.contains("checks")) detail::parse_checks(doc["checks"], cfg.suite, sink);
  for (const auto& n : check_names())
    if (!cfg.suite.checks.count(n)) cfg.suite.checks[n] = cfg.suite.check(n);
  sink.read(doc, "output_dir", "", cfg.output_dir);
  if (cfg.output_dir.empty()) sink.add("output_dir", "output_dir must not be empty");
  sink.read(doc, "emit_cloud", "", cfg.emit_cloud);
  if (doc.contains("fault") && !doc["fault"].is_null()) {
    const json& fj = doc["fault"];
    if (!fj.is_object()) {
      sink.add("fault", "expected an object");
    } else {
      sink.unknown_keys(fj, "fault", {"component", "offset"});
      FaultConfig f;
      sink.read(fj, "component", "fault", f.component);
      sink.read(fj, "offset", "fault", f.offset);
      if (scenario && (f.component < 0 || f.component >= scenario->group().algebra_dim()))
        sink.add("fault.component", "component must be in [0, " + std::to_string(scenario->group().algebra_dim()) + ")");
      cfg.fault = f;
    }
  }

  if (scenario) {
    const auto& s = cfg.suite.sampling;
    if (s.strategy == "ball" && !s.center.empty() && static_cast<int>(s.center.size()) != scenario->dim())
      sink.add("sampling.center", "center must have " + std::to_string(scenario->dim()) + " coordinates");
    for (std::size_t i = 0; i < cfg.suite.local_cone_points.size(); ++i)
      if (static_cast<int>(cfg.suite.local_cone_points[i].size()) != scenario->dim())
        sink.add("options.local_cone_points[" + std::to_string(i) + "]",
                 "point must have " + std::to_string(scenario->dim()) + " coordinates");
  }

  out.errors = std::move(sink.issues);
  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

inline Validation validate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Validation v;
    v.errors.push_back({"", std::string("invalid JSON: ") + e.what()});
    return v;
  }
  return validate(doc);
}

/// Full effective configuration; validate(serialize(c)) == c.
inline json serialize(const RunConfig& c) {
  const auto& s = c.suite.sampling;
  json checks = json::array();
  for (const auto& n : check_names()) {
    const CheckConfig cc = c.suite.check(n);
    checks.push_back({{"name", n}, {"enabled", cc.enabled}, {"tolerance", cc.tolerance}});
  }
  json j{{"scenario", {{"name", c.scenario.name}, {"params", c.scenario.params}}},
         {"sampling",
          {{"count", s.count},
           {"seed", s.seed},
           {"strategy", s.strategy},
           {"band", {s.band_lo, s.band_hi}},
           {"level", s.level},
           {"center", s.center},
           {"radius", s.radius},
           {"sigma", s.sigma},
           {"leaf_levels", s.leaf_levels}}},
         {"checks", checks},
         {"options",
          {{"probe_points", c.suite.probe_points},
           {"step", c.suite.step},
           {"max_den", c.suite.max_den},
           {"local_cone_points", c.suite.local_cone_points},
           {"local_cone_radius", c.suite.local_cone_radius}}},
         {"output_dir", c.output_dir},
         {"emit_cloud", c.emit_cloud}};
  j["fault"] = c.fault ? json{{"component", c.fault->component}, {"offset", c.fault->offset}} : json(nullptr);
  return j;
}

}  // namespace confsym
