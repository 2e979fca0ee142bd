#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "confsym/cli/runner.hpp"

using namespace confsym;

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<RunConfig> load(const std::string& path, std::optional<std::uint64_t> seed) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  Validation v = validate(*text);
  if (!v.ok()) {
    for (const auto& e : v.errors) std::cerr << (e.path.empty() ? "<root>" : e.path) << ": " << e.message << "\n";
    return std::nullopt;
  }
  if (seed) v.config->suite.sampling.seed = *seed;
  return v.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal symplectic moment map toolkit"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Override the configuration seed");

  std::string validate_path, run_path;
  auto* vcmd = app.add_subcommand("validate", "Validate a configuration and print the effective config");
  vcmd->add_option("file", validate_path, "Configuration file")->required();
  auto* rcmd = app.add_subcommand("run", "Run the check suite described by a configuration");
  rcmd->add_option("file", run_path, "Configuration file")->required();
  rcmd->add_option("--seed", seed, "Override the configuration seed");
  auto* lscmd = app.add_subcommand("list-scenarios", "List catalog scenarios");
  auto* lccmd = app.add_subcommand("list-checks", "List suite checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*vcmd) {
    const auto cfg = load(validate_path, seed);
    if (!cfg) return kExitError;
    std::cout << serialize(*cfg).dump(2) << "\n";
    return kExitPass;
  }
  if (*rcmd) {
    const auto cfg = load(run_path, seed);
    if (!cfg) return kExitError;
    const RunOutcome out = run(*cfg);
    if (out.exit_code != kExitError)
      std::cout << "verdict: " << out.report["verdict"].get<std::string>() << " (" << cfg->output_dir << ")\n";
    return out.exit_code;
  }
  if (*lscmd) {
    for (const auto& name : scenario_names()) {
      const auto s = build(name, json::object(), false);
      std::cout << name << "\t" << s->description() << "\n";
    }
    return kExitPass;
  }
  if (*lccmd) {
    for (const auto& name : check_names())
      std::cout << name << "\t" << check_description(name) << (lee_dependent(name) ? " [Lee type only]" : "") << "\n";
    return kExitPass;
  }
  return kExitError;
}
