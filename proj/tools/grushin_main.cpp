// Command-line harness: runs the verification sweeps described in the README
// and writes plot-ready CSV records plus JSON aggregates.
//
// Exit codes: 0 all suites passed, 1 at least one suite failed, 2 bad
// configuration or arguments.

#include "grushin/suites.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--out", args.out_path, "output base path (writes <out>.csv and <out>.json)");
  cmd->add_option("--seed", args.seed, "sample generator seed (overrides config)");
  cmd->add_option("--samples", args.samples, "sample count per suite (overrides config)");
}

grushin::RunConfig build_config(const CommonArgs& args) {
  grushin::RunConfig cfg =
      args.config_path.empty() ? grushin::RunConfig{} : grushin::load_run_config(args.config_path);
  if (!args.out_path.empty()) cfg.output_path = args.out_path;
  if (args.seed) cfg.seed = *args.seed;
  if (args.samples) {
    if (*args.samples < 1) throw grushin::ConfigError("--samples must be >= 1");
    cfg.sample_count = *args.samples;
  }
  return cfg;
}

int dispatch(const CommonArgs& args, const std::string& command,
             const std::function<grushin::SuiteRun(const grushin::RunConfig&)>& runner) {
  grushin::RunConfig cfg;
  try {
    cfg = build_config(args);
  } catch (const grushin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const grushin::DimensionMismatchError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    grushin::SuiteRun run = runner(cfg);
    const int code = grushin::finalize_run(cfg, command, run);
    for (const auto& rep : run.reports) {
      std::cout << (rep.pass() ? "[PASS] " : "[FAIL] ") << rep.suite
                << " max_rel=" << grushin::format_double(rep.max_rel())
                << " tol=" << grushin::format_double(rep.tolerance) << " n=" << rep.count()
                << (rep.excluded_count ? " excluded=" + std::to_string(rep.excluded_count) : "")
                << "\n";
    }
    std::cout << "report: " << cfg.output_path << ".csv / .json\n";
    return code;
  } catch (const grushin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "suite error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise verification harness for sub-Finsler Baouendi-Grushin calculus"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    grushin::SuiteRun (*runner)(const grushin::RunConfig&);
  };
  const Sub subs[] = {
      {"check-identities", "norm duality, chain-rule and radial identities", grushin::run_check_identities},
      {"verify-yamabe", "lemma chain and critical-equation residuals", grushin::run_verify_yamabe},
      {"verify-fundamental", "fundamental-solution annihilation per (alpha, p)", grushin::run_verify_fundamental},
      {"wulff", "unit-sphere polylines of the dual norms and gauge slice", grushin::run_wulff},
      {"energy", "quadrature of the energy, critical norms and the Sobolev quotient", grushin::run_energy},
  };

  CommonArgs args[std::size(subs)];
  int selected = -1;
  for (size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, args[i]);
    cmd->callback([&selected, i]() { selected = static_cast<int>(i); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad arguments are configuration errors
  }
  if (selected < 0) return 2;
  return dispatch(args[selected], subs[selected].name,
                  subs[static_cast<size_t>(selected)].runner);
}
