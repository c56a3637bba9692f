#include <cstdint>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "apdg/config.hpp"
#include "apdg/harness.hpp"

namespace {

struct Common {
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

apdg::ExperimentConfig load(const std::string &path, const Common &c) {
  auto cfg = apdg::load_config(path);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.threads > 0) cfg.threads = c.threads;
  if (c.seed) cfg.seed = *c.seed;
  apdg::validate_config(cfg);
  return cfg;
}

int cmd_run(const std::string &path, const Common &c) {
  const auto cfg = load(path, c);
  if (cfg.kind == apdg::ExperimentKind::accuracy || cfg.kind == apdg::ExperimentKind::ap_sweep)
    throw apdg::ConfigError("experiment kind '" + apdg::to_string(cfg.kind) +
                            "' needs the '" +
                            (cfg.kind == apdg::ExperimentKind::accuracy ? "accuracy" : "ap-sweep") +
                            "' subcommand");
  const auto res = apdg::run_example(cfg, cfg.output_dir);
  std::cout << "steps," << res.run.steps << "\n";
  std::cout << "min_f," << res.run.min_f << "\n";
  std::cout << "max_limiter_average_error," << res.run.max_limiter_average_error << "\n";
  if (res.drift_diffusion) {
    std::cout << "density_discrepancy," << res.drift_diffusion->density_discrepancy << "\n";
    if (res.field) std::cout << "field_discrepancy," << res.drift_diffusion->field_discrepancy << "\n";
  }
  for (const auto &f : res.files) std::cout << "wrote," << f.string() << "\n";
  return 0;
}

int cmd_accuracy(const std::string &path, const Common &c) {
  const auto cfg = load(path, c);
  if (cfg.kind != apdg::ExperimentKind::accuracy)
    throw apdg::ConfigError("config kind is '" + apdg::to_string(cfg.kind) + "', expected 'accuracy'");
  const auto res = apdg::run_accuracy_study(cfg, cfg.output_dir);
  std::cout << std::setprecision(6);
  apdg::write_accuracy_csv(std::cout, res);
  return 0;
}

int cmd_sweep(const std::string &path, const Common &c) {
  const auto cfg = load(path, c);
  if (cfg.kind != apdg::ExperimentKind::ap_sweep)
    throw apdg::ConfigError("config kind is '" + apdg::to_string(cfg.kind) + "', expected 'ap_sweep'");
  const auto res = apdg::run_ap_sweep(cfg, cfg.output_dir);
  std::cout << std::setprecision(6);
  apdg::write_ap_sweep_csv(std::cout, res);
  return 0;
}

int cmd_check(const Common &c) {
  const auto checks = apdg::run_checks(c.seed.value_or(0));
  bool ok = true;
  std::cout << std::setprecision(3);
  for (const auto &r : checks) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " value=" << r.value
              << " tol=" << r.tolerance << "\n";
    ok = ok && r.passed;
  }
  if (!ok) std::cerr << "error: invariant check failed\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Asymptotic-preserving DG solver for the kinetic semiconductor model"};
  app.require_subcommand(1);
  Common common;
  std::string config;
  app.add_option("--out", common.out, "Output directory (overrides the config)");
  app.add_option("--threads", common.threads, "Worker threads for independent cases")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "Seed for randomized checks");

  auto *run = app.add_subcommand("run", "Run a single experiment and write its outputs");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  auto *acc = app.add_subcommand("accuracy", "Mesh refinement study");
  acc->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  auto *sweep = app.add_subcommand("ap-sweep", "Error against the limit across epsilon");
  sweep->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  auto *check = app.add_subcommand("check", "Invariant suite");
  for (auto *sub : {run, acc, sweep, check}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) return cmd_run(config, common);
    if (*acc) return cmd_accuracy(config, common);
    if (*sweep) return cmd_sweep(config, common);
    return cmd_check(common);
  } catch (const apdg::ConfigError &e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
