// irgg: run experiments on interdependent random geometric graphs.
//
//   irgg run <config> [--seed N] [--out DIR] [--threads K]
//   irgg selfcheck
//   irgg version
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <iostream>

#include <CLI11.hpp>

#include "irgg/config.hpp"
#include "irgg/experiment.hpp"
#include "irgg/selfcheck.hpp"
#include "irgg/version.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int run_command(const std::string& path, const irgg::RunOverrides& overrides) {
  irgg::ExperimentConfig cfg;
  try {
    cfg = irgg::load_config(path);
  } catch (const irgg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const irgg::RunReport r = irgg::run_experiment(std::move(cfg), overrides, &std::cerr);
    for (const auto& f : r.files) std::cout << f << '\n';
    std::cout << r.manifest << '\n';
    return 0;
  } catch (const irgg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const irgg::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percolation experiments on interdependent random geometric graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "INI experiment config")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override experiment.seed");
  auto* out_opt = run->add_option("--out", out_dir, "Override experiment.output");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  bool corrupt = false;
  auto* selfcheck = app.add_subcommand("selfcheck", "Run the fast invariant suite");
  selfcheck->add_flag("--corrupt-tolerance", corrupt, "Test hook: make every tolerance check fail")
      ->group("");

  app.add_subcommand("version", "Print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run) {
    irgg::RunOverrides o;
    if (*seed_opt) o.seed = seed;
    if (*out_opt) o.output_dir = out_dir;
    if (*threads_opt) o.threads = threads;
    return run_command(config_path, o);
  }
  if (*selfcheck) {
    const bool ok = irgg::print_selfcheck(irgg::run_selfcheck({corrupt}), std::cout);
    return ok ? 0 : 1;
  }
  std::cout << "irgg " << irgg::kVersion << '\n';
  return 0;
}
