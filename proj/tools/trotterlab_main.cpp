#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "trotterlab/bounds.hpp"
#include "trotterlab/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitViolation = 3;

std::string strip_extension(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

int run_sweep_command(const std::string& config_path) {
  using namespace trotterlab;
  const harness::SweepConfig config = harness::load_config(config_path);
  std::cout << "running sweep: " << config.h1_expr << "  vs  " << config.h2_expr << "\n";
  const harness::SweepResult result = harness::run_sweep(config);

  harness::write_csv(result, config.output_path);
  const std::string stem = strip_extension(config.output_path);
  harness::emit_plotdata(result, stem + ".dat");

  const std::string summary = harness::render_summary(result);
  const std::string summary_path = stem + ".summary.txt";
  std::ofstream summary_file(summary_path, std::ios::binary);
  if (!summary_file) {
    throw std::runtime_error("cannot write summary to '" + summary_path + "'");
  }
  summary_file << summary;

  std::cout << summary;
  std::cout << "csv: " << config.output_path << "\n";
  std::cout << "plot data: " << stem << ".dat (script " << stem << ".gp)\n";
  std::cout << "summary: " << summary_path << "\n";
  std::printf("wall seconds: %.2f\n", result.wall_seconds);
  return kExitOk;
}

int run_verify_command(std::size_t dim, std::size_t trials, std::uint64_t seed) {
  using namespace trotterlab;
  const harness::VerifyReport report = harness::run_verify_campaign(dim, trials, seed);
  std::cout << "verify: seed " << report.seed << ", " << report.trials << " trials, "
            << report.comparisons << " comparisons\n";
  std::printf("max error/bound ratio: %.6f\n", report.max_error_bound_ratio);
  std::cout << "bound violations: " << report.violations << "\n";
  std::cout << "optimized-bound regressions: " << report.optimized_regressions << "\n";
  if (!report.passed()) {
    std::cout << "FAIL: eigenstate bound property violated\n";
    return kExitViolation;
  }
  std::cout << "OK: every Trotter error within its eigenstate bound\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trotterlab: Trotter errors and bounds for Fock-truncated Hamiltonians"};
  app.require_subcommand(1);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a sweep from a config file and persist CSV + plot data");
  std::string config_path;
  sweep_cmd->add_option("--config", config_path, "sweep config file")->required();

  auto* bound_cmd =
      app.add_subcommand("bound", "print the analytic harmonic-oscillator error bound");
  std::size_t bound_m = 0;
  double bound_t = 1.0;
  std::size_t bound_n = 1;
  bound_cmd->add_option("--m", bound_m, "Fock occupation")->required();
  bound_cmd->add_option("--t", bound_t, "total evolution time")->required();
  bound_cmd->add_option("--n", bound_n, "Trotter steps")->required();

  auto* verify_cmd = app.add_subcommand(
      "verify", "random-Hamiltonian campaign checking the eigenstate error bound");
  std::size_t verify_dim = 8;
  std::size_t verify_trials = 200;
  std::uint64_t verify_seed = 1;
  verify_cmd->add_option("--dim", verify_dim, "maximum matrix dimension (default 8)");
  verify_cmd->add_option("--trials", verify_trials, "number of random pairs (default 200)");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed (default 1)");

  auto* preset_cmd = app.add_subcommand("preset", "emit a built-in sweep config");
  std::string preset_name;
  preset_cmd->add_option("--name", preset_name, "one of fig2, fig3, fig4, figS1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep_cmd) return run_sweep_command(config_path);
    if (*bound_cmd) {
      std::printf("%.17g\n", trotterlab::bounds::ho_analytic_bound(bound_m, bound_t, bound_n));
      return kExitOk;
    }
    if (*verify_cmd) return run_verify_command(verify_dim, verify_trials, verify_seed);
    if (*preset_cmd) {
      std::cout << trotterlab::harness::render_config(trotterlab::harness::preset(preset_name));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const trotterlab::linalg::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
