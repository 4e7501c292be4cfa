#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trotterlab/diagnostics.hpp"
#include "trotterlab/trotter.hpp"

namespace trotterlab::harness {

enum class SweepMode { StateError, UniformError };

/// Declarative sweep description, parsed from `key = value` text.
struct SweepConfig {
  std::string h1_expr;
  std::string h2_expr;
  std::vector<std::size_t> states;  // Fock labels m, each < d_min
  double t = 0.0;
  std::size_t trotter_steps = 1;
  std::size_t d_min = 1;
  std::size_t d_max = 1;
  std::size_t d_step = 1;
  SweepMode mode = SweepMode::StateError;
  bool bound_overlay = false;
  std::string output_path = "sweep.csv";
  std::size_t window = 20;
  double rtol = 0.05;

  std::vector<std::size_t> dimension_grid() const;
};

/// Parses and validates config text; unknown keys and invariant violations
/// are rejected with the offending line and key named.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);
/// Canonical `key = value` form (parse_config round-trips it).
std::string render_config(const SweepConfig& config);

struct SweepResult {
  SweepConfig config;
  std::vector<trotter::ErrorSeries> series;  // one per requested state
  /// Per-state verdicts; empty optionals when the grid is too short for the
  /// diagnostics window.
  std::vector<std::optional<diagnostics::PlateauVerdict>> verdicts;
  std::string overall;  // consistent-with-convergence | non-saturating | not-assessed
  std::vector<std::string> failing_labels;
  double wall_seconds = 0.0;
};

/// Runs the sweep. Work is parallelized over grid dimensions (capped by
/// TROTTERLAB_THREADS) and reduced in ascending-d order, so the result is
/// identical for any thread count.
SweepResult run_sweep(const SweepConfig& config);

/// Wide CSV: header `d,m0,m1,...` plus `bound_m0,...` columns when the
/// overlay is enabled; 17 significant digits, LF line endings, trailing
/// newline. Byte-identical for identical configs.
void write_csv(const SweepResult& result, const std::string& path);

/// Whitespace-separated plot table at `path` plus a gnuplot script next to
/// it (extension .gp) rendering error-vs-d scatter with bound overlays.
void emit_plotdata(const SweepResult& result, const std::string& path);

/// Deterministic per-state verdict summary (config echo + verdicts).
std::string render_summary(const SweepResult& result);

/// Built-in sweep configs: fig2, fig3, fig4, figS1 (see the README for what
/// each one runs).
SweepConfig preset(const std::string& name);

/// Result of the seeded random-Hamiltonian campaign for the eigenstate bound.
struct VerifyReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t comparisons = 0;
  std::size_t violations = 0;
  std::size_t optimized_regressions = 0;  // optimized bound > plain bound
  double max_error_bound_ratio = 0.0;

  bool passed() const noexcept { return violations == 0 && optimized_regressions == 0; }
};

/// Draws `trials` random Hermitian pairs of dimension 2..max_dim, and checks
/// every eigenvector of the sum against the eigenstate bound over
/// t in {0.1, 0.5, 1, 2} and n in {1, 2, 5, 10, 100}.
VerifyReport run_verify_campaign(std::size_t max_dim, std::size_t trials,
                                 std::uint64_t seed);

}  // namespace trotterlab::harness
