#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trotterlab/trotter.hpp"

namespace trotterlab::diagnostics {

/// Saturation verdict for one error series. plateau_value and
/// onset_dimension are meaningful when saturates is true.
struct PlateauVerdict {
  bool saturates = false;
  double plateau_value = 0.0;
  std::size_t onset_dimension = 0;
  std::size_t window = 0;
  double rtol = 0.0;
};

/// Relative-band plateau test. Over the trailing `window` rows the series
/// saturates iff (max - min) <= rtol * max(mean, 1e-12); the absolute floor
/// keeps essentially-zero series (commuting pairs) from dividing by noise.
/// The onset is the earliest dimension from which every sliding window of
/// the same length passes the same test. Requires at least 2*window rows.
PlateauVerdict detect_plateau(const trotter::ErrorSeries& series, std::size_t window,
                              double rtol);

/// Joint verdict over several states. A finite plateau is evidence, not a
/// proof, hence the deliberately hedged label.
struct ProblemVerdict {
  bool consistent_with_convergence = false;
  std::vector<std::string> non_saturating_labels;
  std::vector<PlateauVerdict> per_series;

  std::string label() const {
    return consistent_with_convergence ? "consistent-with-convergence" : "non-saturating";
  }
};

ProblemVerdict classify_problem(std::span<const trotter::ErrorSeries> series_per_state,
                                std::size_t window, double rtol);

}  // namespace trotterlab::diagnostics
