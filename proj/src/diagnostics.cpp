#include "trotterlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace trotterlab::diagnostics {

namespace {

constexpr double kAbsoluteFloor = 1e-12;

struct WindowStats {
  double min;
  double max;
  double mean;
};

WindowStats stats(const std::vector<double>& vals, std::size_t begin, std::size_t window) {
  WindowStats s{vals[begin], vals[begin], 0.0};
  for (std::size_t i = begin; i < begin + window; ++i) {
    s.min = std::min(s.min, vals[i]);
    s.max = std::max(s.max, vals[i]);
    s.mean += vals[i];
  }
  s.mean /= static_cast<double>(window);
  return s;
}

bool window_passes(const std::vector<double>& vals, std::size_t begin, std::size_t window,
                   double rtol) {
  const WindowStats s = stats(vals, begin, window);
  return (s.max - s.min) <= rtol * std::max(s.mean, kAbsoluteFloor);
}

}  // namespace

PlateauVerdict detect_plateau(const trotter::ErrorSeries& series, std::size_t window,
                              double rtol) {
  if (window < 1) throw std::invalid_argument("detect_plateau: window must be >= 1");
  if (!(rtol > 0.0)) throw std::invalid_argument("detect_plateau: rtol must be > 0");
  const std::vector<double> vals = series.values();
  if (vals.size() < 2 * window) {
    throw std::invalid_argument("detect_plateau: series needs at least 2*window rows");
  }

  PlateauVerdict verdict;
  verdict.window = window;
  verdict.rtol = rtol;
  const std::size_t last_begin = vals.size() - window;
  verdict.plateau_value = stats(vals, last_begin, window).mean;
  verdict.saturates = window_passes(vals, last_begin, window, rtol);
  if (verdict.saturates) {
    // Earliest start from which every sliding window stays inside the band.
    std::size_t onset = last_begin;
    while (onset > 0 && window_passes(vals, onset - 1, window, rtol)) --onset;
    verdict.onset_dimension = series.rows[onset].first;
  }
  return verdict;
}

ProblemVerdict classify_problem(std::span<const trotter::ErrorSeries> series_per_state,
                                std::size_t window, double rtol) {
  if (series_per_state.empty()) {
    throw std::invalid_argument("classify_problem: need at least one series");
  }
  ProblemVerdict verdict;
  verdict.consistent_with_convergence = true;
  for (const auto& series : series_per_state) {
    verdict.per_series.push_back(detect_plateau(series, window, rtol));
    if (!verdict.per_series.back().saturates) {
      verdict.consistent_with_convergence = false;
      verdict.non_saturating_labels.push_back(series.state_label);
    }
  }
  return verdict;
}

}  // namespace trotterlab::diagnostics
