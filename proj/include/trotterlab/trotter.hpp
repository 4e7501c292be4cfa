#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trotterlab/fock.hpp"
#include "trotterlab/linalg.hpp"

namespace trotterlab::trotter {

/// A Trotter splitting H = H1 + H2 at one truncation dimension, with the
/// three spectral decompositions precomputed.
struct TrotterProblem {
  linalg::HermitianMatrix h1;
  linalg::HermitianMatrix h2;
  linalg::SpectralDecomposition eig1;
  linalg::SpectralDecomposition eig2;
  linalg::SpectralDecomposition eig_sum;

  TrotterProblem(linalg::HermitianMatrix h1_in, linalg::HermitianMatrix h2_in);

  std::size_t dim() const noexcept { return h1.dim(); }
};

/// Error-vs-dimension table for one input state; the quantity plotted in the
/// error-saturation figures.
struct ErrorSeries {
  std::string state_label;
  std::size_t trotter_steps = 1;
  double time = 0.0;
  std::vector<std::pair<std::size_t, double>> rows;  // (d, error), d strictly increasing

  std::vector<double> values() const;
};

/// (e^{-i(t/n)H1} e^{-i(t/n)H2})^n psi. The H2 half-step is applied first
/// (rightmost factor); the two step unitaries are formed once per call and
/// applied 2n times.
linalg::StateVector trotter_state(const TrotterProblem& prob, double t,
                                  std::size_t n, const linalg::StateVector& psi);

/// Batched variant: evolves all states through one shared pass.
std::vector<linalg::StateVector> trotter_states(const TrotterProblem& prob, double t,
                                                std::size_t n,
                                                std::span<const linalg::StateVector> psis);

/// State-dependent Trotter error || (W^(n)(t) - U(t)) psi ||; psi must be
/// normalized. Always in [0, 2].
double state_error(const TrotterProblem& prob, double t, std::size_t n,
                   const linalg::StateVector& psi);

std::vector<double> state_errors(const TrotterProblem& prob, double t, std::size_t n,
                                 std::span<const linalg::StateVector> psis);

/// Uniform (operator-norm) Trotter error || W^(n)(t) - U(t) ||.
double uniform_error(const TrotterProblem& prob, double t, std::size_t n);

/// State-dependent error of the Fock state |m> across a truncation-dimension
/// grid. d_list must be strictly ascending with m < d_list.front().
ErrorSeries error_series(const fock::LadderPolynomial& h1_poly,
                         const fock::LadderPolynomial& h2_poly, std::size_t m,
                         double t, std::size_t n, std::span<const std::size_t> d_list);

/// Finite-data stand-in for the d -> infinity limsup: max over the trailing
/// `window` values of the series.
double tail_error_estimate(const ErrorSeries& series, std::size_t window);

}  // namespace trotterlab::trotter
