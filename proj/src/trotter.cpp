#include "trotterlab/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <cblas.h>

namespace trotterlab::trotter {

namespace {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::StateVector;

const Complex kOne{1.0, 0.0};
const Complex kZero{0.0, 0.0};

// C = A * B for a d x d matrix applied to a d x s column block.
void apply_block(const ComplexMatrix& a, const std::vector<Complex>& block,
                 std::vector<Complex>& out, std::size_t d, std::size_t s) {
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(d),
              static_cast<int>(s), static_cast<int>(d), &kOne, a.data(),
              static_cast<int>(d), block.data(), static_cast<int>(s), &kZero,
              out.data(), static_cast<int>(s));
}

ComplexMatrix matrix_power(ComplexMatrix base, std::size_t n) {
  ComplexMatrix result;
  bool have_result = false;
  while (n > 0) {
    if (n & 1u) {
      result = have_result ? linalg::matmul(result, base) : base;
      have_result = true;
    }
    n >>= 1u;
    if (n > 0) base = linalg::matmul(base, base);
  }
  return result;
}

}  // namespace

TrotterProblem::TrotterProblem(linalg::HermitianMatrix h1_in, linalg::HermitianMatrix h2_in)
    : h1(std::move(h1_in)), h2(std::move(h2_in)) {
  if (h1.dim() != h2.dim()) {
    throw std::invalid_argument("TrotterProblem: H1 and H2 must share one dimension");
  }
  eig1 = linalg::eig_hermitian(h1);
  eig2 = linalg::eig_hermitian(h2);
  eig_sum = linalg::eig_hermitian(h1 + h2);
}

std::vector<double> ErrorSeries::values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& [d, v] : rows) out.push_back(v);
  return out;
}

std::vector<StateVector> trotter_states(const TrotterProblem& prob, double t,
                                        std::size_t n, std::span<const StateVector> psis) {
  if (n < 1) throw std::invalid_argument("trotter_states: need n >= 1");
  const std::size_t d = prob.dim();
  for (const auto& psi : psis) {
    if (psi.dim() != d) throw std::invalid_argument("trotter_states: state dimension mismatch");
  }
  std::vector<StateVector> out(psis.begin(), psis.end());
  if (t == 0.0 || psis.empty()) return out;

  const ComplexMatrix step1 = linalg::evolution_operator(prob.eig1, t / static_cast<double>(n));
  const ComplexMatrix step2 = linalg::evolution_operator(prob.eig2, t / static_cast<double>(n));

  const std::size_t s = psis.size();
  std::vector<Complex> block(d * s);
  std::vector<Complex> scratch(d * s);
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i < d; ++i) block[i * s + j] = psis[j][i];
  }
  for (std::size_t cycle = 0; cycle < n; ++cycle) {
    apply_block(step2, block, scratch, d, s);  // rightmost factor acts first
    apply_block(step1, scratch, block, d, s);
  }
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i < d; ++i) out[j][i] = block[i * s + j];
  }
  return out;
}

StateVector trotter_state(const TrotterProblem& prob, double t, std::size_t n,
                          const StateVector& psi) {
  return trotter_states(prob, t, n, {&psi, 1}).front();
}

std::vector<double> state_errors(const TrotterProblem& prob, double t, std::size_t n,
                                 std::span<const StateVector> psis) {
  for (const auto& psi : psis) {
    if (std::abs(linalg::vector_norm2(psi) - 1.0) > 1e-9) {
      throw std::invalid_argument("state_error: input state must be normalized");
    }
  }
  const std::vector<StateVector> trotterized = trotter_states(prob, t, n, psis);
  std::vector<double> out;
  out.reserve(psis.size());
  for (std::size_t j = 0; j < psis.size(); ++j) {
    const StateVector exact = linalg::evolve_state(prob.eig_sum, t, psis[j]);
    out.push_back(linalg::vector_norm2(trotterized[j] - exact));
  }
  return out;
}

double state_error(const TrotterProblem& prob, double t, std::size_t n,
                   const StateVector& psi) {
  return state_errors(prob, t, n, {&psi, 1}).front();
}

double uniform_error(const TrotterProblem& prob, double t, std::size_t n) {
  if (n < 1) throw std::invalid_argument("uniform_error: need n >= 1");
  if (t == 0.0) return 0.0;
  const double tau = t / static_cast<double>(n);
  const ComplexMatrix step =
      linalg::matmul(linalg::evolution_operator(prob.eig1, tau),
                     linalg::evolution_operator(prob.eig2, tau));
  const ComplexMatrix difference =
      matrix_power(step, n) - linalg::evolution_operator(prob.eig_sum, t);
  return linalg::spectral_norm(difference);
}

ErrorSeries error_series(const fock::LadderPolynomial& h1_poly,
                         const fock::LadderPolynomial& h2_poly, std::size_t m, double t,
                         std::size_t n, std::span<const std::size_t> d_list) {
  if (d_list.empty()) throw std::invalid_argument("error_series: empty dimension list");
  for (std::size_t i = 1; i < d_list.size(); ++i) {
    if (d_list[i] <= d_list[i - 1]) {
      throw std::invalid_argument("error_series: dimensions must be strictly ascending");
    }
  }
  if (m >= d_list.front()) {
    throw std::invalid_argument(
        "error_series: Fock label must fit in the smallest truncation");
  }
  ErrorSeries series;
  series.state_label = "m" + std::to_string(m);
  series.trotter_steps = n;
  series.time = t;
  series.rows.reserve(d_list.size());
  for (const std::size_t d : d_list) {
    const TrotterProblem prob(fock::truncate_polynomial(h1_poly, {.dim = d}),
                              fock::truncate_polynomial(h2_poly, {.dim = d}));
    const StateVector psi = fock::fock_state(m, d);
    series.rows.emplace_back(d, state_error(prob, t, n, psi));
  }
  return series;
}

double tail_error_estimate(const ErrorSeries& series, std::size_t window) {
  if (window < 1 || window > series.rows.size()) {
    throw std::invalid_argument("tail_error_estimate: window must be in [1, rows]");
  }
  double best = 0.0;
  for (std::size_t i = series.rows.size() - window; i < series.rows.size(); ++i) {
    best = std::max(best, series.rows[i].second);
  }
  return best;
}

}  // namespace trotterlab::trotter
