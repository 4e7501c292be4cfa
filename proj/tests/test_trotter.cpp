#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "trotterlab/fock.hpp"
#include "trotterlab/trotter.hpp"

using namespace trotterlab;
using namespace trotterlab::trotter;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using linalg::StateVector;
using testsupport::Rng;

namespace {

TrotterProblem pauli_problem() {
  return TrotterProblem(testsupport::pauli_x(), testsupport::pauli_z());
}

// Closed-form (e^{-i(t/n)X} e^{-i(t/n)Z})^n psi through 2x2 Pauli
// exponentials only; independent of the eigendecomposition path.
StateVector pauli_trotter_oracle(double t, std::size_t n, StateVector psi) {
  const ComplexMatrix ux = testsupport::exp_2x2(testsupport::pauli_x(), t / double(n));
  const ComplexMatrix uz = testsupport::exp_2x2(testsupport::pauli_z(), t / double(n));
  for (std::size_t k = 0; k < n; ++k) {
    psi = linalg::matvec(ux, linalg::matvec(uz, psi));
  }
  return psi;
}

StateVector e0() { return StateVector(std::vector<Complex>{1.0, 0.0}); }

}  // namespace

TEST_CASE("trotter problem validates dimensions") {
  CHECK_THROWS_AS(TrotterProblem(testsupport::pauli_x(),
                                 HermitianMatrix(ComplexMatrix::identity(3))),
                  std::invalid_argument);
}

TEST_CASE("trotter_state at t = 0 returns the input") {
  const TrotterProblem prob = pauli_problem();
  Rng rng(21);
  const StateVector psi = testsupport::random_state(rng, 2);
  CHECK(linalg::vector_norm2(trotter_state(prob, 0.0, 5, psi) - psi) == 0.0);
  CHECK(state_error(prob, 0.0, 5, psi) == 0.0);
}

TEST_CASE("commuting diagonal generators factor exactly") {
  std::vector<double> d1{0.3, -1.2, 2.0, 0.0};
  std::vector<double> d2{1.0, 0.5, -0.25, 3.0};
  const TrotterProblem prob(HermitianMatrix::from_diagonal(d1),
                            HermitianMatrix::from_diagonal(d2));
  Rng rng(22);
  const StateVector psi = testsupport::random_state(rng, 4);
  for (const std::size_t n : {1, 3, 10}) {
    const StateVector trotterized = trotter_state(prob, 1.7, n, psi);
    const StateVector exact = linalg::evolve_state(prob.eig_sum, 1.7, psi);
    CHECK(linalg::vector_norm2(trotterized - exact) <= 1e-12);
    CHECK(state_error(prob, 1.7, n, psi) <= 1e-11);
  }
  CHECK(uniform_error(prob, 1.7, 4) <= 1e-10);
}

TEST_CASE("pauli trotter state matches the closed-form oracle") {
  const TrotterProblem prob = pauli_problem();
  const StateVector got = trotter_state(prob, 0.5, 1, e0());
  const StateVector expected = pauli_trotter_oracle(0.5, 1, e0());
  CHECK(linalg::vector_norm2(got - expected) <= 1e-13);
  // and against frozen values for this exact case
  CHECK(std::abs(got[0] - Complex(0.77015115293406977, -0.42073549240394814)) <= 1e-12);
  CHECK(std::abs(got[1] - Complex(-0.22984884706593009, -0.42073549240394820)) <= 1e-12);
}

TEST_CASE("pauli state error at n = 10 sits under the commutator bound") {
  const TrotterProblem prob = pauli_problem();
  const double err = state_error(prob, 0.5, 10, e0());
  const StateVector oracle_state = pauli_trotter_oracle(0.5, 10, e0());
  const StateVector exact =
      linalg::matvec(testsupport::exp_2x2(prob.h1 + prob.h2, 0.5), e0());
  const double oracle_err = linalg::vector_norm2(oracle_state - exact);
  CHECK(err == doctest::Approx(oracle_err).epsilon(1e-10));
  // (t^2 / 2n) ||[X, Z]|| = 0.025
  CHECK(err <= 0.025);
}

TEST_CASE("state_error requires normalized input") {
  const TrotterProblem prob = pauli_problem();
  CHECK_THROWS_AS(state_error(prob, 1.0, 2, StateVector(std::vector<Complex>{2.0, 0.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(trotter_state(prob, 1.0, 0, e0()), std::invalid_argument);
}

TEST_CASE("batched evolution agrees with one-state calls") {
  Rng rng(23);
  const TrotterProblem prob(testsupport::random_hermitian(rng, 6),
                            testsupport::random_hermitian(rng, 6));
  std::vector<StateVector> psis;
  for (int k = 0; k < 4; ++k) psis.push_back(testsupport::random_state(rng, 6));
  const std::vector<double> batched = state_errors(prob, 0.8, 7, psis);
  for (std::size_t k = 0; k < psis.size(); ++k) {
    CHECK(batched[k] == doctest::Approx(state_error(prob, 0.8, 7, psis[k])).epsilon(1e-12));
  }
}

TEST_CASE("trotterized evolution is unitary") {
  Rng rng(24);
  const TrotterProblem prob(testsupport::random_hermitian(rng, 9),
                            testsupport::random_hermitian(rng, 9));
  const StateVector psi = testsupport::random_state(rng, 9);
  const StateVector out = trotter_state(prob, 1.9, 13, psi);
  CHECK(std::abs(linalg::vector_norm2(out) - 1.0) <= 1e-10);
}

TEST_CASE("state error never exceeds the uniform error") {
  Rng rng(25);
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t d = 2 + rng.index(6);
    const TrotterProblem prob(testsupport::random_hermitian(rng, d),
                              testsupport::random_hermitian(rng, d));
    const double t = rng.uniform(0.1, 2.0);
    const std::size_t n = 1 + rng.index(12);
    const double uniform = uniform_error(prob, t, n);
    CHECK(uniform <= 2.0 + 1e-9);
    for (int s = 0; s < 5; ++s) {
      const double err = state_error(prob, t, n, testsupport::random_state(rng, d));
      CHECK(err >= 0.0);
      CHECK(err <= uniform + 1e-10);
    }
  }
}

TEST_CASE("pauli uniform error dominates and stays near the state error") {
  const TrotterProblem prob = pauli_problem();
  const double uniform = uniform_error(prob, 0.5, 10);
  const double err = state_error(prob, 0.5, 10, e0());
  CHECK(uniform >= err);
  CHECK(uniform <= 0.025);
}

TEST_CASE("state error is invariant under identity shifts") {
  Rng rng(26);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t d = 2 + rng.index(6);
    const HermitianMatrix h1 = testsupport::random_hermitian(rng, d);
    const HermitianMatrix h2 = testsupport::random_hermitian(rng, d);
    const StateVector psi = testsupport::random_state(rng, d);
    const double a = rng.uniform(-5.0, 5.0);
    const double b = rng.uniform(-5.0, 5.0);
    const double base = state_error(TrotterProblem(h1, h2), 0.9, 7, psi);
    const double shifted = state_error(TrotterProblem(h1.shifted(a), h2.shifted(b)), 0.9, 7, psi);
    CHECK(std::abs(base - shifted) <= 1e-9);
  }
}

TEST_CASE("first-order scaling of the oscillator splitting") {
  const auto& half_q2 = fock::builtin("half_q2");
  const auto& half_p2 = fock::builtin("half_p2");
  const TrotterProblem prob(fock::truncate_polynomial(half_q2, {.dim = 30}),
                            fock::truncate_polynomial(half_p2, {.dim = 30}));
  const StateVector psi = fock::fock_state(0, 30);
  const auto err_at = [&](std::size_t n) { return state_error(prob, 1.0, n, psi); };
  for (const std::size_t n : {100, 200, 400}) {
    const double ratio = err_at(n) / err_at(2 * n);
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
}

TEST_CASE("error_series contract") {
  const auto& half_q2 = fock::builtin("half_q2");
  const auto& half_p2 = fock::builtin("half_p2");

  SUBCASE("oscillator series stays below the analytic ceiling") {
    std::vector<std::size_t> ds;
    for (std::size_t d = 5; d <= 50; d += 5) ds.push_back(d);
    const ErrorSeries series = error_series(half_q2, half_p2, 0, 1.0, 1000, ds);
    CHECK(series.state_label == "m0");
    CHECK(series.rows.size() == ds.size());
    const double ceiling = std::sqrt(3.0 / 5.0) / 800.0;
    for (const auto& [d, value] : series.rows) {
      CHECK(value >= 0.0);
      CHECK(value <= ceiling);
    }
  }

  SUBCASE("t = 0 gives the all-zero series") {
    const std::vector<std::size_t> ds{3, 4, 5};
    const ErrorSeries series = error_series(half_q2, half_p2, 1, 0.0, 10, ds);
    for (const auto& [d, value] : series.rows) CHECK(value == 0.0);
  }

  SUBCASE("input validation") {
    const std::vector<std::size_t> unsorted{5, 5, 6};
    CHECK_THROWS_AS(error_series(half_q2, half_p2, 0, 1.0, 10, unsorted),
                    std::invalid_argument);
    const std::vector<std::size_t> ds{3, 4};
    CHECK_THROWS_AS(error_series(half_q2, half_p2, 3, 1.0, 10, ds), std::invalid_argument);
  }
}

TEST_CASE("tail error estimate") {
  ErrorSeries series;
  series.state_label = "m0";
  series.rows = {{1, 0.5}, {2, 0.5}, {3, 0.5}};
  CHECK(tail_error_estimate(series, 2) == 0.5);

  series.rows = {{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.4}};
  CHECK(tail_error_estimate(series, 2) == 0.4);
  CHECK(tail_error_estimate(series, 4) == 0.4);
  CHECK_THROWS_AS(tail_error_estimate(series, 5), std::invalid_argument);
  CHECK_THROWS_AS(tail_error_estimate(series, 0), std::invalid_argument);
}
