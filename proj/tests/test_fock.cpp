#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "test_support.hpp"
#include "trotterlab/fock.hpp"

using namespace trotterlab;
using namespace trotterlab::fock;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using testsupport::max_abs_diff;

namespace {

LadderPolynomial number_operator() {
  return (LadderPolynomial::ladder(LadderOp::Raise) * LadderPolynomial::ladder(LadderOp::Lower))
      .flagged_hermitian();
}

// Reference truncation: build padded ladder matrices, multiply words densely,
// cut the top-left block. Independent of the chain evaluation in
// truncate_polynomial.
ComplexMatrix dense_padded_truncation(const LadderPolynomial& p, std::size_t d) {
  const std::size_t padded = d + static_cast<std::size_t>(p.degree());
  ComplexMatrix sum(padded, padded);
  for (const auto& term : p.terms()) {
    ComplexMatrix word = ComplexMatrix::identity(padded);
    for (const LadderOp op : term.word) {
      word = linalg::matmul(word, op == LadderOp::Lower ? annihilation_matrix(padded)
                                                        : creation_matrix(padded));
    }
    sum = sum + term.coeff.to_complex() * word;
  }
  ComplexMatrix block(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) block(i, j) = sum(i, j);
  }
  return block;
}

}  // namespace

TEST_CASE("annihilation matrix entries") {
  CHECK(annihilation_matrix(1) == ComplexMatrix(1, 1));
  const ComplexMatrix a2 = annihilation_matrix(2);
  CHECK(a2(0, 1) == Complex(1.0, 0.0));
  CHECK(a2(0, 0) == Complex(0.0, 0.0));
  CHECK(a2(1, 0) == Complex(0.0, 0.0));
  CHECK(a2(1, 1) == Complex(0.0, 0.0));
  const ComplexMatrix a3 = annihilation_matrix(3);
  CHECK(a3(0, 1) == Complex(1.0, 0.0));
  CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) == 0.0);
  CHECK_THROWS_AS(annihilation_matrix(0), std::invalid_argument);
}

TEST_CASE("position and momentum matrices at d = 2") {
  const HermitianMatrix q = position_matrix(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(q(0, 1) - inv_sqrt2) <= 1e-15);
  CHECK(std::abs(q(1, 0) - inv_sqrt2) <= 1e-15);
  CHECK(q(0, 0) == Complex(0.0, 0.0));

  const HermitianMatrix p = momentum_matrix(2);
  CHECK(std::abs(p(0, 1) - Complex(0.0, -inv_sqrt2)) <= 1e-15);
  CHECK(std::abs(p(1, 0) - Complex(0.0, inv_sqrt2)) <= 1e-15);

  // hermiticity is exact by construction
  for (const auto& h : {q, p}) {
    CHECK(max_abs_diff(h.matrix(), h.matrix().adjoint()) == 0.0);
  }
}

TEST_CASE("position/momentum coincide with their polynomial truncations") {
  for (const std::size_t d : {1, 2, 7, 20}) {
    const HermitianMatrix q = position_matrix(d);
    const HermitianMatrix q_poly =
        truncate_polynomial(LadderPolynomial::position().flagged_hermitian(), {.dim = d});
    CHECK(max_abs_diff(q.matrix(), q_poly.matrix()) == 0.0);
  }
}

TEST_CASE("number operator truncates to diag(0..d-1) exactly") {
  const HermitianMatrix n = truncate_polynomial(number_operator(), {.dim = 9});
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      CHECK(n(i, j) == (i == j ? Complex(double(i), 0.0) : Complex(0.0, 0.0)));
    }
  }
}

TEST_CASE("Q^2 truncations match the ladder identities") {
  const LadderPolynomial q2 =
      (LadderPolynomial::position() * LadderPolynomial::position()).flagged_hermitian();

  SUBCASE("d = 2 block is diag(1/2, 3/2)") {
    const HermitianMatrix b = truncate_polynomial(q2, {.dim = 2});
    CHECK(std::abs(b(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(b(1, 1) - 1.5) <= 1e-15);
    CHECK(std::abs(b(0, 1)) <= 1e-15);
  }

  SUBCASE("d = 4 has entry (0,2) = sqrt(2)/2") {
    const HermitianMatrix b = truncate_polynomial(q2, {.dim = 4});
    CHECK(std::abs(b(0, 2) - std::sqrt(2.0) / 2.0) <= 1e-15);
  }

  SUBCASE("action on |m> reproduces the three ladder coefficients") {
    const std::size_t d = 9;
    const HermitianMatrix b = truncate_polynomial(q2, {.dim = d});
    for (std::size_t m = 2; m + 3 <= d; ++m) {
      const linalg::StateVector col = linalg::matvec(b.matrix(), fock_state(m, d));
      const double md = static_cast<double>(m);
      CHECK(std::abs(col[m] - (md + 0.5)) <= 1e-13);
      CHECK(std::abs(col[m - 2] - 0.5 * std::sqrt(md * (md - 1.0))) <= 1e-13);
      CHECK(std::abs(col[m + 2] - 0.5 * std::sqrt((md + 1.0) * (md + 2.0))) <= 1e-13);
    }
  }
}

TEST_CASE("builtin catalog") {
  const auto& catalog = builtin_hamiltonians();
  for (const char* name :
       {"half_q2", "half_p2", "harmonic_oscillator", "squeezing", "q3", "p2"}) {
    CHECK(catalog.contains(name));
  }
  CHECK_THROWS_AS(builtin("does_not_exist"), std::invalid_argument);
  CHECK(builtin("q3").degree() == 3);
  CHECK(builtin("p2").degree() == 2);

  SUBCASE("harmonic oscillator truncates to diag(m + 1/2)") {
    const HermitianMatrix h = truncate_polynomial(builtin("harmonic_oscillator"), {.dim = 14});
    for (std::size_t i = 0; i < 14; ++i) {
      for (std::size_t j = 0; j < 14; ++j) {
        const Complex expected = (i == j) ? Complex(double(i) + 0.5, 0.0) : Complex(0.0, 0.0);
        CHECK(std::abs(h(i, j) - expected) <= 1e-15);
      }
    }
  }

  SUBCASE("squeezing truncated at d = 2 vanishes") {
    const HermitianMatrix h = truncate_polynomial(builtin("squeezing"), {.dim = 2});
    CHECK(max_abs_diff(h.matrix(), ComplexMatrix(2, 2)) == 0.0);
  }
}

TEST_CASE("padding exactness for every builtin") {
  for (const auto& [name, poly] : builtin_hamiltonians()) {
    for (std::size_t d = 1; d <= 40; d += 13) {
      const HermitianMatrix cut = truncate_polynomial(poly, {.dim = d});
      const HermitianMatrix padded =
          truncate_polynomial(poly, {.dim = d + static_cast<std::size_t>(poly.degree())});
      double worst = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          worst = std::max(worst, std::abs(cut(i, j) - padded(i, j)));
        }
      }
      CHECK(worst == 0.0);
    }
  }
}

TEST_CASE("chain evaluation equals dense padded products") {
  for (const auto& [name, poly] : builtin_hamiltonians()) {
    const std::size_t d = 11;
    const HermitianMatrix fast = truncate_polynomial(poly, {.dim = d});
    const ComplexMatrix reference = dense_padded_truncation(poly, d);
    CHECK(max_abs_diff(fast.matrix(), reference) <= 1e-13);
  }
}

TEST_CASE("fock states") {
  const linalg::StateVector v0 = fock_state(0, 3);
  CHECK(v0[0] == Complex(1.0, 0.0));
  CHECK(v0[1] == Complex(0.0, 0.0));
  const linalg::StateVector v2 = fock_state(2, 3);
  CHECK(v2[2] == Complex(1.0, 0.0));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex overlap = linalg::inner_product(fock_state(i, 3), fock_state(j, 3));
      CHECK(overlap == (i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0)));
    }
  }
  CHECK_THROWS_AS(fock_state(3, 3), std::invalid_argument);
}

TEST_CASE("truncation rejects unflagged polynomials") {
  const LadderPolynomial bare = LadderPolynomial::ladder(LadderOp::Lower);
  CHECK_THROWS_AS(truncate_polynomial(bare, {.dim = 4}), std::invalid_argument);
  CHECK_THROWS_AS(bare.flagged_hermitian(), std::invalid_argument);
  CHECK_THROWS_AS(truncate_polynomial(number_operator(), {.basis = "legendre", .dim = 4}),
                  std::invalid_argument);
}

TEST_CASE("polynomial parser accepts the documented syntax") {
  CHECK(parse_polynomial("0.5*Q^2 + 0.5*P^2") == builtin("harmonic_oscillator"));
  CHECK(parse_polynomial("  0.5 * ( Q^2 + P^2 )  ") == builtin("harmonic_oscillator"));
  CHECK(parse_polynomial("Q^3") == builtin("q3"));
  CHECK(parse_polynomial("Q*Q*Q") == builtin("q3"));
  CHECK(parse_polynomial("0.5*(Q*P+P*Q)") == builtin("squeezing"));
  CHECK(parse_polynomial("5e-1*Q^2") == builtin("half_q2"));
  CHECK(parse_polynomial("Q^2 - Q^2 + P^2") == builtin("p2"));
  CHECK(parse_polynomial("-Q^2 + 2*Q^2") == parse_polynomial("Q^2"));
  CHECK(parse_polynomial("Q").hermitian());
}

TEST_CASE("polynomial parser rejections") {
  CHECK_THROWS_AS(parse_polynomial("Q*P"), std::invalid_argument);   // not Hermitian
  CHECK_THROWS_AS(parse_polynomial(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("Q^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("Q P"), std::invalid_argument);   // missing '*'
  CHECK_THROWS_AS(parse_polynomial("0.5*(Q"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("R^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("Q^99"), std::invalid_argument);

  try {
    parse_polynomial("Q + ?");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("position") != std::string::npos);
  }
}

TEST_CASE("exact coefficient cancellation in the symbolic layer") {
  // QP + PQ expands to i(a†a† - aa): the identity contributions of QP and PQ
  // cancel exactly in rational arithmetic.
  const LadderPolynomial sq = builtin("squeezing");
  CHECK(sq.degree() == 2);
  CHECK(sq.terms().size() == 2);
  for (const auto& term : sq.terms()) CHECK(term.word.size() == 2);
}

TEST_CASE("degree of the empty polynomial is zero") {
  CHECK(LadderPolynomial::zero().degree() == 0);
  CHECK(LadderPolynomial::zero().empty());
}
