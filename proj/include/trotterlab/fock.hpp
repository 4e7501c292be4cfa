#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trotterlab/linalg.hpp"

namespace trotterlab::fock {

/// Exact rational p/q with gcd-normalized representation. Arithmetic throws
/// std::invalid_argument on int64 overflow (checked through 128-bit
/// intermediates).
class Rational {
 public:
  Rational() = default;
  Rational(long long num, long long den = 1);

  long long num() const noexcept { return num_; }
  long long den() const noexcept { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const noexcept { return num_ == 0; }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator-(Rational a);
  friend bool operator==(Rational a, Rational b) = default;

 private:
  long long num_ = 0;
  long long den_ = 1;
};

/// Coefficient of the form (a + b*sqrt(2)) + i*(c + d*sqrt(2)) with rational
/// a, b, c, d. Closed under ring operations, which keeps the Q/P -> ladder
/// expansion exact until matrices are built.
class Sqrt2Coeff {
 public:
  Sqrt2Coeff() = default;
  Sqrt2Coeff(Rational re, Rational re_sqrt2, Rational im, Rational im_sqrt2)
      : re_(re), re_s2_(re_sqrt2), im_(im), im_s2_(im_sqrt2) {}

  static Sqrt2Coeff integer(long long v) { return {Rational(v), {}, {}, {}}; }
  static Sqrt2Coeff rational(Rational r) { return {r, {}, {}, {}}; }
  static Sqrt2Coeff imaginary_unit() { return {{}, {}, Rational(1), {}}; }
  /// 1/sqrt(2) = (1/2) sqrt(2).
  static Sqrt2Coeff inv_sqrt2() { return {{}, Rational(1, 2), {}, {}}; }

  bool is_zero() const noexcept {
    return re_.is_zero() && re_s2_.is_zero() && im_.is_zero() && im_s2_.is_zero();
  }

  Sqrt2Coeff conj() const { return {re_, re_s2_, -im_, -im_s2_}; }
  linalg::Complex to_complex() const;

  friend Sqrt2Coeff operator+(const Sqrt2Coeff& a, const Sqrt2Coeff& b);
  friend Sqrt2Coeff operator-(const Sqrt2Coeff& a);
  friend Sqrt2Coeff operator*(const Sqrt2Coeff& a, const Sqrt2Coeff& b);
  friend bool operator==(const Sqrt2Coeff& a, const Sqrt2Coeff& b) = default;

 private:
  Rational re_, re_s2_, im_, im_s2_;
};

/// Ladder alphabet: Lower = a (annihilation), Raise = a† (creation).
enum class LadderOp : std::uint8_t { Lower, Raise };

/// Operator-ordered symbol sequence; word[0] is the leftmost factor, so it
/// acts last on a ket.
using LadderWord = std::vector<LadderOp>;

struct LadderTerm {
  Sqrt2Coeff coeff;
  LadderWord word;

  friend bool operator==(const LadderTerm& a, const LadderTerm& b) = default;
};

/// Formal polynomial in a, a†. Canonicalized: like words merged, exact-zero
/// coefficients dropped, terms sorted by (length, word). A polynomial can be
/// flagged hermitian after a symbolic check that its term set equals its
/// conjugate-reversed term set.
class LadderPolynomial {
 public:
  LadderPolynomial() = default;

  static LadderPolynomial zero() { return {}; }
  static LadderPolynomial constant(Sqrt2Coeff c);
  static LadderPolynomial ladder(LadderOp op);
  static LadderPolynomial from_terms(std::vector<LadderTerm> terms);
  /// Q = (a + a†)/sqrt(2)
  static LadderPolynomial position();
  /// P = i(a† - a)/sqrt(2)
  static LadderPolynomial momentum();

  const std::vector<LadderTerm>& terms() const noexcept { return terms_; }
  int degree() const noexcept;
  bool empty() const noexcept { return terms_.empty(); }

  bool hermitian() const noexcept { return hermitian_; }
  /// Symbolic hermiticity test: every (coeff, word) must be matched by
  /// (conj(coeff), reversed word with a <-> a†).
  bool is_symbolically_hermitian() const;
  /// Returns a copy carrying the hermitian flag; throws std::invalid_argument
  /// if the symbolic test fails.
  LadderPolynomial flagged_hermitian() const;

  friend LadderPolynomial operator+(const LadderPolynomial& a, const LadderPolynomial& b);
  friend LadderPolynomial operator-(const LadderPolynomial& a, const LadderPolynomial& b);
  friend LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b);
  friend LadderPolynomial operator*(const Sqrt2Coeff& s, const LadderPolynomial& p);

  /// Term-for-term exact equality (canonical forms compared).
  friend bool operator==(const LadderPolynomial& a, const LadderPolynomial& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void canonicalize();

  std::vector<LadderTerm> terms_;
  bool hermitian_ = false;
};

/// Fock-basis truncation at dimension d: P_d = sum_{m<d} |m><m|.
struct TruncationScheme {
  std::string basis = "fock";
  std::size_t dim = 1;
};

/// Matrix of a at dimension d: entry (m-1, m) = sqrt(m).
linalg::ComplexMatrix annihilation_matrix(std::size_t d);
/// Matrix of a† at dimension d (adjoint of annihilation_matrix).
linalg::ComplexMatrix creation_matrix(std::size_t d);

linalg::HermitianMatrix position_matrix(std::size_t d);
linalg::HermitianMatrix momentum_matrix(std::size_t d);

/// Exact P_d p P_d for a hermitian-flagged polynomial. Each word is applied
/// to every basis column as a single ladder chain, which reproduces the
/// padded-space product exactly: a length-k word maps V_d into V_{d+k}, so
/// no truncation can bite inside the chain.
linalg::HermitianMatrix truncate_polynomial(const LadderPolynomial& p,
                                            const TruncationScheme& scheme);

/// Standard basis vector |m> in dimension d; requires m < d.
linalg::StateVector fock_state(std::size_t m, std::size_t d);

/// Named catalog: half_q2, half_p2, harmonic_oscillator, squeezing, q3, p2.
const std::map<std::string, LadderPolynomial>& builtin_hamiltonians();
/// Catalog lookup; throws std::invalid_argument for unknown names.
const LadderPolynomial& builtin(const std::string& name);

/// Parses expressions such as "0.5*Q^2 + 0.5*P^2" or "0.5*(Q*P+P*Q)".
/// Whitespace-insensitive; '^' for powers, '*' for products. The result is
/// hermitian-flagged; non-Hermitian expressions are rejected after building.
LadderPolynomial parse_polynomial(const std::string& text);

}  // namespace trotterlab::fock
