#include "trotterlab/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>
#include <utility>

namespace trotterlab::fock {

namespace {

using I128 = __int128;

I128 abs128(I128 v) { return v < 0 ? -v : v; }

I128 gcd128(I128 a, I128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const I128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::pair<long long, long long> reduce_128(I128 num, I128 den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num != 0) {
    const I128 g = gcd128(num, den);
    num /= g;
    den /= g;
  } else {
    den = 1;
  }
  constexpr I128 kMax = std::numeric_limits<long long>::max();
  if (num > kMax || num < -kMax || den > kMax) {
    throw std::invalid_argument("Rational: coefficient arithmetic overflow");
  }
  return {static_cast<long long>(num), static_cast<long long>(den)};
}

Rational make_rational_128(I128 num, I128 den) {
  const auto [n, d] = reduce_128(num, den);
  return Rational(n, d);
}

}  // namespace

Rational::Rational(long long num, long long den) {
  const auto [n, d] = reduce_128(num, den);
  num_ = n;
  den_ = d;
}

Rational operator+(Rational a, Rational b) {
  return make_rational_128(I128(a.num_) * b.den_ + I128(b.num_) * a.den_,
                           I128(a.den_) * b.den_);
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

Rational operator*(Rational a, Rational b) {
  return make_rational_128(I128(a.num_) * b.num_, I128(a.den_) * b.den_);
}

Rational operator-(Rational a) {
  a.num_ = -a.num_;
  return a;
}

linalg::Complex Sqrt2Coeff::to_complex() const {
  const double s2 = M_SQRT2;
  return {re_.to_double() + re_s2_.to_double() * s2,
          im_.to_double() + im_s2_.to_double() * s2};
}

Sqrt2Coeff operator+(const Sqrt2Coeff& a, const Sqrt2Coeff& b) {
  return {a.re_ + b.re_, a.re_s2_ + b.re_s2_, a.im_ + b.im_, a.im_s2_ + b.im_s2_};
}

Sqrt2Coeff operator-(const Sqrt2Coeff& a) {
  return {-a.re_, -a.re_s2_, -a.im_, -a.im_s2_};
}

Sqrt2Coeff operator*(const Sqrt2Coeff& a, const Sqrt2Coeff& b) {
  // (x1 + i y1)(x2 + i y2) over the ring {p + q sqrt(2)}.
  const auto ring_mul = [](Rational p1, Rational q1, Rational p2, Rational q2) {
    return std::pair<Rational, Rational>{p1 * p2 + Rational(2) * (q1 * q2),
                                         p1 * q2 + q1 * p2};
  };
  const auto [rr, rs] = ring_mul(a.re_, a.re_s2_, b.re_, b.re_s2_);
  const auto [ii, is] = ring_mul(a.im_, a.im_s2_, b.im_, b.im_s2_);
  const auto [ri, ris] = ring_mul(a.re_, a.re_s2_, b.im_, b.im_s2_);
  const auto [ir, irs] = ring_mul(a.im_, a.im_s2_, b.re_, b.re_s2_);
  return {rr - ii, rs - is, ri + ir, ris + irs};
}

namespace {

bool word_before(const LadderWord& a, const LadderWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

LadderWord conjugate_word(const LadderWord& w) {
  LadderWord out(w.rbegin(), w.rend());
  for (auto& op : out) op = (op == LadderOp::Lower) ? LadderOp::Raise : LadderOp::Lower;
  return out;
}

}  // namespace

void LadderPolynomial::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const LadderTerm& a, const LadderTerm& b) {
                     return word_before(a.word, b.word);
                   });
  std::vector<LadderTerm> merged;
  for (auto& term : terms_) {
    if (!merged.empty() && merged.back().word == term.word) {
      merged.back().coeff = merged.back().coeff + term.coeff;
    } else {
      merged.push_back(std::move(term));
    }
  }
  std::erase_if(merged, [](const LadderTerm& t) { return t.coeff.is_zero(); });
  terms_ = std::move(merged);
}

LadderPolynomial LadderPolynomial::constant(Sqrt2Coeff c) {
  LadderPolynomial p;
  p.terms_.push_back({c, {}});
  p.canonicalize();
  return p;
}

LadderPolynomial LadderPolynomial::ladder(LadderOp op) {
  LadderPolynomial p;
  p.terms_.push_back({Sqrt2Coeff::integer(1), {op}});
  return p;
}

LadderPolynomial LadderPolynomial::from_terms(std::vector<LadderTerm> terms) {
  LadderPolynomial p;
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

LadderPolynomial LadderPolynomial::position() {
  return Sqrt2Coeff::inv_sqrt2() *
         (ladder(LadderOp::Lower) + ladder(LadderOp::Raise));
}

LadderPolynomial LadderPolynomial::momentum() {
  return (Sqrt2Coeff::imaginary_unit() * Sqrt2Coeff::inv_sqrt2()) *
         (ladder(LadderOp::Raise) - ladder(LadderOp::Lower));
}

int LadderPolynomial::degree() const noexcept {
  std::size_t deg = 0;
  for (const auto& t : terms_) deg = std::max(deg, t.word.size());
  return static_cast<int>(deg);
}

bool LadderPolynomial::is_symbolically_hermitian() const {
  for (const auto& term : terms_) {
    const LadderWord cw = conjugate_word(term.word);
    const auto it = std::find_if(terms_.begin(), terms_.end(),
                                 [&](const LadderTerm& t) { return t.word == cw; });
    if (it == terms_.end() || !(it->coeff == term.coeff.conj())) return false;
  }
  return true;
}

LadderPolynomial LadderPolynomial::flagged_hermitian() const {
  if (!is_symbolically_hermitian()) {
    throw std::invalid_argument(
        "ladder polynomial is not Hermitian (term set does not equal its "
        "conjugate-reversed term set)");
  }
  LadderPolynomial p(*this);
  p.hermitian_ = true;
  return p;
}

LadderPolynomial operator+(const LadderPolynomial& a, const LadderPolynomial& b) {
  LadderPolynomial out;
  out.terms_ = a.terms_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  out.canonicalize();
  return out;
}

LadderPolynomial operator-(const LadderPolynomial& a, const LadderPolynomial& b) {
  return a + (Sqrt2Coeff::integer(-1) * b);
}

LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b) {
  LadderPolynomial out;
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      LadderWord w = ta.word;
      w.insert(w.end(), tb.word.begin(), tb.word.end());
      out.terms_.push_back({ta.coeff * tb.coeff, std::move(w)});
    }
  }
  out.canonicalize();
  return out;
}

LadderPolynomial operator*(const Sqrt2Coeff& s, const LadderPolynomial& p) {
  LadderPolynomial out;
  out.terms_.reserve(p.terms_.size());
  for (const auto& t : p.terms_) out.terms_.push_back({s * t.coeff, t.word});
  out.canonicalize();
  return out;
}

linalg::ComplexMatrix annihilation_matrix(std::size_t d) {
  if (d < 1) throw std::invalid_argument("annihilation_matrix: dimension must be >= 1");
  linalg::ComplexMatrix a(d, d);
  for (std::size_t m = 1; m < d; ++m) {
    a(m - 1, m) = std::sqrt(static_cast<double>(m));
  }
  return a;
}

linalg::ComplexMatrix creation_matrix(std::size_t d) {
  return annihilation_matrix(d).adjoint();
}

linalg::HermitianMatrix position_matrix(std::size_t d) {
  return truncate_polynomial(LadderPolynomial::position().flagged_hermitian(),
                             {.dim = d});
}

linalg::HermitianMatrix momentum_matrix(std::size_t d) {
  return truncate_polynomial(LadderPolynomial::momentum().flagged_hermitian(),
                             {.dim = d});
}

linalg::HermitianMatrix truncate_polynomial(const LadderPolynomial& p,
                                            const TruncationScheme& scheme) {
  if (scheme.basis != "fock") {
    throw std::invalid_argument("truncate_polynomial: unknown basis '" + scheme.basis +
                                "'");
  }
  if (scheme.dim < 1) {
    throw std::invalid_argument("truncate_polynomial: dimension must be >= 1");
  }
  if (!p.hermitian()) {
    throw std::invalid_argument(
        "truncate_polynomial: polynomial is not flagged hermitian");
  }
  const std::size_t d = scheme.dim;
  linalg::ComplexMatrix block(d, d);
  for (const auto& term : p.terms()) {
    const linalg::Complex coeff = term.coeff.to_complex();
    for (std::size_t m = 0; m < d; ++m) {
      // Follow the single ladder chain |m> -> |level>; the product of the
      // sqrt factors is kept as one exact integer radicand so that e.g.
      // a†a stays exactly diagonal.
      long long level = static_cast<long long>(m);
      double radicand = 1.0;
      bool dead = false;
      for (auto it = term.word.rbegin(); it != term.word.rend(); ++it) {
        if (*it == LadderOp::Lower) {
          if (level == 0) {
            dead = true;
            break;
          }
          radicand *= static_cast<double>(level);
          --level;
        } else {
          radicand *= static_cast<double>(level + 1);
          ++level;
        }
      }
      if (dead || level >= static_cast<long long>(d)) continue;
      block(static_cast<std::size_t>(level), m) += coeff * std::sqrt(radicand);
    }
  }

  // Backstop for the symbolic flag: the built block must be Hermitian to
  // round-off before the (M + M†)/2 cleanup.
  double max_abs = 0.0;
  double max_asym = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      max_abs = std::max(max_abs, std::abs(block(i, j)));
      max_asym = std::max(max_asym, std::abs(block(i, j) - std::conj(block(j, i))));
    }
  }
  if (max_asym > 1e-12 * std::max(1.0, max_abs)) {
    throw std::invalid_argument(
        "truncate_polynomial: built matrix is not Hermitian (asymmetry " +
        std::to_string(max_asym) + ")");
  }
  return linalg::HermitianMatrix(block);
}

linalg::StateVector fock_state(std::size_t m, std::size_t d) {
  if (d < 1) throw std::invalid_argument("fock_state: dimension must be >= 1");
  if (m >= d) {
    throw std::invalid_argument("fock_state: occupation " + std::to_string(m) +
                                " does not fit in dimension " + std::to_string(d));
  }
  linalg::StateVector v(d);
  v[m] = 1.0;
  return v;
}

const std::map<std::string, LadderPolynomial>& builtin_hamiltonians() {
  static const std::map<std::string, LadderPolynomial> catalog = [] {
    const Sqrt2Coeff half = Sqrt2Coeff::rational(Rational(1, 2));
    const LadderPolynomial q = LadderPolynomial::position();
    const LadderPolynomial p = LadderPolynomial::momentum();
    const LadderPolynomial q2 = q * q;
    const LadderPolynomial p2 = p * p;
    std::map<std::string, LadderPolynomial> out;
    out.emplace("half_q2", (half * q2).flagged_hermitian());
    out.emplace("half_p2", (half * p2).flagged_hermitian());
    out.emplace("harmonic_oscillator", (half * (q2 + p2)).flagged_hermitian());
    out.emplace("squeezing", (half * (q * p + p * q)).flagged_hermitian());
    out.emplace("q3", (q2 * q).flagged_hermitian());
    out.emplace("p2", p2.flagged_hermitian());
    return out;
  }();
  return catalog;
}

const LadderPolynomial& builtin(const std::string& name) {
  const auto& catalog = builtin_hamiltonians();
  const auto it = catalog.find(name);
  if (it == catalog.end()) {
    std::string names;
    for (const auto& [key, value] : catalog) {
      if (!names.empty()) names += ", ";
      names += key;
    }
    throw std::invalid_argument("unknown builtin Hamiltonian '" + name +
                                "' (available: " + names + ")");
  }
  return it->second;
}

namespace {

// Recursive-descent parser for the polynomial text syntax:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := primary ['^' uint]
//   primary:= number | 'Q' | 'P' | '(' expr ')'
class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  LadderPolynomial parse() {
    LadderPolynomial p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument("polynomial syntax error at position " +
                                std::to_string(pos_) + ": " + message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  LadderPolynomial parse_expr() {
    LadderPolynomial acc = LadderPolynomial::zero();
    bool first = true;
    for (;;) {
      skip_ws();
      bool negate = false;
      if (consume('-')) {
        negate = true;
      } else if (!consume('+') && !first) {
        break;
      } else if (first && peek() == '\0') {
        fail("empty expression");
      }
      LadderPolynomial term = parse_term();
      if (negate) term = Sqrt2Coeff::integer(-1) * term;
      acc = acc + term;
      first = false;
      const char c = peek();
      if (c != '+' && c != '-') break;
    }
    return acc;
  }

  LadderPolynomial parse_term() {
    LadderPolynomial acc = parse_factor();
    while (consume('*')) acc = acc * parse_factor();
    return acc;
  }

  LadderPolynomial parse_factor() {
    LadderPolynomial base = parse_primary();
    if (consume('^')) {
      const unsigned long exponent = parse_uint();
      if (exponent > 16) fail("exponent too large (max 16)");
      LadderPolynomial acc = LadderPolynomial::constant(Sqrt2Coeff::integer(1));
      for (unsigned long k = 0; k < exponent; ++k) acc = acc * base;
      return acc;
    }
    return base;
  }

  LadderPolynomial parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a number, Q, P or '('");
    const char c = text_[pos_];
    if (c == 'Q') {
      ++pos_;
      return LadderPolynomial::position();
    }
    if (c == 'P') {
      ++pos_;
      return LadderPolynomial::momentum();
    }
    if (c == '(') {
      ++pos_;
      LadderPolynomial inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return LadderPolynomial::constant(Sqrt2Coeff::rational(parse_number()));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  unsigned long parse_uint() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected an integer exponent");
    }
    unsigned long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
      if (v > 1000000) fail("integer too large");
      ++pos_;
    }
    return v;
  }

  // Decimal literal with optional fraction and exponent, converted exactly
  // to a rational.
  Rational parse_number() {
    long long mantissa = 0;
    int digits = 0;
    int frac_digits = 0;
    bool seen_digit = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      mantissa = mantissa * 10 + (text_[pos_] - '0');
      if (++digits > 17) fail("number has too many digits");
      seen_digit = true;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        mantissa = mantissa * 10 + (text_[pos_] - '0');
        if (++digits > 17) fail("number has too many digits");
        ++frac_digits;
        seen_digit = true;
        ++pos_;
      }
    }
    if (!seen_digit) fail("malformed number");
    long long exponent = -frac_digits;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        neg = (text_[pos_] == '-');
        ++pos_;
      }
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("malformed exponent");
      }
      long long e = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + (text_[pos_] - '0');
        if (e > 18) fail("exponent out of range");
        ++pos_;
      }
      exponent += neg ? -e : e;
    }
    if (exponent > 18 || exponent < -18) fail("exponent out of range");
    long long num = mantissa;
    long long den = 1;
    for (long long k = 0; k < exponent; ++k) {
      if (num > std::numeric_limits<long long>::max() / 10) fail("number out of range");
      num *= 10;
    }
    for (long long k = 0; k < -exponent; ++k) den *= 10;
    return Rational(num, den);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LadderPolynomial parse_polynomial(const std::string& text) {
  LadderPolynomial p = PolynomialParser(text).parse();
  if (!p.is_symbolically_hermitian()) {
    throw std::invalid_argument("expression is not Hermitian: '" + text + "'");
  }
  return p.flagged_hermitian();
}

}  // namespace trotterlab::fock
