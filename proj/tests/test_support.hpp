#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "trotterlab/linalg.hpp"

namespace testsupport {

using trotterlab::linalg::Complex;
using trotterlab::linalg::ComplexMatrix;
using trotterlab::linalg::HermitianMatrix;
using trotterlab::linalg::StateVector;

/// Seeded Box-Muller normal source (independent of std distributions so the
/// draws are pinned by the seed alone).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t index(std::size_t bound) { return engine_() % bound; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline HermitianMatrix random_hermitian(Rng& rng, std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  return HermitianMatrix(m);
}

inline StateVector random_state(Rng& rng, std::size_t dim) {
  StateVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return v.normalized();
}

inline ComplexMatrix matrix_from(std::size_t rows, std::size_t cols,
                                 std::initializer_list<Complex> entries) {
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (const Complex& e : entries) {
    m(k / cols, k % cols) = e;
    ++k;
  }
  return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
  }
  return worst;
}

/// Closed-form e^{-itH} for a 2x2 Hermitian H (Pauli decomposition); the
/// independent oracle for the evolution kernels.
inline ComplexMatrix exp_2x2(const HermitianMatrix& h, double t) {
  const double mu = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double vx = h(0, 1).real();
  const double vy = -h(0, 1).imag();
  const double vz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double r = std::sqrt(vx * vx + vy * vy + vz * vz);
  const Complex phase = std::exp(Complex(0.0, -mu * t));
  ComplexMatrix out(2, 2);
  if (r == 0.0) {
    out(0, 0) = phase;
    out(1, 1) = phase;
    return out;
  }
  const double c = std::cos(r * t);
  const double s = std::sin(r * t);
  const Complex minus_is = Complex(0.0, -s / r);
  out(0, 0) = phase * (c + minus_is * vz);
  out(0, 1) = phase * (minus_is * Complex(vx, -vy));
  out(1, 0) = phase * (minus_is * Complex(vx, vy));
  out(1, 1) = phase * (c - minus_is * vz);
  return out;
}

inline HermitianMatrix pauli_x() {
  return HermitianMatrix(matrix_from(2, 2, {0.0, 1.0, 1.0, 0.0}));
}

inline HermitianMatrix pauli_z() {
  return HermitianMatrix(matrix_from(2, 2, {1.0, 0.0, 0.0, -1.0}));
}

}  // namespace testsupport
