#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace trotterlab::linalg {

using Complex = std::complex<double>;

/// Thrown when a numerical kernel fails (e.g. the eigensolver does not
/// converge). Carries the residual that triggered the failure when one is
/// available, NaN otherwise.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  Complex* data() noexcept { return entries_.data(); }
  const Complex* data() const noexcept { return entries_.data(); }

  ComplexMatrix adjoint() const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a);

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Complex state vector.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<Complex> amplitudes);
  explicit StateVector(std::size_t dim) : amplitudes_(dim) {}

  std::size_t dim() const noexcept { return amplitudes_.size(); }

  Complex& operator[](std::size_t i) { return amplitudes_[i]; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  Complex* data() noexcept { return amplitudes_.data(); }
  const Complex* data() const noexcept { return amplitudes_.data(); }

  std::span<const Complex> amplitudes() const { return amplitudes_; }

  /// Returns this vector scaled to unit 2-norm. Throws std::invalid_argument
  /// on the zero vector.
  StateVector normalized() const;

  friend StateVector operator+(const StateVector& a, const StateVector& b);
  friend StateVector operator-(const StateVector& a, const StateVector& b);
  friend StateVector operator*(Complex s, StateVector a);

  friend bool operator==(const StateVector& a, const StateVector& b) = default;

 private:
  std::vector<Complex> amplitudes_;
};

/// Self-adjoint d x d matrix. Construction symmetrizes the input as
/// (M + M†)/2, so truncation round-off at the 1e-16 scale is absorbed
/// instead of rejected.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix from_diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return entries_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_(i, j);
  }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);

  /// H + s*I, used for the spectral-shift invariance checks.
  HermitianMatrix shifted(double s) const;

 private:
  struct AlreadyHermitianTag {};
  HermitianMatrix(ComplexMatrix m, AlreadyHermitianTag) : entries_(std::move(m)) {}

  ComplexMatrix entries_;
};

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of a
/// HermitianMatrix.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  StateVector eigenvector(std::size_t k) const;
};

/// Full Hermitian eigendecomposition. Deterministic for identical input.
/// Throws NumericError if the solver fails to converge.
SpectralDecomposition eig_hermitian(const HermitianMatrix& h);

/// Eigenvalues only (ascending); cheaper than eig_hermitian.
std::vector<double> eigvals_hermitian(const HermitianMatrix& h);

/// Applies e^{-itH} psi through the precomputed decomposition of H.
/// t = 0 returns psi unchanged.
StateVector evolve_state(const SpectralDecomposition& s, double t, const StateVector& psi);

/// Dense unitary e^{-itH} = V diag(e^{-it lambda}) V† as a matrix.
ComplexMatrix evolution_operator(const SpectralDecomposition& s, double t);

/// Largest singular value, computed as sqrt of the top eigenvalue of A†A.
double spectral_norm(const ComplexMatrix& a);

StateVector matvec(const ComplexMatrix& a, const StateVector& x);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
double vector_norm2(const StateVector& x);
Complex inner_product(const StateVector& a, const StateVector& b);

}  // namespace trotterlab::linalg
