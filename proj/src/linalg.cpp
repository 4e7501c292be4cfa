#include "trotterlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>

#include <cblas.h>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

// BLAS is pinned to one thread: parallelism lives at the sweep level, and a
// fixed thread count keeps every kernel call bit-reproducible.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace trotterlab::linalg {

namespace {

void ensure_single_threaded_blas() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (openblas_set_num_threads != nullptr) openblas_set_num_threads(1);
  });
}

const Complex kOne{1.0, 0.0};
const Complex kZero{0.0, 0.0};

void require(bool cond, const char* message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

NumericError::NumericError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  require(rows >= 1 && cols >= 1, "ComplexMatrix dimensions must be positive");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = kOne;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix shape mismatch in +");
  ComplexMatrix out(a.rows_, a.cols_);
  for (std::size_t k = 0; k < out.entries_.size(); ++k)
    out.entries_[k] = a.entries_[k] + b.entries_[k];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix shape mismatch in -");
  ComplexMatrix out(a.rows_, a.cols_);
  for (std::size_t k = 0; k < out.entries_.size(); ++k)
    out.entries_[k] = a.entries_[k] - b.entries_[k];
  return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) {
  for (auto& e : a.entries_) e *= s;
  return a;
}

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  require(!amplitudes_.empty(), "StateVector must have positive dimension");
}

StateVector StateVector::normalized() const {
  const double norm = vector_norm2(*this);
  require(norm > 0.0, "cannot normalize the zero vector");
  StateVector out(*this);
  for (auto& a : out.amplitudes_) a /= norm;
  return out;
}

StateVector operator+(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), "vector dimension mismatch in +");
  StateVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

StateVector operator-(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), "vector dimension mismatch in -");
  StateVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

StateVector operator*(Complex s, StateVector a) {
  for (auto& e : a.amplitudes_) e *= s;
  return a;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : entries_(m.rows(), m.cols()) {
  require(m.rows() == m.cols(), "HermitianMatrix requires a square matrix");
  const std::size_t d = m.rows();
  for (std::size_t i = 0; i < d; ++i) {
    entries_(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      entries_(i, j) = v;
      entries_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::from_diagonal(std::span<const double> diag) {
  require(!diag.empty(), "diagonal must be non-empty");
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermitianMatrix(std::move(m), AlreadyHermitianTag{});
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "Hermitian dimension mismatch in +");
  // Entrywise sum of Hermitian matrices is exactly Hermitian (conjugation
  // distributes over IEEE addition), so no re-symmetrization pass.
  return HermitianMatrix(a.entries_ + b.entries_, HermitianMatrix::AlreadyHermitianTag{});
}

HermitianMatrix HermitianMatrix::shifted(double s) const {
  ComplexMatrix m = entries_;
  for (std::size_t i = 0; i < dim(); ++i) m(i, i) += s;
  return HermitianMatrix(std::move(m), AlreadyHermitianTag{});
}

StateVector SpectralDecomposition::eigenvector(std::size_t k) const {
  StateVector v(dim());
  for (std::size_t i = 0; i < dim(); ++i) v[i] = eigenvectors(i, k);
  return v;
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
  ensure_single_threaded_blas();
  const std::size_t d = h.dim();
  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors = h.matrix();  // overwritten with eigenvector columns
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(d),
      reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()),
      static_cast<lapack_int>(d), out.eigenvalues.data());
  if (info != 0) {
    throw NumericError("eig_hermitian: zheevd failed to converge (info=" +
                           std::to_string(info) + ") at dimension " + std::to_string(d),
                       std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::vector<double> eigvals_hermitian(const HermitianMatrix& h) {
  ensure_single_threaded_blas();
  const std::size_t d = h.dim();
  std::vector<double> w(d);
  ComplexMatrix scratch = h.matrix();
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_ROW_MAJOR, 'N', 'U', static_cast<lapack_int>(d),
      reinterpret_cast<lapack_complex_double*>(scratch.data()),
      static_cast<lapack_int>(d), w.data());
  if (info != 0) {
    throw NumericError("eigvals_hermitian: zheevd failed to converge (info=" +
                           std::to_string(info) + ") at dimension " + std::to_string(d),
                       std::numeric_limits<double>::quiet_NaN());
  }
  return w;
}

StateVector evolve_state(const SpectralDecomposition& s, double t, const StateVector& psi) {
  ensure_single_threaded_blas();
  const std::size_t d = s.dim();
  require(psi.dim() == d, "evolve_state: state dimension mismatch");
  if (t == 0.0) return psi;  // e^0 is the identity, exactly

  StateVector w(d);
  cblas_zgemv(CblasRowMajor, CblasConjTrans, static_cast<int>(d), static_cast<int>(d),
              &kOne, s.eigenvectors.data(), static_cast<int>(d), psi.data(), 1, &kZero,
              w.data(), 1);
  for (std::size_t k = 0; k < d; ++k) {
    w[k] *= std::exp(Complex(0.0, -t * s.eigenvalues[k]));
  }
  StateVector out(d);
  cblas_zgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(d), static_cast<int>(d),
              &kOne, s.eigenvectors.data(), static_cast<int>(d), w.data(), 1, &kZero,
              out.data(), 1);
  return out;
}

ComplexMatrix evolution_operator(const SpectralDecomposition& s, double t) {
  ensure_single_threaded_blas();
  const std::size_t d = s.dim();
  if (t == 0.0) return ComplexMatrix::identity(d);

  ComplexMatrix phased = s.eigenvectors;  // column k scaled by e^{-it lambda_k}
  for (std::size_t k = 0; k < d; ++k) {
    const Complex phase = std::exp(Complex(0.0, -t * s.eigenvalues[k]));
    for (std::size_t i = 0; i < d; ++i) phased(i, k) *= phase;
  }
  ComplexMatrix out(d, d);
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasConjTrans, static_cast<int>(d),
              static_cast<int>(d), static_cast<int>(d), &kOne, phased.data(),
              static_cast<int>(d), s.eigenvectors.data(), static_cast<int>(d), &kZero,
              out.data(), static_cast<int>(d));
  return out;
}

double spectral_norm(const ComplexMatrix& a) {
  ensure_single_threaded_blas();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix gram(n, n);
  cblas_zgemm(CblasRowMajor, CblasConjTrans, CblasNoTrans, static_cast<int>(n),
              static_cast<int>(n), static_cast<int>(m), &kOne, a.data(),
              static_cast<int>(n), a.data(), static_cast<int>(n), &kZero, gram.data(),
              static_cast<int>(n));
  const std::vector<double> evs = eigvals_hermitian(HermitianMatrix(gram));
  return std::sqrt(std::max(evs.back(), 0.0));
}

StateVector matvec(const ComplexMatrix& a, const StateVector& x) {
  ensure_single_threaded_blas();
  require(a.cols() == x.dim(), "matvec: dimension mismatch");
  StateVector y(a.rows());
  cblas_zgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(a.rows()),
              static_cast<int>(a.cols()), &kOne, a.data(), static_cast<int>(a.cols()),
              x.data(), 1, &kZero, y.data(), 1);
  return y;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ensure_single_threaded_blas();
  require(a.cols() == b.rows(), "matmul: dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
              static_cast<int>(b.cols()), static_cast<int>(a.cols()), &kOne, a.data(),
              static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), &kZero,
              c.data(), static_cast<int>(b.cols()));
  return c;
}

double vector_norm2(const StateVector& x) {
  ensure_single_threaded_blas();
  return cblas_dznrm2(static_cast<int>(x.dim()), x.data(), 1);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), "inner_product: dimension mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace trotterlab::linalg
