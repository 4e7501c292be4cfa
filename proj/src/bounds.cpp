#include "trotterlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace trotterlab::bounds {

namespace {

using linalg::Complex;
using linalg::StateVector;

// Precomputed vectors for ||(H - c)^2 phi|| = ||H^2 phi - 2c H phi + c^2 phi||,
// so each shift c costs O(d).
struct ShiftedSquareNorm {
  StateVector phi;
  StateVector h_phi;
  StateVector h2_phi;

  ShiftedSquareNorm(const linalg::HermitianMatrix& h, const StateVector& phi_in)
      : phi(phi_in),
        h_phi(linalg::matvec(h.matrix(), phi_in)),
        h2_phi(linalg::matvec(h.matrix(), h_phi)) {}

  double operator()(double c) const {
    double acc = 0.0;
    const double c2 = c * c;
    for (std::size_t i = 0; i < phi.dim(); ++i) {
      const Complex v = h2_phi[i] - 2.0 * c * h_phi[i] + c2 * phi[i];
      acc += std::norm(v);
    }
    return std::sqrt(acc);
  }
};

void check_inputs(const linalg::HermitianMatrix& h1, const linalg::HermitianMatrix& h2,
                  const EigenpairCertificate& cert, std::size_t n) {
  if (h1.dim() != h2.dim() || cert.phi.dim() != h1.dim()) {
    throw std::invalid_argument("eigenstate_bound: dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("eigenstate_bound: need n >= 1");
  if (!cert.accepted()) {
    throw std::invalid_argument(
        "eigenstate_bound: eigenpair certificate rejected (residual " +
        std::to_string(cert.residual) + ")");
  }
}

}  // namespace

bool EigenpairCertificate::accepted() const noexcept {
  return residual <= 1e-8 * std::max(1.0, std::abs(eigenvalue));
}

EigenpairCertificate make_certificate(const linalg::HermitianMatrix& h1,
                                      const linalg::HermitianMatrix& h2,
                                      const StateVector& phi, double h) {
  if (h1.dim() != h2.dim() || phi.dim() != h1.dim()) {
    throw std::invalid_argument("make_certificate: dimension mismatch");
  }
  const StateVector unit = phi.normalized();
  const StateVector applied =
      linalg::matvec(h1.matrix(), unit) + linalg::matvec(h2.matrix(), unit);
  const StateVector residual_vec = applied - Complex(h, 0.0) * unit;
  return {unit, h, linalg::vector_norm2(residual_vec)};
}

double eigenstate_bound(const linalg::HermitianMatrix& h1,
                        const linalg::HermitianMatrix& h2,
                        const EigenpairCertificate& cert, double t, std::size_t n) {
  check_inputs(h1, h2, cert, n);
  const ShiftedSquareNorm term1(h1, cert.phi);
  const ShiftedSquareNorm term2(h2, cert.phi);
  const double half_h = 0.5 * cert.eigenvalue;
  const double scale = 2.0 * t * t / static_cast<double>(n);
  return scale * std::max(term1(half_h), term2(half_h));
}

OptimizedBound eigenstate_bound_optimized(const linalg::HermitianMatrix& h1,
                                          const linalg::HermitianMatrix& h2,
                                          const EigenpairCertificate& cert, double t,
                                          std::size_t n, const AlphaSearchConfig& search) {
  check_inputs(h1, h2, cert, n);
  if (search.grid_points < 1 || search.alpha_min > search.alpha_max ||
      search.refine_tol <= 0.0) {
    throw std::invalid_argument("eigenstate_bound_optimized: bad search config");
  }
  const ShiftedSquareNorm term1(h1, cert.phi);
  const ShiftedSquareNorm term2(h2, cert.phi);
  const double h = cert.eigenvalue;
  const auto objective = [&](double alpha) {
    return std::max(term1(alpha * h), term2((1.0 - alpha) * h));
  };

  double best_alpha = search.alpha_min;
  double best_value = objective(best_alpha);
  const double span = search.alpha_max - search.alpha_min;
  const std::size_t points = search.grid_points;
  for (std::size_t k = 1; k < points; ++k) {
    const double alpha =
        search.alpha_min + span * static_cast<double>(k) / static_cast<double>(points - 1);
    const double value = objective(alpha);
    if (value < best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  }

  // Golden-section refinement on the bracket around the best grid point.
  if (points > 1) {
    const double step = span / static_cast<double>(points - 1);
    double lo = std::max(search.alpha_min, best_alpha - step);
    double hi = std::min(search.alpha_max, best_alpha + step);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > search.refine_tol) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = objective(x2);
      }
      const double xbest = (f1 <= f2) ? x1 : x2;
      const double fbest = std::min(f1, f2);
      if (fbest < best_value) {
        best_value = fbest;
        best_alpha = xbest;
      }
    }
    const double xbest = (f1 <= f2) ? x1 : x2;
    const double fbest = std::min(f1, f2);
    if (fbest < best_value) {
      best_value = fbest;
      best_alpha = xbest;
    }
  }

  // alpha = 1/2 is always part of the sample set, which pins the optimized
  // bound at or below eigenstate_bound.
  const double value_half = objective(0.5);
  if (value_half < best_value) {
    best_value = value_half;
    best_alpha = 0.5;
  }

  const double scale = 2.0 * t * t / static_cast<double>(n);
  return {scale * best_value, best_alpha};
}

double ho_analytic_bound(std::size_t m, double t, std::size_t n) {
  if (n < 1) throw std::invalid_argument("ho_analytic_bound: need n >= 1");
  const double md = static_cast<double>(m);
  const double radicand = 3.0 / 8.0 * (md * (md + 1.0) * (md * md + md + 14.0) + 10.0);
  return t * t / (2.0 * static_cast<double>(n)) * std::sqrt(radicand);
}

double superposition_bound(std::span<const std::pair<Complex, double>> coeffs) {
  double total_weight = 0.0;
  for (const auto& [amplitude, basis_error] : coeffs) total_weight += std::norm(amplitude);
  if (total_weight > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "superposition_bound: squared amplitudes must sum to at most 1");
  }
  double acc = 0.0;
  for (const auto& [amplitude, basis_error] : coeffs) {
    acc += std::norm(amplitude) * basis_error * basis_error;
  }
  return std::sqrt(acc);
}

double commutator_uniform_bound(const linalg::HermitianMatrix& h1,
                                const linalg::HermitianMatrix& h2, double t,
                                std::size_t n) {
  if (h1.dim() != h2.dim()) {
    throw std::invalid_argument("commutator_uniform_bound: dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("commutator_uniform_bound: need n >= 1");
  const linalg::ComplexMatrix commutator =
      linalg::matmul(h1.matrix(), h2.matrix()) - linalg::matmul(h2.matrix(), h1.matrix());
  return t * t / (2.0 * static_cast<double>(n)) * linalg::spectral_norm(commutator);
}

}  // namespace trotterlab::bounds
