#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "trotterlab/linalg.hpp"

namespace trotterlab::bounds {

/// Eigenpair claim (H1+H2) phi = h phi together with its verified residual.
struct EigenpairCertificate {
  linalg::StateVector phi;
  double eigenvalue = 0.0;
  double residual = 0.0;

  bool accepted() const noexcept;
};

/// Builds a certificate by measuring ||(H1+H2) phi - h phi||; phi is
/// normalized on the way in.
EigenpairCertificate make_certificate(const linalg::HermitianMatrix& h1,
                                      const linalg::HermitianMatrix& h2,
                                      const linalg::StateVector& phi, double h);

/// Eigenstate Trotter error bound
///   (2 t^2 / n) max( ||(H1 - h/2)^2 phi||, ||(H2 - h/2)^2 phi|| ).
/// Throws std::invalid_argument if the certificate is rejected.
double eigenstate_bound(const linalg::HermitianMatrix& h1,
                        const linalg::HermitianMatrix& h2,
                        const EigenpairCertificate& cert, double t, std::size_t n);

/// Search domain for the shift parameter alpha: a uniform grid, then
/// golden-section refinement on the best bracket. alpha = 1/2 is always
/// included in the sample set, so the optimized bound never exceeds
/// eigenstate_bound.
struct AlphaSearchConfig {
  double alpha_min = -2.0;
  double alpha_max = 3.0;
  std::size_t grid_points = 501;
  double refine_tol = 1e-6;
};

struct OptimizedBound {
  double bound;
  double alpha_star;
};

/// Generalized bound (2t^2/n) inf_alpha max( ||(H1 - alpha h)^2 phi||,
/// ||(H2 - (1-alpha) h)^2 phi|| ), minimized over the sampled alphas.
OptimizedBound eigenstate_bound_optimized(const linalg::HermitianMatrix& h1,
                                          const linalg::HermitianMatrix& h2,
                                          const EigenpairCertificate& cert, double t,
                                          std::size_t n,
                                          const AlphaSearchConfig& search = {});

/// Closed-form bound for the half_q2/half_p2 splitting on the Fock state |m>:
///   (t^2 / 2n) sqrt( (3/8) (m(m+1)(m^2+m+14) + 10) ).
/// Independent of the truncation dimension.
double ho_analytic_bound(std::size_t m, double t, std::size_t n);

/// sqrt( sum |amplitude|^2 basis_error^2 ); requires sum |amplitude|^2 <= 1 + 1e-12.
double superposition_bound(std::span<const std::pair<linalg::Complex, double>> coeffs);

/// Commutator-based uniform error bound (t^2 / 2n) ||[H1, H2]||.
double commutator_uniform_bound(const linalg::HermitianMatrix& h1,
                                const linalg::HermitianMatrix& h2, double t,
                                std::size_t n);

}  // namespace trotterlab::bounds
