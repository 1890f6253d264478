#pragma once

#include <array>
#include <string>

#include "nsc/determinant.hpp"
#include "nsc/spectrum.hpp"

namespace nsc {

/// One eigenvalue of the adjoint generator together with its closed-form
/// eigenfunction pair (xi, eta) as exponential sums:
///   eta(x) = sum_i C_i e^{m_i x},  xi(x) = sum_i (1 + m_i^2/mu) C_i e^{m_i x}
/// normalized to unit L2 x L2 norm with the phase of xi(1) in (-pi/2, pi/2].
struct EigenPair {
  cplx lambda;
  cplx mu;  // -lambda
  Branch branch = Branch::low;
  int k = 0;  // branch index; 0 for low entries
  std::array<cplx, 3> roots;
  std::array<cplx, 3> eta_coeffs;
  std::array<cplx, 3> xi_multipliers;
  cplx normalization;  // scale applied to the raw closed form

  ExpSum eta() const;
  ExpSum xi() const;

  std::string to_json() const;
  static EigenPair from_json(const std::string& text);
};

struct EigenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Assemble the closed-form eigenfunction at a refined root. Throws when the
/// cubic roots are near-degenerate or the boundary defects reveal an
/// insufficiently accurate root.
EigenPair build_eigenfunction(cplx mu_root, Branch branch, int k = 0,
                              double boundary_tol = 1e-8);

struct ResidualReport {
  double ode_defect;       // max of both eigen-equation residuals, normalized
  double boundary_defect;  // |xi(0)-xi(1)| + |eta(0)| + |eta(1)|, normalized
};

/// Exact-derivative residuals sampled at Chebyshev points.
ResidualReport eigen_residual(const EigenPair& pair, int n_samples = 64);

/// Boundary observation B* Phi = xi(1), evaluated exactly.
cplx observation(const EigenPair& pair);

/// |Re(lambda) + ||eta'||^2 / (||xi||^2 + ||eta||^2)|, exact integrals.
double rayleigh_defect(const EigenPair& pair);

/// sigma_2/sigma_3 of the 3x3 boundary-condition matrix at mu: large values
/// certify a one-dimensional coefficient solution (geometric simplicity).
double boundary_matrix_rank_gap(cplx mu);

/// Rescale factor s such that pair/s matches the comparison-family scaling
/// (dominant coefficient matched to the closed form used for quadratic
/// closeness and the observation bands).
cplx comparison_scale(const EigenPair& pair);

ExpSum comparison_scaled_xi(const EigenPair& pair);
ExpSum comparison_scaled_eta(const EigenPair& pair);

}  // namespace nsc
