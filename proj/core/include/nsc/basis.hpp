#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nsc/eigenfunctions.hpp"
#include "nsc/spaces.hpp"

namespace nsc {

enum class ComparisonKind { psi, psi_tilde };

/// The closed-form comparison pair: psi_k = (0, 2i e^{-(1+x)/2} sin(k pi (1-x)))
/// for k >= 1, psi_tilde_k = (2i sgn(k) e^{-1/2 - i sgn(k) sqrt(|k pi|)}
/// e^{-2 i k pi x}, 0) for integer k.
struct ComparisonPair {
  ExpSum xi;
  ExpSum eta;
};

ComparisonPair comparison_pair(int k, ComparisonKind kind);

/// Sampled evaluation on a uniform grid (State layout: rho <- xi, u <- eta).
State comparison_family(int k, ComparisonKind kind, int grid_n);

struct ClosenessRow {
  Branch branch;
  int k;
  double diff_sq;  // || Phi_k - Psi_k ||^2 in L2 x L2
  double cumsum;
};

struct ClosenessReport {
  std::vector<ClosenessRow> rows;
  double slope_parabolic = 0.0;   // log-log slope of diff_sq over upper ks
  double slope_hyperbolic = 0.0;
  std::string to_csv() const;
};

/// Per-k squared distances between the comparison-scaled eigenpairs and their
/// comparison partners, by trapezoid quadrature with at least 2048 cells.
/// Hyperbolic rows combine +k and -k.
ClosenessReport quadratic_closeness(const std::vector<EigenPair>& pairs,
                                    int quad_n = 4096);

/// Hermitian L2 x L2 Gram of sampled pairs, trapezoid quadrature with
/// symmetrization; the symmetrization defect is returned.
Eigen::MatrixXcd gram_matrix(const std::vector<State>& family,
                             double* sym_defect = nullptr);

/// Exact Gram of eigenpairs (exponential-sum integrals).
Eigen::MatrixXcd gram_matrix_exact(const std::vector<EigenPair>& pairs);

struct GramReport {
  int size = 0;
  double min_eig = 0.0, max_eig = 0.0;
  double condition = 0.0;
  std::vector<std::array<double, 3>> truncation_history;  // (K, min, max)
  std::string to_json() const;
};

GramReport riesz_bounds(const Eigen::MatrixXcd& gram);

}  // namespace nsc
