#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nsc/eigenfunctions.hpp"
#include "nsc/spaces.hpp"

namespace nsc {

struct MomentRow {
  cplx lambda;
  Branch branch;
  int k;
  cplx target;
};

/// Moment equations -int_0^T conj(e^{lambda (T-t)}) p(t) dt = target,
/// one row per constrained eigenvalue, plus metadata.
struct MomentSystem {
  std::vector<MomentRow> rows;
  double T = 1.5;
  double s = 1.0;              // Sobolev exponent of the density data
  bool mean_zero_data = true;  // enables the compatibility row in the solve
  bool time_check_warning = false;  // set when T <= 1

  void validate(double conj_tol = 1e-8) const;
  std::string to_json() const;
};

struct MomentsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sampled real boundary control on [0,T] with its exponential-sum
/// representation p(t) = sum_j a_j e^{rate_j (T-t)}.
struct ControlSignal {
  double T = 0.0;
  std::vector<double> times;
  std::vector<double> samples;
  std::vector<cplx> modal_rates;
  std::vector<cplx> modal_coeffs;
  // diagnostics
  double residual_norm = 0.0;     // algebraic, on the moment rows
  double gram_condition = 0.0;
  double imag_defect = 0.0;       // max |Im p| / max |p|
  double mean_defect = 0.0;       // |int p| (closed form)
  double l2_norm = 0.0;

  bool has_modal() const { return !modal_rates.empty(); }
  double eval_modal(double t) const;
  std::string to_csv() const;
  std::string to_json() const;
  static ControlSignal from_json(const std::string& text);
};

/// Closed-form Gram of exponentials: G_jk = int_0^T conj(e^{l_j (T-t)})
/// e^{l_k (T-t)} dt = (e^{(conj l_j + l_k) T} - 1)/(conj l_j + l_k), with the
/// removable singularity evaluated as T. Optionally column-normalized;
/// norms returned through `col_norms`.
Eigen::MatrixXcd exponential_gram(const std::vector<cplx>& exponents, double T,
                                  std::vector<double>* col_norms = nullptr);

/// Moment targets for initial data (rho0, u0):
/// target = conj(e^{lambda T}) <(rho0,u0), Phi> / conj(xi(1)) where the
/// pairing conjugates the eigenfunction slot (the scaling-invariant choice).
MomentSystem moment_targets(const FourierVector& rho0, const GridFunction& u0,
                            const std::vector<EigenPair>& pairs, double T,
                            double s = 1.0, double obs_floor = 1e-12);

/// Same with closed-form velocity data.
MomentSystem moment_targets(const FourierVector& rho0, const ExpSum& u0,
                            const std::vector<EigenPair>& pairs, double T,
                            double s = 1.0, double obs_floor = 1e-12);

struct SolveOptions {
  double svd_cutoff = 1e-12;            // relative truncation threshold
  std::optional<double> ridge;          // ridge regularization instead of TSVD
  bool endpoint_vanishing = true;       // p(0) = p(T) = 0 rows + slack span
  std::vector<double> slack_rates = {-2.0, -3.0};
  int sample_count = 4096;
  double residual_tol = 1e-8;
  bool tolerate_residual = false;       // report instead of throw (T <= 1)
};

/// Least-norm solve of the moment system over the exponential span
/// (augmented with the mean-zero compatibility row and, by default, slack
/// exponents plus vanishing-endpoint rows that suppress excitation of the
/// unconstrained high modes). Truncated-SVD regularized, with iterative
/// refinement; synthesizes real samples on a uniform grid.
ControlSignal solve_moments(const MomentSystem& ms,
                            const SolveOptions& opts = {});

/// Independent trapezoid-quadrature residuals r_k = target_k +
/// int conj(e^{lambda_k (T-t)}) p dt. Uses the modal representation on a
/// fine grid when available, otherwise the stored samples (>= 1024 nodes).
std::vector<cplx> moment_residuals(const ControlSignal& p,
                                   const MomentSystem& ms,
                                   int quad_n = 1 << 17);

/// h(t) = rho(t,1) + p(t) on a shared time grid.
ControlSignal lift_to_dirichlet(const ControlSignal& p,
                                const std::vector<double>& trace);

}  // namespace nsc
