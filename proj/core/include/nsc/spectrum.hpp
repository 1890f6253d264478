#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsc/determinant.hpp"

namespace nsc {

enum class Branch { parabolic, hyperbolic, low };

const char* branch_name(Branch b);

struct SpectrumEntry {
  cplx lambda;            // eigenvalue of the adjoint generator, lambda = -mu
  double residual;        // |Delta/mu^2| / scale at the root
  int iterations;
  bool window_ok;         // converged inside its counting window
};

/// The three eigenvalue families. Parabolic entries are indexed by k >= 1,
/// hyperbolic by k != 0 (conjugate pairs at +-k), low-frequency entries are
/// whatever the box search finds beyond the accepted branch windows.
struct Spectrum {
  std::map<int, SpectrumEntry> parabolic;
  std::map<int, SpectrumEntry> hyperbolic;
  std::vector<SpectrumEntry> low;
  int k_min_parabolic = 0, k_min_hyperbolic = 0;
  double parabolic_shift_bound = 0.0;   // sup_k |Re lambda_k + k^2 pi^2|
  double hyperbolic_defect_bound = 0.0; // sup_k |k| |lambda_k + 1 + 2 i k pi|

  std::vector<cplx> all_lambdas() const;
  void validate() const;  // conjugate closure, distinctness, Re < 0, bounds
  std::string to_csv() const;
  std::string to_json() const;
  static Spectrum from_json(const std::string& text);
};

struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpectrumRequest {
  int k_para_lo = 1, k_para_hi = 20;
  int k_hyp_lo = 1, k_hyp_hi = 20;     // mirrored to negative k
  Box low_box{-60.0, -1e-3, -25.0, 25.0};  // in the lambda plane
  double newton_tol = 1e-12;
  bool check_window_counts = true;     // one zero per accepted window
};

/// Newton refinement from the asymptotic seeds mu = (k pi)^2 and
/// mu = 1 + 2 i k pi, plus an argument-principle sweep of the low box with
/// subdivision until every cell holds at most one zero. Cross-checks counts
/// against the refined roots and validates all Spectrum invariants.
Spectrum compute_spectrum(const SpectrumRequest& req);

struct AsymptoticFit {
  std::vector<int> ks;                       // parabolic k values
  std::vector<double> c_k, d_k;              // sqrt(mu_k) - k pi
  std::vector<int> ks_hyp;                   // hyperbolic k > 0
  std::vector<double> alpha1_k, alpha2_k;    // mu = 1+a1 + i(2kpi + a2)
  std::vector<double> hyp_defect;            // |lambda + 1 + 2 i k pi|
  double slope_c = 0.0, slope_d = 0.0;
  double slope_alpha1 = 0.0, slope_alpha2 = 0.0, slope_hyp_defect = 0.0;
  double max_abs_c = 0.0, max_abs_d = 0.0;
  double max_abs_alpha1 = 0.0, max_abs_alpha2 = 0.0;
};

/// Correction sequences and their log-log decay slopes, fitted over the
/// upper half of the available k range (sequences below 1e-10 in sup norm
/// get slope NaN; their decay claim is vacuous).
AsymptoticFit asymptotic_fit(const Spectrum& spec);

/// least-squares slope of log|y| against log x (helper, exposed for tests)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nsc
