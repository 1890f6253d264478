#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "nsc/expsum.hpp"
#include "nsc/spaces.hpp"

namespace nsc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment: horizon, data regularity, mode counts, grids, tolerances,
/// initial data and output location.
struct ExperimentConfig {
  double T = 1.5;
  double s = 1.0;
  int K_para = 20;
  int K_hyp = 20;
  int N = 1024;
  int M = 4096;
  double newton_tol = 1e-12;
  double svd_tol = 1e-12;
  double residual_tol = 1e-8;
  int scheme_order = 2;
  int residual_quad = 1 << 17;
  // initial data: spectral-coefficient modes for rho0; u0 as a named closed form
  // ("sinpi", "sinpi-mean0", "zero") or modes
  std::map<int, cplx> rho0_modes = {{1, cplx(0.0, 0.5)}, {-1, cplx(0.0, -0.5)}};
  std::string u0_name = "sinpi";
  std::map<int, cplx> u0_modes;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool override_time_check = false;
  // low-frequency search box in the lambda plane
  double low_re_lo = -60.0, low_re_hi = -1e-3;
  double low_im_lo = -25.0, low_im_hi = 25.0;

  void validate() const;
  FourierVector rho0() const;
  ExpSum u0() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  /// FNV-1a of the canonical serialization; embedded in artifacts.
  std::string hash() const;
};

}  // namespace nsc
