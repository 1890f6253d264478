#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsc/expsum.hpp"

namespace nsc {

/// Mean-zero periodic function represented by spectral coefficients
/// c_m = int_0^1 e^{2 pi i m x} f(x) dx (no conjugate in the weight; the
/// induced reconstruction is f = sum_m c_m e^{-2 pi i m x}).
struct FourierVector {
  std::map<int, cplx> coeffs;
  double interval_length = 1.0;
  double sobolev_exponent = 0.0;
  bool mean_zero = false;

  int truncation() const;
  void enforce_mean_zero(double rel_tol = 1e-12);
  std::string to_json() const;
  static FourierVector from_json(const std::string& text);
};

/// Complex samples on the uniform grid x_i = i/N, i = 0..N.
struct GridFunction {
  int n = 0;  // number of cells; N+1 nodes
  std::vector<cplx> values;

  static GridFunction zeros(int n) {
    GridFunction g;
    g.n = n;
    g.values.assign(n + 1, cplx(0.0));
    return g;
  }
  double h() const { return 1.0 / n; }
  double node(int i) const { return static_cast<double>(i) / n; }
  static GridFunction sample(const ExpSum& f, int n);
};

struct State {
  GridFunction rho;
  GridFunction u;
};

struct SpacesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Spectral coefficients of f for |m| <= cutoff by trapezoid quadrature on
/// the periodic extension. Requires at least 4*cutoff+1 nodes.
FourierVector fourier_coeffs(const GridFunction& f, int cutoff);

/// ( sum_m w_m^s |c_m|^2 )^{1/2} with w_m = 1 + 4 pi^2 m^2, or 4 pi^2 m^2 in
/// the homogeneous (mean-zero) variant.
double sobolev_norm(const FourierVector& v, double s, bool homogeneous);

/// sum_m c_m(psi) conj(c_m(phi)); extends the L2 inner product.
cplx dual_pairing(const FourierVector& psi, const FourierVector& phi);

/// Trapezoid approximation of int_0^1 f conj(g).
cplx l2_inner(const GridFunction& f, const GridFunction& g);

double l2_norm(const GridFunction& f);
double l2_norm(const State& s);

}  // namespace nsc
