#pragma once

#include <complex>
#include <vector>

namespace nsc {

using cplx = std::complex<double>;

/// Finite exponential sum f(x) = sum_i c_i exp(a_i (x - s_i)) on [0,1].
///
/// Eigenfunctions, comparison families and the closed-form initial data are
/// all of this form, so norms, pairings and boundary values evaluate exactly.
/// The per-term anchor s_i keeps boundary layers representable: a reflected
/// layer stores (c, -a, 1) instead of the over/underflowing (c e^a, -a, 0).
class ExpSum {
 public:
  struct Term {
    cplx coef;
    cplx rate;
    double anchor = 0.0;
  };

  ExpSum() = default;
  explicit ExpSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static ExpSum single(cplx coef, cplx rate) {
    return ExpSum({{coef, rate, 0.0}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx operator()(double x) const;
  void add_term(cplx coef, cplx rate, double anchor = 0.0) {
    terms_.push_back({coef, rate, anchor});
  }

  ExpSum derivative() const;
  ExpSum conjugated() const;           // coefficients and rates conjugated
  ExpSum reflected() const;            // f(1-x), still an exponential sum
  ExpSum scaled(cplx s) const;
  ExpSum operator+(const ExpSum& other) const;
  ExpSum operator-(const ExpSum& other) const;

  /// int_0^1 f(x) dx, exact.
  cplx integral01() const;

  /// int_0^1 f(x) e^{2 pi i m x} dx, exact (spectral coefficient of the
  /// periodic pairing convention used throughout).
  cplx mode_coefficient(int m) const;

  /// sin(w pi (1-x)) * c * e^{r x} expressed as two exponential terms.
  static ExpSum damped_sine(cplx amplitude, double wavenumber_pi, cplx rate);

 private:
  std::vector<Term> terms_;
};

/// int_0^1 e^{a x} dx with the removable singularity at a = 0.
cplx integral01_exp(cplx a);

/// int_0^1 e^{offset + rate x} dx, evaluated so that only the endpoint
/// magnitudes (not intermediate factorizations) must be representable.
cplx integral01_exp_shifted(cplx rate, cplx offset);

/// int_0^1 f(x) conj(g(x)) dx, exact.
cplx inner01(const ExpSum& f, const ExpSum& g);

/// sqrt(int |f|^2), exact.
double norm01(const ExpSum& f);

}  // namespace nsc
