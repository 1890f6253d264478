#include <cmath>

#include "doctest.h"
#include "nsc/spectrum.hpp"

using namespace nsc;

namespace {

SpectrumRequest small_request() {
  SpectrumRequest req;
  req.k_para_lo = 1;
  req.k_para_hi = 12;
  req.k_hyp_lo = 1;
  req.k_hyp_hi = 12;
  req.check_window_counts = false;  // covered separately, keeps this fast
  return req;
}

}  // namespace

TEST_CASE("compute_spectrum: requested parabolic range is delivered") {
  SpectrumRequest req = small_request();
  req.k_para_lo = 5;
  req.k_para_hi = 40;
  req.k_hyp_lo = 5;
  req.k_hyp_hi = 8;
  req.low_box = {-1.0, -1e-3, -1.0, 1.0};  // nothing lives there
  const Spectrum spec = compute_spectrum(req);
  CHECK(spec.parabolic.size() == 36);
  for (const auto& [k, e] : spec.parabolic) {
    CHECK(e.lambda.real() < 0.0);
    CHECK(e.residual <= 1e-10);
    CHECK(e.window_ok);
  }
  CHECK(spec.low.empty());
}

TEST_CASE("hyperbolic entries come in conjugate pairs") {
  const Spectrum spec = compute_spectrum(small_request());
  for (const auto& [k, e] : spec.hyperbolic) {
    REQUIRE(spec.hyperbolic.count(-k) == 1);
    const cplx partner = spec.hyperbolic.at(-k).lambda;
    CHECK(std::abs(std::conj(e.lambda) - partner) < 1e-8);
  }
}

TEST_CASE("parabolic eigenvalues are real") {
  const Spectrum spec = compute_spectrum(small_request());
  for (const auto& [k, e] : spec.parabolic)
    CHECK(std::abs(e.lambda.imag()) < 1e-9);
}

TEST_CASE("argument-principle count matches refined roots in a box") {
  // lambda in [-50,-0.1] x [-30, 30]: mu image [0.1, 50] x [-30, 30]
  const int total = count_zeros(Box{0.1, 50.0, -30.0, 30.0});
  const Spectrum spec = compute_spectrum(small_request());
  int inside = 0;
  for (const auto& [k, e] : spec.parabolic)
    if (e.lambda.real() > -50.0) ++inside;
  for (const auto& [k, e] : spec.hyperbolic)
    if (std::abs(e.lambda.imag()) < 30.0) ++inside;
  CHECK(total == inside);
}

TEST_CASE("low-box search reproduces the branch census") {
  // the default box holds parabolic k=1,2 and hyperbolic |k|<=3 and nothing
  // else, so with branches accepted from k=1 the leftover list is empty
  SpectrumRequest req = small_request();
  const Spectrum spec = compute_spectrum(req);
  CHECK(spec.low.empty());
  spec.validate();
}

TEST_CASE("spectrum CSV has the pinned header") {
  const Spectrum spec = compute_spectrum(small_request());
  const std::string csv = spec.to_csv();
  CHECK(csv.rfind("branch,k,re_lambda,im_lambda,residual,window_ok\n", 0) ==
        0);
  const Spectrum back = Spectrum::from_json(spec.to_json());
  CHECK(back.parabolic.size() == spec.parabolic.size());
  CHECK(std::abs(back.parabolic.at(3).lambda - spec.parabolic.at(3).lambda) ==
        0.0);
}

TEST_CASE("window counts certify one root per accepted window") {
  SpectrumRequest req = small_request();
  req.k_para_lo = req.k_hyp_lo = 3;
  req.k_para_hi = req.k_hyp_hi = 6;
  req.check_window_counts = true;
  CHECK_NOTHROW(compute_spectrum(req));
}

TEST_CASE("asymptotic fit: measured correction laws") {
  SpectrumRequest req = small_request();
  req.k_para_hi = req.k_hyp_hi = 40;
  const Spectrum spec = compute_spectrum(req);
  const AsymptoticFit fit = asymptotic_fit(spec);

  CHECK(fit.max_abs_c <= M_PI / 2);
  CHECK(fit.max_abs_d <= M_PI / 2);
  CHECK(fit.max_abs_alpha1 <= M_PI / 2);
  CHECK(fit.max_abs_alpha2 <= M_PI / 2);

  // c_k ~ -3/(8 pi k): slope -1
  CHECK(fit.slope_c > -1.4);
  CHECK(fit.slope_c < -0.6);
  // parabolic roots are real, d_k vanishes identically
  CHECK(fit.max_abs_d < 1e-10);
  CHECK(std::isnan(fit.slope_d));
  // hyperbolic corrections decay one half-order faster than the c_k
  CHECK(fit.slope_alpha1 < -1.2);
  CHECK(fit.slope_alpha1 > -1.8);
  CHECK(fit.slope_alpha2 < -1.2);
  CHECK(fit.slope_alpha2 > -1.8);
  CHECK(fit.slope_hyp_defect < -1.2);
  CHECK(fit.slope_hyp_defect > -1.8);

  CHECK(spec.parabolic_shift_bound < 2.0);
  CHECK(spec.hyperbolic_defect_bound < 1.0);
}

TEST_CASE("roots below the accepted branch ranges land in the low family") {
  SpectrumRequest req = small_request();
  req.k_para_lo = 3;  // leave lambda = -9.41, -38.72 to the box sweep
  req.k_hyp_lo = 2;   // and the k = +-1 hyperbolic pair
  const Spectrum spec = compute_spectrum(req);
  REQUIRE(spec.low.size() == 4);
  int real_count = 0, complex_count = 0;
  for (const auto& e : spec.low) {
    CHECK(e.lambda.real() < 0.0);
    if (std::abs(e.lambda.imag()) < 1e-9)
      ++real_count;
    else
      ++complex_count;
  }
  CHECK(real_count == 2);     // the two parabolic-type leftovers
  CHECK(complex_count == 2);  // the conjugate hyperbolic-type pair
  spec.validate();
}

TEST_CASE("empty ranges and bad boxes are rejected") {
  SpectrumRequest req = small_request();
  req.k_para_hi = 0;
  CHECK_THROWS_AS(compute_spectrum(req), SpectrumError);
  req = small_request();
  req.low_box.re_hi = 0.5;
  CHECK_THROWS_AS(compute_spectrum(req), SpectrumError);
}
