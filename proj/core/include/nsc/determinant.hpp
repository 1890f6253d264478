#pragma once

#include <functional>
#include <optional>

#include "nsc/cubic.hpp"

namespace nsc {

/// Value of the 3x3 boundary determinant at mu, together with the
/// normalization used for root finding and a cancellation-free magnitude
/// scale (sum of term moduli) against which residuals are measured.
struct DetValue {
  cplx delta;        // raw determinant
  cplx normalized;   // delta / mu^2
  double scale;      // sum_i |m_i^2| (1+|e_i|) (|e_j|+|e_k|) / |mu|^2
  bool degenerate_roots = false;
};

DetValue char_det(cplx mu);

struct RootResult {
  cplx mu;
  double residual;   // |delta/mu^2| / scale at the returned point
  int iterations = 0;
  bool converged = false;
};

struct RootError : std::runtime_error {
  RootResult last;
  RootError(const std::string& what, RootResult r)
      : std::runtime_error(what), last(r) {}
};

/// Newton iteration on Delta(mu)/mu^2 with a centrally differenced
/// derivative (step 1e-6 max(1,|mu|)). Throws RootError on divergence from
/// the guard disk or failure to reach tol within max_iter.
RootResult refine_root(cplx seed, double tol = 1e-12, int max_iter = 80,
                       std::optional<double> guard_radius = std::nullopt);

/// Rectangle in the complex plane, [re_lo,re_hi] x [im_lo,im_hi].
struct Box {
  double re_lo, re_hi, im_lo, im_hi;
  bool contains(cplx z, double pad = 0.0) const {
    return z.real() >= re_lo - pad && z.real() <= re_hi + pad &&
           z.imag() >= im_lo - pad && z.imag() <= im_hi + pad;
  }
  cplx center() const {
    return cplx(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi));
  }
};

/// Counting window for the parabolic branch, a square around k pi in the
/// sqrt(mu) plane.
Box parabolic_window(int k);
/// Counting window for the hyperbolic branch, a square around 1 + 2 i k pi
/// in the mu plane.
Box hyperbolic_window(int k);

bool in_parabolic_window(cplx mu, int k);
bool in_hyperbolic_window(cplx mu, int k);

/// Number of determinant zeros (eigenvalue candidates) inside a mu-plane
/// box, by winding of (Delta/mu^2)^2 along the boundary. The determinant has
/// half-order branch zeros at the two root-collision points of the cubic;
/// squaring makes the function single-valued and the known collision points
/// inside the box are subtracted from the count.
/// Returns -1 if the phase walk cannot be resolved (zero on the contour).
int count_zeros(const Box& box_mu);

/// Same count for a parabolic window given in the w = sqrt(mu) plane.
int count_zeros_sqrt_plane(const Box& box_w);

}  // namespace nsc
