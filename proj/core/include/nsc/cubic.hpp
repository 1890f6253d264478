#pragma once

#include <array>

#include "nsc/expsum.hpp"

namespace nsc {

/// Labeled roots of m^3 + mu m^2 + 2 mu m + mu^2 = 0.
///
/// m1 is the root nearest -mu+1; m2 the one nearest -1/2 - i sqrt(mu) with
/// the principal square root (Re >= 0).
struct CubicRoots {
  cplx m1, m2, m3;
  double residual_rel = 0.0;   // max poly residual / max(1, |mu|^2)
  bool near_degenerate = false;

  std::array<cplx, 3> as_array() const { return {m1, m2, m3}; }
};

struct CubicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solve and label the auxiliary cubic. Throws on mu == 0 (triple root,
/// excluded from the spectrum). Flags near-degenerate pairs at relative
/// distance below degeneracy_tol; eigenfunction formulas are invalid there.
CubicRoots cubic_roots(cplx mu, double degeneracy_tol = 1e-8);

/// cubic value m^3 + mu m^2 + 2 mu m + mu^2 (for residual checks).
cplx cubic_value(cplx mu, cplx m);

/// The two non-zero zeros of the cubic's discriminant -mu^3(4mu^2-13mu+32):
/// root-collision points where the determinant vanishes without being an
/// eigenvalue. Needed by the zero-counting machinery.
std::array<cplx, 2> discriminant_collisions();

}  // namespace nsc
