#include "nsc/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace nsc {

cplx cubic_value(cplx mu, cplx m) {
  return ((m + mu) * m + 2.0 * mu) * m + mu * mu;
}

static cplx cubic_derivative(cplx mu, cplx m) {
  return (3.0 * m + 2.0 * mu) * m + 2.0 * mu;
}

std::array<cplx, 2> discriminant_collisions() {
  const double re = 13.0 / 8.0;
  const double im = std::sqrt(343.0) / 8.0;
  return {cplx(re, im), cplx(re, -im)};
}

CubicRoots cubic_roots(cplx mu, double degeneracy_tol) {
  if (mu == cplx(0.0))
    throw CubicError("cubic_roots: mu = 0 is a triple root, excluded");

  // Cardano on the depressed cubic t^3 + p t + q, m = t - mu/3
  const cplx a = mu, b = 2.0 * mu, c = mu * mu;
  const cplx p = b - a * a / 3.0;
  const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cplx disc = q * q / 4.0 + p * p * p / 27.0;
  cplx sq = std::sqrt(disc);
  cplx u3 = -q / 2.0 + sq;
  if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;
  cplx u = std::pow(u3, 1.0 / 3.0);
  if (u == cplx(0.0)) u = std::pow(std::abs(q), 1.0 / 3.0);
  const cplx omega(-0.5, std::sqrt(3.0) / 2.0);

  std::array<cplx, 3> roots;
  for (int i = 0; i < 3; ++i) {
    cplx ui = u * (i == 0 ? cplx(1.0) : (i == 1 ? omega : omega * omega));
    cplx t = ui - p / (3.0 * ui);
    cplx m = t - a / 3.0;
    // Newton polish against the full-precision coefficients
    for (int it = 0; it < 4; ++it) {
      cplx f = cubic_value(mu, m);
      cplx df = cubic_derivative(mu, m);
      if (df == cplx(0.0)) break;
      m -= f / df;
    }
    roots[i] = m;
  }

  // labeling: m1 nearest -mu+1, then m2 nearest -1/2 - i sqrt(mu)
  cplx w = std::sqrt(mu);
  if (w.real() < 0.0) w = -w;
  const cplx t1 = -mu + 1.0;
  const cplx t2 = cplx(-0.5, 0.0) - cplx(0.0, 1.0) * w;

  int i1 = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(roots[i] - t1) < std::abs(roots[i1] - t1)) i1 = i;
  int ia = (i1 + 1) % 3, ib = (i1 + 2) % 3;
  if (std::abs(roots[ib] - t2) < std::abs(roots[ia] - t2)) std::swap(ia, ib);

  CubicRoots out;
  out.m1 = roots[i1];
  out.m2 = roots[ia];
  out.m3 = roots[ib];

  const double scale = std::max(1.0, std::norm(mu));
  double res = 0.0;
  for (const auto& m : out.as_array())
    res = std::max(res, std::abs(cubic_value(mu, m)));
  out.residual_rel = res / scale;

  const double span =
      std::max({std::abs(out.m1), std::abs(out.m2), std::abs(out.m3), 1.0});
  const double dmin = std::min({std::abs(out.m1 - out.m2),
                                std::abs(out.m1 - out.m3),
                                std::abs(out.m2 - out.m3)});
  out.near_degenerate = dmin < degeneracy_tol * span;
  return out;
}

}  // namespace nsc
