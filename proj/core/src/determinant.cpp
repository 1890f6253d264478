#include "nsc/determinant.hpp"

#include <cmath>

namespace nsc {

DetValue char_det(cplx mu) {
  const CubicRoots r = cubic_roots(mu);
  const std::array<cplx, 3> m = r.as_array();
  const double mu2 = std::norm(mu);
  DetValue out;
  out.degenerate_roots = r.near_degenerate;

  int big = 0;
  for (int i = 1; i < 3; ++i)
    if (m[i].real() > m[big].real()) big = i;

  if (m[big].real() <= 650.0) {
    const cplx e1 = std::exp(m[0]), e2 = std::exp(m[1]), e3 = std::exp(m[2]);
    const cplx t1 = m[0] * m[0] * (1.0 - e1) * (e3 - e2);
    const cplx t2 = m[1] * m[1] * (1.0 - e2) * (e1 - e3);
    const cplx t3 = m[2] * m[2] * (1.0 - e3) * (e2 - e1);
    out.delta = t1 + t2 + t3;
    out.normalized = out.delta / (mu * mu);
    const double a1 = std::abs(e1), a2 = std::abs(e2), a3 = std::abs(e3);
    out.scale = (std::norm(m[0]) * (1.0 + a1) * (a2 + a3) +
                 std::norm(m[1]) * (1.0 + a2) * (a1 + a3) +
                 std::norm(m[2]) * (1.0 + a3) * (a1 + a2)) /
                mu2;
    return out;
  }

  // One exponent exceeds the representable range: evaluate Delta e^{-m_big}
  // instead. Value and scale are rescaled consistently, so relative
  // residuals and root loci are unchanged (log-magnitude/phase form).
  const cplx a = m[big], b = m[(big + 1) % 3], c = m[(big + 2) % 3];
  const cplx ema = std::exp(-a);           // Re(-a) < -650, underflows to ~0
  const cplx eb = std::exp(b), ec = std::exp(c);
  const cplx ebma = std::exp(b - a), ecma = std::exp(c - a);
  const cplx t1 = a * a * (ema - 1.0) * (ec - eb);
  const cplx t2 = b * b * (1.0 - eb) * (1.0 - ecma);
  const cplx t3 = c * c * (1.0 - ec) * (ebma - 1.0);
  out.delta = t1 + t2 + t3;  // = Delta * e^{-m_big}
  out.normalized = out.delta / (mu * mu);
  const double aa = std::abs(ema), ab = std::abs(eb), ac = std::abs(ec);
  out.scale = (std::norm(a) * (aa + 1.0) * (ac + ab) +
               std::norm(b) * (1.0 + ab) * (1.0 + std::abs(ecma)) +
               std::norm(c) * (1.0 + ac) * (std::abs(ebma) + 1.0)) /
              mu2;
  return out;
}

RootResult refine_root(cplx seed, double tol, int max_iter,
                       std::optional<double> guard_radius) {
  if (tol < 1e-14) tol = 1e-14;
  RootResult best{seed, std::numeric_limits<double>::infinity(), 0, false};
  cplx mu = seed;
  for (int it = 0; it < max_iter; ++it) {
    const DetValue v = char_det(mu);
    const double rel = std::abs(v.normalized) / v.scale;
    if (rel < best.residual) {
      best.mu = mu;
      best.residual = rel;
      best.iterations = it;
    }
    // keep polishing beyond tol until the evaluation noise floor
    const double h = 1e-6 * std::max(1.0, std::abs(mu));
    const cplx fp = char_det(mu + h).normalized;
    const cplx fm = char_det(mu - h).normalized;
    const cplx d = (fp - fm) / (2.0 * h);
    if (d == cplx(0.0)) break;
    const cplx step = v.normalized / d;
    mu -= step;
    if (guard_radius && std::abs(mu - seed) > *guard_radius) {
      best.converged = false;
      throw RootError("refine_root: iterate escaped guard disk", best);
    }
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(mu))) break;
  }
  best.converged = best.residual <= tol;
  if (!best.converged)
    throw RootError("refine_root: no convergence to tol", best);
  return best;
}

Box parabolic_window(int k) {
  const double c = k * M_PI;
  return {c - M_PI / 2, c + M_PI / 2, -M_PI / 2, M_PI / 2};
}

Box hyperbolic_window(int k) {
  const double c = 2.0 * k * M_PI;
  return {1.0 - M_PI / 2, 1.0 + M_PI / 2, c - M_PI / 2, c + M_PI / 2};
}

bool in_parabolic_window(cplx mu, int k) {
  cplx w = std::sqrt(mu);
  if (w.real() < 0.0) w = -w;
  return parabolic_window(k).contains(w);
}

bool in_hyperbolic_window(cplx mu, int k) {
  return hyperbolic_window(k).contains(mu);
}

namespace {

// winding number of f along a polyline contour via adaptive phase walk
template <class F>
bool phase_winding(const F& f, const std::vector<cplx>& corners, double* out) {
  double total = 0.0;
  for (size_t seg = 0; seg + 1 < corners.size(); ++seg) {
    const cplx a = corners[seg], b = corners[seg + 1];
    std::vector<double> ts;
    std::vector<cplx> vs;
    const int n0 = 48;
    for (int i = 0; i <= n0; ++i) {
      const double t = static_cast<double>(i) / n0;
      ts.push_back(t);
      vs.push_back(f(a + t * (b - a)));
    }
    size_t i = 0;
    int splits = 0;
    while (i + 1 < ts.size()) {
      if (vs[i] == cplx(0.0) || vs[i + 1] == cplx(0.0)) return false;
      const double dphi = std::arg(vs[i + 1] / vs[i]);
      const double mag = std::abs(vs[i + 1]) / std::abs(vs[i]);
      // refine on fast phase rotation or sharp magnitude dips: both betray
      // an under-resolved passage near an off-contour zero
      const bool needs_split =
          std::abs(dphi) > M_PI / 2 || mag > 4.0 || mag < 0.25;
      if (needs_split && ts[i + 1] - ts[i] > 1e-13) {
        const double tm = 0.5 * (ts[i] + ts[i + 1]);
        ts.insert(ts.begin() + i + 1, tm);
        vs.insert(vs.begin() + i + 1, f(a + tm * (b - a)));
        if (++splits > 20000) return false;
      } else {
        total += dphi;
        ++i;
      }
    }
  }
  *out = total / (2.0 * M_PI);
  return true;
}

int rounded_count(double w, int subtract) {
  const double c = (w - subtract) / 2.0;
  const long r = std::lround(c);
  if (std::abs(c - r) > 0.2 || r < 0) return -1;
  return static_cast<int>(r);
}

}  // namespace

int count_zeros(const Box& box_mu) {
  auto f = [](cplx mu) {
    const cplx v = char_det(mu).normalized;
    return v * v;
  };
  std::vector<cplx> corners = {
      cplx(box_mu.re_lo, box_mu.im_lo), cplx(box_mu.re_hi, box_mu.im_lo),
      cplx(box_mu.re_hi, box_mu.im_hi), cplx(box_mu.re_lo, box_mu.im_hi),
      cplx(box_mu.re_lo, box_mu.im_lo)};
  double w = 0.0;
  if (!phase_winding(f, corners, &w)) return -1;
  int collisions = 0;
  for (cplx c : discriminant_collisions())
    if (box_mu.contains(c)) ++collisions;
  return rounded_count(w, collisions);
}

int count_zeros_sqrt_plane(const Box& box_w) {
  auto f = [](cplx w) {
    const cplx v = char_det(w * w).normalized;
    return v * v;
  };
  std::vector<cplx> corners = {
      cplx(box_w.re_lo, box_w.im_lo), cplx(box_w.re_hi, box_w.im_lo),
      cplx(box_w.re_hi, box_w.im_hi), cplx(box_w.re_lo, box_w.im_hi),
      cplx(box_w.re_lo, box_w.im_lo)};
  double w = 0.0;
  if (!phase_winding(f, corners, &w)) return -1;
  int collisions = 0;
  for (cplx c : discriminant_collisions()) {
    cplx cw = std::sqrt(c);
    if (cw.real() < 0.0) cw = -cw;
    if (box_w.contains(cw)) ++collisions;
  }
  return rounded_count(w, collisions);
}

}  // namespace nsc
