#include "nsc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "nsc/parallel.hpp"

namespace nsc {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::parabolic: return "parabolic";
    case Branch::hyperbolic: return "hyperbolic";
    default: return "low";
  }
}

std::vector<cplx> Spectrum::all_lambdas() const {
  std::vector<cplx> out;
  for (const auto& [k, e] : parabolic) out.push_back(e.lambda);
  for (const auto& [k, e] : hyperbolic) out.push_back(e.lambda);
  for (const auto& e : low) out.push_back(e.lambda);
  return out;
}

void Spectrum::validate() const {
  const auto all = all_lambdas();
  for (cplx l : all)
    if (!(l.real() < 0.0))
      throw SpectrumError("spectrum invariant: Re(lambda) >= 0 at " +
                          std::to_string(l.real()));
  for (size_t i = 0; i < all.size(); ++i) {
    double best = 1e300;
    for (size_t j = 0; j < all.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, std::abs(all[i] - all[j]));
    }
    if (!all.empty() && all.size() > 1 && best <= 1e-6)
      throw SpectrumError("spectrum invariant: eigenvalues not distinct");
    // conjugate closure
    double cbest = 1e300;
    for (size_t j = 0; j < all.size(); ++j)
      cbest = std::min(cbest, std::abs(std::conj(all[i]) - all[j]));
    if (cbest > 1e-8)
      throw SpectrumError("spectrum invariant: conjugate closure violated");
  }
}

std::string Spectrum::to_csv() const {
  std::string out = "branch,k,re_lambda,im_lambda,residual,window_ok\n";
  char line[256];
  auto emit = [&](const char* b, int k, const SpectrumEntry& e) {
    std::snprintf(line, sizeof line, "%s,%d,%.17g,%.17g,%.3g,%d\n", b, k,
                  e.lambda.real(), e.lambda.imag(), e.residual,
                  e.window_ok ? 1 : 0);
    out += line;
  };
  for (const auto& [k, e] : parabolic) emit("parabolic", k, e);
  for (const auto& [k, e] : hyperbolic) emit("hyperbolic", k, e);
  int n = 1;
  for (const auto& e : low) emit("low", n++, e);
  return out;
}

std::string Spectrum::to_json() const {
  nlohmann::json j;
  auto enc = [](const SpectrumEntry& e) {
    return nlohmann::json{{"re", e.lambda.real()},
                          {"im", e.lambda.imag()},
                          {"residual", e.residual},
                          {"iterations", e.iterations},
                          {"window_ok", e.window_ok}};
  };
  for (const auto& [k, e] : parabolic) j["parabolic"][std::to_string(k)] = enc(e);
  for (const auto& [k, e] : hyperbolic) j["hyperbolic"][std::to_string(k)] = enc(e);
  for (const auto& e : low) j["low"].push_back(enc(e));
  j["k_min_parabolic"] = k_min_parabolic;
  j["k_min_hyperbolic"] = k_min_hyperbolic;
  j["parabolic_shift_bound"] = parabolic_shift_bound;
  j["hyperbolic_defect_bound"] = hyperbolic_defect_bound;
  return j.dump(2);
}

Spectrum Spectrum::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Spectrum s;
  auto dec = [](const nlohmann::json& e) {
    SpectrumEntry out;
    out.lambda = cplx(e.at("re").get<double>(), e.at("im").get<double>());
    out.residual = e.at("residual").get<double>();
    out.iterations = e.at("iterations").get<int>();
    out.window_ok = e.at("window_ok").get<bool>();
    return out;
  };
  if (j.contains("parabolic"))
    for (const auto& [k, e] : j["parabolic"].items())
      s.parabolic[std::stoi(k)] = dec(e);
  if (j.contains("hyperbolic"))
    for (const auto& [k, e] : j["hyperbolic"].items())
      s.hyperbolic[std::stoi(k)] = dec(e);
  if (j.contains("low"))
    for (const auto& e : j["low"]) s.low.push_back(dec(e));
  s.k_min_parabolic = j.value("k_min_parabolic", 0);
  s.k_min_hyperbolic = j.value("k_min_hyperbolic", 0);
  s.parabolic_shift_bound = j.value("parabolic_shift_bound", 0.0);
  s.hyperbolic_defect_bound = j.value("hyperbolic_defect_bound", 0.0);
  return s;
}

namespace {

// recursive subdivision of the low box until each cell holds <= 1 zero
void collect_low_cells(const Box& box, int depth, std::vector<Box>* cells) {
  const int n = count_zeros(box);
  if (n == 0) return;
  if (n == 1 || (n > 0 && depth >= 12)) {
    cells->push_back(box);
    return;
  }
  if (depth >= 12)
    throw SpectrumError("low box: contour through zero, subdivision failed");
  // split along the longer edge; nudge the cut when it runs through a zero
  const bool split_re = box.re_hi - box.re_lo >= box.im_hi - box.im_lo;
  for (double frac : {0.5, 0.451, 0.563, 0.347, 0.619}) {
    Box a = box, b = box;
    if (split_re) {
      const double c = box.re_lo + frac * (box.re_hi - box.re_lo);
      a.re_hi = c;
      b.re_lo = c;
    } else {
      const double c = box.im_lo + frac * (box.im_hi - box.im_lo);
      a.im_hi = c;
      b.im_lo = c;
    }
    const int na = count_zeros(a), nb = count_zeros(b);
    if (na < 0 || nb < 0) continue;
    collect_low_cells(a, depth + 1, cells);
    collect_low_cells(b, depth + 1, cells);
    return;
  }
  throw SpectrumError("low box: could not place a cut between zeros");
}

}  // namespace

Spectrum compute_spectrum(const SpectrumRequest& req) {
  if (req.k_para_hi < req.k_para_lo || req.k_hyp_hi < req.k_hyp_lo)
    throw SpectrumError("compute_spectrum: empty branch range");
  if (req.low_box.re_hi >= 0.0)
    throw SpectrumError("compute_spectrum: low box must satisfy Re < 0");

  Spectrum spec;
  spec.k_min_parabolic = req.k_para_lo;
  spec.k_min_hyperbolic = req.k_hyp_lo;

  const int npar = req.k_para_hi - req.k_para_lo + 1;
  std::vector<SpectrumEntry> par(npar);
  parallel_for(npar, [&](int i) {
    const int k = req.k_para_lo + i;
    const double kp = k * M_PI;
    RootResult r = refine_root(cplx(kp * kp, 0.0), req.newton_tol);
    par[i] = {-r.mu, r.residual, r.iterations, in_parabolic_window(r.mu, k)};
  });
  for (int i = 0; i < npar; ++i) {
    if (!par[i].window_ok)
      throw SpectrumError("parabolic root escaped window k=" +
                          std::to_string(req.k_para_lo + i));
    spec.parabolic[req.k_para_lo + i] = par[i];
  }

  std::vector<int> hyp_ks;
  for (int k = req.k_hyp_lo; k <= req.k_hyp_hi; ++k) {
    hyp_ks.push_back(k);
    hyp_ks.push_back(-k);
  }
  std::vector<SpectrumEntry> hyp(hyp_ks.size());
  parallel_for(static_cast<int>(hyp_ks.size()), [&](int i) {
    const int k = hyp_ks[i];
    RootResult r = refine_root(cplx(1.0, 2.0 * k * M_PI), req.newton_tol);
    hyp[i] = {-r.mu, r.residual, r.iterations, in_hyperbolic_window(r.mu, k)};
  });
  for (size_t i = 0; i < hyp_ks.size(); ++i) {
    if (!hyp[i].window_ok)
      throw SpectrumError("hyperbolic root escaped window k=" +
                          std::to_string(hyp_ks[i]));
    spec.hyperbolic[hyp_ks[i]] = hyp[i];
  }

  // low-frequency sweep: count zeros in the mu image of the lambda box,
  // subdivide, refine, and keep whatever is not already a branch member
  const Box mu_box{-req.low_box.re_hi, -req.low_box.re_lo, -req.low_box.im_hi,
                   -req.low_box.im_lo};
  const int total = count_zeros(mu_box);
  if (total < 0) throw SpectrumError("low box: unresolved contour");
  std::vector<Box> cells;
  collect_low_cells(mu_box, 0, &cells);
  std::vector<cplx> found;
  for (Box cell : cells) {
    // shrink a one-zero cell until Newton's basin is reliable
    for (int shrink = 0;
         shrink < 8 &&
         std::max(cell.re_hi - cell.re_lo, cell.im_hi - cell.im_lo) > 1.0;
         ++shrink) {
      const bool split_re =
          cell.re_hi - cell.re_lo >= cell.im_hi - cell.im_lo;
      bool done = false;
      for (double frac : {0.5, 0.451, 0.563, 0.347}) {
        Box a = cell, b = cell;
        if (split_re) {
          const double c = cell.re_lo + frac * (cell.re_hi - cell.re_lo);
          a.re_hi = c;
          b.re_lo = c;
        } else {
          const double c = cell.im_lo + frac * (cell.im_hi - cell.im_lo);
          a.im_hi = c;
          b.im_lo = c;
        }
        const int na = count_zeros(a);
        if (na < 0) continue;
        cell = na == 1 ? a : b;
        done = true;
        break;
      }
      if (!done) break;
    }
    const double guard =
        4.0 * std::hypot(cell.re_hi - cell.re_lo, cell.im_hi - cell.im_lo);
    // seed from the smallest sampled residual inside the cell, then polish;
    // Newton may land on a root-collision point (a determinant zero that is
    // not an eigenvalue), which the degeneracy flag rejects
    std::vector<std::pair<double, cplx>> seeds;
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 4; ++j) {
        const cplx z(cell.re_lo + i * (cell.re_hi - cell.re_lo) / 5.0,
                     cell.im_lo + j * (cell.im_hi - cell.im_lo) / 5.0);
        const DetValue v = char_det(z);
        seeds.push_back({std::abs(v.normalized) / v.scale, z});
      }
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Newton may land on a root-collision point (a determinant zero that is
    // not an eigenvalue); when the degeneracy flag rejects it, move on to
    // the next seed. Cells holding only a collision legitimately yield none.
    for (size_t attempt = 0; attempt < std::min<size_t>(6, seeds.size());
         ++attempt) {
      try {
        RootResult r =
            refine_root(seeds[attempt].second, req.newton_tol, 80, guard);
        if (cell.contains(r.mu, 1e-6) && !char_det(r.mu).degenerate_roots) {
          found.push_back(r.mu);
          break;
        }
      } catch (const RootError&) {
      }
    }
  }
  // dedupe and match against branch roots
  std::vector<cplx> uniq;
  for (cplx m : found) {
    bool dup = false;
    for (cplx u : uniq) dup |= std::abs(u - m) < 1e-6;
    if (!dup) uniq.push_back(m);
  }
  if (static_cast<int>(uniq.size()) != total)
    throw SpectrumError("low box: argument-principle count " +
                        std::to_string(total) + " does not match " +
                        std::to_string(uniq.size()) + " refined roots");
  for (cplx m : uniq) {
    const cplx lambda = -m;
    bool claimed = false;
    for (const auto& [k, e] : spec.parabolic)
      claimed |= std::abs(e.lambda - lambda) < 1e-6;
    for (const auto& [k, e] : spec.hyperbolic)
      claimed |= std::abs(e.lambda - lambda) < 1e-6;
    if (!claimed) {
      const DetValue v = char_det(m);
      spec.low.push_back({lambda, std::abs(v.normalized) / v.scale, 0, true});
    }
  }
  std::sort(spec.low.begin(), spec.low.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() > b.lambda.real();
              return a.lambda.imag() < b.lambda.imag();
            });

  // per-window one-zero verification
  if (req.check_window_counts) {
    std::vector<int> bad(npar + static_cast<int>(hyp_ks.size()), 0);
    parallel_for(npar, [&](int i) {
      const int k = req.k_para_lo + i;
      if (count_zeros_sqrt_plane(parabolic_window(k)) != 1) bad[i] = k;
    });
    parallel_for(static_cast<int>(hyp_ks.size()), [&](int i) {
      const int k = hyp_ks[i];
      if (count_zeros(hyperbolic_window(k)) != 1) bad[npar + i] = k;
    });
    for (int b : bad)
      if (b != 0)
        throw SpectrumError("window count != 1 at k=" + std::to_string(b));
  }

  // branch asymptotics bounds
  for (const auto& [k, e] : spec.parabolic)
    spec.parabolic_shift_bound =
        std::max(spec.parabolic_shift_bound,
                 std::abs(e.lambda.real() + k * k * M_PI * M_PI));
  for (const auto& [k, e] : spec.hyperbolic)
    spec.hyperbolic_defect_bound = std::max(
        spec.hyperbolic_defect_bound,
        std::abs(k) * std::abs(e.lambda + 1.0 + cplx(0.0, 2.0 * k * M_PI)));

  spec.validate();
  return spec;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AsymptoticFit asymptotic_fit(const Spectrum& spec) {
  if (spec.parabolic.size() < 10 || spec.hyperbolic.size() < 10)
    throw SpectrumError("asymptotic_fit: need >= 10 entries per branch");
  AsymptoticFit fit;
  for (const auto& [k, e] : spec.parabolic) {
    cplx w = std::sqrt(-e.lambda);
    if (w.real() < 0.0) w = -w;
    fit.ks.push_back(k);
    fit.c_k.push_back(w.real() - k * M_PI);
    fit.d_k.push_back(w.imag());
  }
  for (const auto& [k, e] : spec.hyperbolic) {
    if (k <= 0) continue;
    const cplx mu = -e.lambda;
    fit.ks_hyp.push_back(k);
    fit.alpha1_k.push_back(mu.real() - 1.0);
    fit.alpha2_k.push_back(mu.imag() - 2.0 * k * M_PI);
    fit.hyp_defect.push_back(
        std::abs(e.lambda + 1.0 + cplx(0.0, 2.0 * k * M_PI)));
  }

  auto upper_half_slope = [](const std::vector<int>& ks,
                             const std::vector<double>& vals) {
    std::vector<double> x, y;
    double sup = 0.0;
    for (double v : vals) sup = std::max(sup, std::abs(v));
    if (sup < 1e-10) return std::nan("");  // vacuously decaying
    const size_t start = ks.size() / 2;
    for (size_t i = start; i < ks.size(); ++i) {
      x.push_back(ks[i]);
      y.push_back(std::abs(vals[i]));
    }
    return loglog_slope(x, y);
  };
  fit.slope_c = upper_half_slope(fit.ks, fit.c_k);
  fit.slope_d = upper_half_slope(fit.ks, fit.d_k);
  fit.slope_alpha1 = upper_half_slope(fit.ks_hyp, fit.alpha1_k);
  fit.slope_alpha2 = upper_half_slope(fit.ks_hyp, fit.alpha2_k);
  fit.slope_hyp_defect = upper_half_slope(fit.ks_hyp, fit.hyp_defect);
  for (double v : fit.c_k) fit.max_abs_c = std::max(fit.max_abs_c, std::abs(v));
  for (double v : fit.d_k) fit.max_abs_d = std::max(fit.max_abs_d, std::abs(v));
  for (double v : fit.alpha1_k)
    fit.max_abs_alpha1 = std::max(fit.max_abs_alpha1, std::abs(v));
  for (double v : fit.alpha2_k)
    fit.max_abs_alpha2 = std::max(fit.max_abs_alpha2, std::abs(v));
  return fit;
}

}  // namespace nsc
