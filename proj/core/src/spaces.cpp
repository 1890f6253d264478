#include "nsc/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace nsc {

int FourierVector::truncation() const {
  int m = 0;
  for (const auto& [k, c] : coeffs) m = std::max(m, std::abs(k));
  return m;
}

void FourierVector::enforce_mean_zero(double rel_tol) {
  double peak = 0.0;
  for (const auto& [k, c] : coeffs)
    if (k != 0) peak = std::max(peak, std::abs(c));
  auto it = coeffs.find(0);
  if (it != coeffs.end()) {
    if (std::abs(it->second) > rel_tol * std::max(peak, 1e-300))
      throw SpacesError("mean-zero violated: |c_0| = " +
                        std::to_string(std::abs(it->second)));
    coeffs.erase(it);
  }
  mean_zero = true;
}

std::string FourierVector::to_json() const {
  nlohmann::json j;
  j["s"] = sobolev_exponent;
  auto& modes = j["modes"] = nlohmann::json::array();
  for (const auto& [m, c] : coeffs)
    modes.push_back({m, c.real(), c.imag()});
  return j.dump();
}

FourierVector FourierVector::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  FourierVector v;
  v.sobolev_exponent = j.at("s").get<double>();
  for (const auto& row : j.at("modes"))
    v.coeffs[row.at(0).get<int>()] =
        cplx(row.at(1).get<double>(), row.at(2).get<double>());
  return v;
}

GridFunction GridFunction::sample(const ExpSum& f, int n) {
  GridFunction g = GridFunction::zeros(n);
  for (int i = 0; i <= n; ++i) g.values[i] = f(g.node(i));
  return g;
}

FourierVector fourier_coeffs(const GridFunction& f, int cutoff) {
  if (cutoff < 1) throw SpacesError("fourier_coeffs: cutoff must be >= 1");
  const int min_nodes = 4 * cutoff + 1;
  if (f.n + 1 < min_nodes)
    throw SpacesError("fourier_coeffs: grid too coarse for cutoff " +
                      std::to_string(cutoff) + ", need at least " +
                      std::to_string(min_nodes) + " nodes");
  FourierVector out;
  const double h = f.h();
  for (int m = -cutoff; m <= cutoff; ++m) {
    cplx s = 0.0;
    // periodic extension: endpoints merge into one sample
    for (int i = 0; i < f.n; ++i) {
      const double x = f.node(i);
      s += std::exp(cplx(0.0, 2.0 * M_PI * m * x)) * f.values[i];
    }
    out.coeffs[m] = s * h;
  }
  return out;
}

double sobolev_norm(const FourierVector& v, double s, bool homogeneous) {
  double acc = 0.0;
  for (const auto& [m, c] : v.coeffs) {
    const double m2 = 4.0 * M_PI * M_PI * static_cast<double>(m) * m;
    if (homogeneous) {
      if (m == 0) {
        if (std::abs(c) > 0.0)
          throw SpacesError("homogeneous norm requested with c_0 != 0");
        continue;
      }
      acc += std::pow(m2, s) * std::norm(c);
    } else {
      acc += std::pow(1.0 + m2, s) * std::norm(c);
    }
  }
  return std::sqrt(acc);
}

cplx dual_pairing(const FourierVector& psi, const FourierVector& phi) {
  cplx s = 0.0;
  for (const auto& [m, c] : psi.coeffs) {
    auto it = phi.coeffs.find(m);
    if (it != phi.coeffs.end()) s += c * std::conj(it->second);
  }
  return s;
}

cplx l2_inner(const GridFunction& f, const GridFunction& g) {
  if (f.n != g.n) throw SpacesError("l2_inner: grid mismatch");
  cplx s = 0.0;
  for (int i = 0; i <= f.n; ++i) {
    const double w = (i == 0 || i == f.n) ? 0.5 : 1.0;
    s += w * f.values[i] * std::conj(g.values[i]);
  }
  return s * f.h();
}

double l2_norm(const GridFunction& f) {
  return std::sqrt(std::real(l2_inner(f, f)));
}

double l2_norm(const State& s) {
  return std::hypot(l2_norm(s.rho), l2_norm(s.u));
}

}  // namespace nsc
