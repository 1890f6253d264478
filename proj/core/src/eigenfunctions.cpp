#include "nsc/eigenfunctions.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "json.hpp"

namespace nsc {

ExpSum EigenPair::eta() const {
  ExpSum f;
  for (int i = 0; i < 3; ++i) f.add_term(eta_coeffs[i], roots[i]);
  return f;
}

ExpSum EigenPair::xi() const {
  ExpSum f;
  for (int i = 0; i < 3; ++i)
    f.add_term(eta_coeffs[i] * xi_multipliers[i], roots[i]);
  return f;
}

EigenPair build_eigenfunction(cplx mu_root, Branch branch, int k,
                              double boundary_tol) {
  const CubicRoots r = cubic_roots(mu_root);
  if (r.near_degenerate)
    throw EigenError("build_eigenfunction: near-degenerate cubic roots");

  EigenPair p;
  p.mu = mu_root;
  p.lambda = -mu_root;
  p.branch = branch;
  p.k = k;
  p.roots = r.as_array();
  const cplx e1 = std::exp(r.m1), e2 = std::exp(r.m2), e3 = std::exp(r.m3);
  const cplx c1 = e2 - e3;
  const cplx c2 = e3 - e1;
  p.eta_coeffs = {c1, c2, -(c1 + c2)};  // eta(0) = 0 exactly
  for (int i = 0; i < 3; ++i)
    p.xi_multipliers[i] = 1.0 + p.roots[i] * p.roots[i] / mu_root;
  p.normalization = 1.0;

  // unit L2 x L2 norm, phase of xi(1) in (-pi/2, pi/2]
  const double nrm = std::hypot(norm01(p.xi()), norm01(p.eta()));
  if (!(nrm > 0.0)) throw EigenError("build_eigenfunction: trivial pair");
  cplx scale = nrm;
  const cplx z = p.xi()(1.0) / scale;
  if (std::abs(z) > 0.0) scale *= z / std::abs(z);
  for (auto& c : p.eta_coeffs) c /= scale;
  p.normalization = scale;

  const ResidualReport rr = eigen_residual(p, 32);
  if (rr.boundary_defect > boundary_tol)
    throw EigenError("build_eigenfunction: boundary defect " +
                     std::to_string(rr.boundary_defect) +
                     " (root not accurate enough)");
  return p;
}

ResidualReport eigen_residual(const EigenPair& pair, int n_samples) {
  if (n_samples < 16) n_samples = 16;
  const ExpSum xi = pair.xi(), eta = pair.eta();
  const ExpSum dxi = xi.derivative(), deta = eta.derivative();
  const ExpSum ddeta = deta.derivative();
  const cplx lam = pair.lambda;

  const double scale = std::hypot(norm01(xi), norm01(eta));
  double ode = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    const double x =
        0.5 * (1.0 - std::cos(M_PI * j / (n_samples - 1.0)));
    const cplx r1 = dxi(x) + deta(x) - lam * xi(x);
    const cplx r2 = ddeta(x) + deta(x) + dxi(x) - lam * eta(x);
    ode = std::max(ode, std::max(std::abs(r1), std::abs(r2)));
  }
  ResidualReport out;
  out.ode_defect = ode / scale;
  out.boundary_defect = (std::abs(xi(0.0) - xi(1.0)) + std::abs(eta(0.0)) +
                         std::abs(eta(1.0))) /
                        scale;
  return out;
}

cplx observation(const EigenPair& pair) { return pair.xi()(1.0); }

double rayleigh_defect(const EigenPair& pair) {
  const ExpSum xi = pair.xi(), eta = pair.eta();
  const ExpSum deta = eta.derivative();
  const double num = std::real(inner01(deta, deta));
  const double den =
      std::real(inner01(xi, xi)) + std::real(inner01(eta, eta));
  return std::abs(pair.lambda.real() + num / den);
}

double boundary_matrix_rank_gap(cplx mu) {
  const CubicRoots r = cubic_roots(mu);
  Eigen::Matrix3cd M;
  const std::array<cplx, 3> m = r.as_array();
  for (int j = 0; j < 3; ++j) {
    const cplx e = std::exp(m[j]);
    M(0, j) = 1.0;
    M(1, j) = e;
    M(2, j) = m[j] * m[j] * (1.0 - e);
  }
  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(M);
  const auto& s = svd.singularValues();
  return s(1) / std::max(s(2), 1e-300);
}

cplx comparison_scale(const EigenPair& pair) {
  if (pair.branch == Branch::parabolic) {
    // match eta's coefficient on e^{m2 x} to the damped-sine closed form
    const cplx target =
        std::exp(cplx(-0.5, 0.0)) * std::exp(cplx(0.0, pair.k * M_PI));
    return pair.eta_coeffs[1] / target;
  }
  if (pair.branch == Branch::hyperbolic) {
    // match xi's coefficient on e^{m1 x} to the comparison exponential
    const double sg = pair.k >= 0 ? 1.0 : -1.0;
    const double root = std::sqrt(std::abs(pair.k) * M_PI);
    const cplx target =
        cplx(0.0, 2.0 * sg) * std::exp(cplx(-0.5, -sg * root));
    return pair.eta_coeffs[0] * pair.xi_multipliers[0] / target;
  }
  return pair.normalization;  // low branch: no comparison partner
}

ExpSum comparison_scaled_xi(const EigenPair& pair) {
  return pair.xi().scaled(1.0 / comparison_scale(pair));
}

ExpSum comparison_scaled_eta(const EigenPair& pair) {
  return pair.eta().scaled(1.0 / comparison_scale(pair));
}

std::string EigenPair::to_json() const {
  nlohmann::json j;
  j["re_lambda"] = lambda.real();
  j["im_lambda"] = lambda.imag();
  j["branch"] = branch_name(branch);
  j["k"] = k;
  auto put = [&](const char* key, const std::array<cplx, 3>& a) {
    auto& arr = j[key] = nlohmann::json::array();
    for (const cplx& v : a) arr.push_back({v.real(), v.imag()});
  };
  put("roots", roots);
  put("eta_coeffs", eta_coeffs);
  put("xi_multipliers", xi_multipliers);
  j["normalization"] = {normalization.real(), normalization.imag()};
  return j.dump();
}

EigenPair EigenPair::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  EigenPair p;
  p.lambda = cplx(j.at("re_lambda").get<double>(),
                  j.at("im_lambda").get<double>());
  p.mu = -p.lambda;
  const std::string b = j.at("branch").get<std::string>();
  p.branch = b == "parabolic" ? Branch::parabolic
             : b == "hyperbolic" ? Branch::hyperbolic
                                 : Branch::low;
  p.k = j.at("k").get<int>();
  auto get = [&](const char* key, std::array<cplx, 3>& a) {
    const auto& arr = j.at(key);
    for (int i = 0; i < 3; ++i)
      a[i] = cplx(arr[i][0].get<double>(), arr[i][1].get<double>());
  };
  get("roots", p.roots);
  get("eta_coeffs", p.eta_coeffs);
  get("xi_multipliers", p.xi_multipliers);
  p.normalization = cplx(j.at("normalization")[0].get<double>(),
                         j.at("normalization")[1].get<double>());
  return p;
}

}  // namespace nsc
