#include "nsc/basis.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"
#include "nsc/parallel.hpp"

namespace nsc {

ComparisonPair comparison_pair(int k, ComparisonKind kind) {
  ComparisonPair out;
  if (kind == ComparisonKind::psi) {
    if (k < 1)
      throw EigenError("comparison_pair: psi_k requires k >= 1");
    out.eta = ExpSum::damped_sine(cplx(0.0, 2.0) * std::exp(cplx(-0.5, 0.0)),
                                  k * M_PI, cplx(-0.5, 0.0));
  } else {
    const double sg = k >= 0 ? 1.0 : -1.0;
    const double root = std::sqrt(std::abs(k) * M_PI);
    out.xi = ExpSum::single(
        cplx(0.0, 2.0 * sg) * std::exp(cplx(-0.5, -sg * root)),
        cplx(0.0, -2.0 * k * M_PI));
  }
  return out;
}

State comparison_family(int k, ComparisonKind kind, int grid_n) {
  const ComparisonPair p = comparison_pair(k, kind);
  State s;
  s.rho = GridFunction::sample(p.xi, grid_n);
  s.u = GridFunction::sample(p.eta, grid_n);
  return s;
}

namespace {

double pair_dist_sq_quadrature(const ExpSum& xi, const ExpSum& eta,
                               const ExpSum& cxi, const ExpSum& ceta,
                               int quad_n) {
  double acc = 0.0;
  const double h = 1.0 / quad_n;
  for (int i = 0; i <= quad_n; ++i) {
    const double x = h * i;
    const double w = (i == 0 || i == quad_n) ? 0.5 : 1.0;
    acc += w * (std::norm(xi(x) - cxi(x)) + std::norm(eta(x) - ceta(x)));
  }
  return acc * h;
}

}  // namespace

ClosenessReport quadratic_closeness(const std::vector<EigenPair>& pairs,
                                    int quad_n) {
  if (quad_n < 2048) quad_n = 2048;
  std::map<int, double> para, hyp;
  std::map<int, const EigenPair*> by_key_p, by_key_h;
  for (const auto& p : pairs) {
    if (p.branch == Branch::parabolic) by_key_p[p.k] = &p;
    if (p.branch == Branch::hyperbolic) by_key_h[p.k] = &p;
  }
  for (const auto& [k, p] : by_key_p) {
    const ComparisonPair c = comparison_pair(k, ComparisonKind::psi);
    para[k] = pair_dist_sq_quadrature(comparison_scaled_xi(*p), comparison_scaled_eta(*p),
                                       c.xi, c.eta, quad_n);
  }
  for (const auto& [k, p] : by_key_h) {
    if (k < 0) continue;
    auto it = by_key_h.find(-k);
    if (it == by_key_h.end())
      throw EigenError("quadratic_closeness: missing eigenpair for k=" +
                       std::to_string(-k));
    const ComparisonPair cp = comparison_pair(k, ComparisonKind::psi_tilde);
    const ComparisonPair cm = comparison_pair(-k, ComparisonKind::psi_tilde);
    hyp[k] = pair_dist_sq_quadrature(comparison_scaled_xi(*p), comparison_scaled_eta(*p),
                                      cp.xi, cp.eta, quad_n) +
             pair_dist_sq_quadrature(comparison_scaled_xi(*it->second),
                                      comparison_scaled_eta(*it->second), cm.xi,
                                      cm.eta, quad_n);
  }

  ClosenessReport rep;
  auto fill = [&](Branch b, const std::map<int, double>& m) {
    double cum = 0.0;
    std::vector<double> xs, ys;
    for (const auto& [k, v] : m) {
      cum += v;
      rep.rows.push_back({b, k, v, cum});
      xs.push_back(k);
      ys.push_back(v);
    }
    // slope over the upper half of the k range
    const size_t half = xs.size() / 2;
    return loglog_slope({xs.begin() + half, xs.end()},
                        {ys.begin() + half, ys.end()});
  };
  rep.slope_parabolic = fill(Branch::parabolic, para);
  rep.slope_hyperbolic = fill(Branch::hyperbolic, hyp);
  return rep;
}

std::string ClosenessReport::to_csv() const {
  std::string out = "branch,k,diff_sq,cumsum\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%d,%.17g,%.17g\n",
                  branch_name(r.branch), r.k, r.diff_sq, r.cumsum);
    out += line;
  }
  return out;
}

Eigen::MatrixXcd gram_matrix(const std::vector<State>& family,
                             double* sym_defect) {
  if (family.empty()) throw SpacesError("gram_matrix: empty family");
  const int n = static_cast<int>(family.size());
  const int grid = family[0].rho.n;
  for (const auto& s : family)
    if (s.rho.n != grid || s.u.n != grid)
      throw SpacesError("gram_matrix: grid mismatch");
  Eigen::MatrixXcd G(n, n);
  parallel_for(n, [&](int i) {
    for (int j = 0; j < n; ++j)
      G(i, j) = l2_inner(family[i].rho, family[j].rho) +
                l2_inner(family[i].u, family[j].u);
  });
  const Eigen::MatrixXcd H = 0.5 * (G + G.adjoint());
  if (sym_defect) *sym_defect = (G - H).norm();
  return H;
}

Eigen::MatrixXcd gram_matrix_exact(const std::vector<EigenPair>& pairs) {
  const int n = static_cast<int>(pairs.size());
  std::vector<ExpSum> xs(n), es(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = pairs[i].xi();
    es[i] = pairs[i].eta();
  }
  Eigen::MatrixXcd G(n, n);
  parallel_for(n, [&](int i) {
    for (int j = 0; j < n; ++j)
      G(i, j) = inner01(xs[i], xs[j]) + inner01(es[i], es[j]);
  });
  return 0.5 * (G + Eigen::MatrixXcd(G.adjoint()));
}

GramReport riesz_bounds(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                     Eigen::EigenvaluesOnly);
  GramReport rep;
  rep.size = static_cast<int>(gram.rows());
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.max_eig = es.eigenvalues().maxCoeff();
  rep.condition = rep.min_eig > 0.0 ? rep.max_eig / rep.min_eig
                                    : std::numeric_limits<double>::infinity();
  rep.truncation_history.push_back(
      {static_cast<double>(rep.size), rep.min_eig, rep.max_eig});
  return rep;
}

std::string GramReport::to_json() const {
  nlohmann::json j;
  j["size"] = size;
  j["min_eig"] = min_eig;
  j["max_eig"] = max_eig;
  j["condition"] = condition;
  for (const auto& row : truncation_history)
    j["truncation_history"].push_back({row[0], row[1], row[2]});
  return j.dump(2);
}

}  // namespace nsc
