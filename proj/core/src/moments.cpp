#include "nsc/moments.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/SVD>

#include "json.hpp"

namespace nsc {

namespace {

cplx gram_entry(cplx lj, cplx lk, double T) {
  const cplx s = std::conj(lj) + lk;
  if (std::abs(s) < 1e-14) return cplx(T, 0.0);
  return (std::exp(s * T) - 1.0) / s;
}

}  // namespace

void MomentSystem::validate(double conj_tol) const {
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = i + 1; j < rows.size(); ++j)
      if (std::abs(rows[i].lambda - rows[j].lambda) < 1e-10)
        throw MomentsError("moment system: duplicate exponents");
  for (size_t i = 0; i < rows.size(); ++i) {
    double best = 1e300;
    cplx partner_target = 0.0;
    for (size_t j = 0; j < rows.size(); ++j) {
      const double d = std::abs(std::conj(rows[i].lambda) - rows[j].lambda);
      if (d < best) {
        best = d;
        partner_target = rows[j].target;
      }
    }
    if (best > 1e-8)
      throw MomentsError("moment system: exponents not conjugate-closed");
    const double scale = std::max(1.0, std::abs(rows[i].target));
    if (std::abs(std::conj(rows[i].target) - partner_target) >
        conj_tol * scale)
      throw MomentsError("moment system: conjugate-inconsistent targets");
  }
}

std::string MomentSystem::to_json() const {
  nlohmann::json j;
  j["T"] = T;
  j["s"] = s;
  j["mean_zero_data"] = mean_zero_data;
  j["time_check_warning"] = time_check_warning;
  for (const auto& r : rows)
    j["rows"].push_back({{"re_lambda", r.lambda.real()},
                         {"im_lambda", r.lambda.imag()},
                         {"branch", branch_name(r.branch)},
                         {"k", r.k},
                         {"re_target", r.target.real()},
                         {"im_target", r.target.imag()}});
  return j.dump(2);
}

Eigen::MatrixXcd exponential_gram(const std::vector<cplx>& exponents, double T,
                                  std::vector<double>* col_norms) {
  if (!(T > 0.0)) throw MomentsError("exponential_gram: T must be > 0");
  const int n = static_cast<int>(exponents.size());
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = gram_entry(exponents[i], exponents[j], T);
  if (col_norms) {
    col_norms->resize(n);
    for (int j = 0; j < n; ++j)
      (*col_norms)[j] = std::sqrt(std::abs(G(j, j).real()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        G(i, j) /= (*col_norms)[i] * (*col_norms)[j];
  }
  return G;
}

namespace {

MomentSystem targets_impl(const FourierVector& rho0,
                          const std::function<cplx(const ExpSum&)>& udot_eta,
                          const std::vector<EigenPair>& pairs, double T,
                          double s, double obs_floor) {
  if (!rho0.mean_zero)
    throw MomentsError("moment_targets: rho0 must be mean-zero");
  MomentSystem ms;
  ms.T = T;
  ms.s = s;
  ms.mean_zero_data = true;
  ms.time_check_warning = !(T > 1.0);
  for (const auto& p : pairs) {
    const cplx obs = observation(p);
    if (std::abs(obs) < obs_floor)
      throw MomentsError("moment_targets: observation degeneracy at k=" +
                         std::to_string(p.k));
    const ExpSum xi = p.xi();
    cplx pairing = 0.0;
    for (const auto& [m, cm] : rho0.coeffs)
      pairing += cm * std::conj(xi.mode_coefficient(m));
    pairing += udot_eta(p.eta());
    const cplx target =
        std::conj(std::exp(p.lambda * T)) * pairing / std::conj(obs);
    ms.rows.push_back({p.lambda, p.branch, p.k, target});
  }
  ms.validate();
  return ms;
}

}  // namespace

MomentSystem moment_targets(const FourierVector& rho0, const GridFunction& u0,
                            const std::vector<EigenPair>& pairs, double T,
                            double s, double obs_floor) {
  return targets_impl(
      rho0,
      [&](const ExpSum& eta) {
        return l2_inner(u0, GridFunction::sample(eta, u0.n));
      },
      pairs, T, s, obs_floor);
}

MomentSystem moment_targets(const FourierVector& rho0, const ExpSum& u0,
                            const std::vector<EigenPair>& pairs, double T,
                            double s, double obs_floor) {
  return targets_impl(
      rho0, [&](const ExpSum& eta) { return inner01(u0, eta); }, pairs, T, s,
      obs_floor);
}

double ControlSignal::eval_modal(double t) const {
  cplx v = 0.0;
  for (size_t j = 0; j < modal_rates.size(); ++j)
    v += modal_coeffs[j] * std::exp(modal_rates[j] * (T - t));
  return v.real();
}

ControlSignal solve_moments(const MomentSystem& ms, const SolveOptions& opts) {
  ms.validate();
  const double T = ms.T;
  std::vector<cplx> cols;
  for (const auto& r : ms.rows) cols.push_back(r.lambda);
  int n_moment_rows = static_cast<int>(ms.rows.size());
  std::vector<cplx> row_lams = cols;
  std::vector<cplx> rhs_vals;
  for (const auto& r : ms.rows) rhs_vals.push_back(-r.target);
  if (ms.mean_zero_data) {
    // compatibility condition as the zero-exponent moment
    row_lams.push_back(0.0);
    rhs_vals.push_back(0.0);
    cols.push_back(0.0);
    ++n_moment_rows;
  }
  int extra_rows = 0;
  if (opts.endpoint_vanishing) {
    for (double r : opts.slack_rates) cols.push_back(cplx(r, 0.0));
    extra_rows = 2;
  }

  const int nr = n_moment_rows + extra_rows;
  const int nc = static_cast<int>(cols.size());
  Eigen::MatrixXcd A(nr, nc);
  Eigen::VectorXcd b(nr);
  for (int i = 0; i < n_moment_rows; ++i) {
    for (int j = 0; j < nc; ++j)
      A(i, j) = gram_entry(row_lams[i], cols[j], T);
    b(i) = rhs_vals[i];
  }
  if (opts.endpoint_vanishing) {
    for (int j = 0; j < nc; ++j) {
      A(n_moment_rows, j) = 1.0;                    // p(T) = 0
      A(n_moment_rows + 1, j) = std::exp(cols[j] * T);  // p(0) = 0
    }
    b(n_moment_rows) = 0.0;
    b(n_moment_rows + 1) = 0.0;
  }

  // column normalization: each exponential scaled to unit L2(0,T) norm
  Eigen::VectorXd d(nc);
  for (int j = 0; j < nc; ++j)
    d(j) = std::sqrt(std::abs(gram_entry(cols[j], cols[j], T).real()));
  Eigen::MatrixXcd An = A * d.cwiseInverse().asDiagonal();

  Eigen::VectorXcd an;
  double cond = 0.0;
  if (opts.ridge) {
    const Eigen::MatrixXcd AtA =
        An.adjoint() * An +
        *opts.ridge * Eigen::MatrixXcd::Identity(nc, nc);
    an = AtA.ldlt().solve(An.adjoint() * b);
    cond = 0.0;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        An, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = opts.svd_cutoff * sv(0);
    Eigen::VectorXd inv(sv.size());
    int kept = 0;
    for (int i = 0; i < sv.size(); ++i) {
      inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
      if (sv(i) > cut) ++kept;
    }
    cond = sv(0) / std::max(sv(sv.size() - 1), 1e-300);
    auto apply = [&](const Eigen::VectorXcd& r) {
      return Eigen::VectorXcd(svd.matrixV() *
                              (inv.asDiagonal() * (svd.matrixU().adjoint() * r)));
    };
    an = apply(b);
    for (int pass = 0; pass < 2; ++pass) an += apply(b - An * an);
  }
  Eigen::VectorXcd a = d.cwiseInverse().asDiagonal() * an;

  // the exact least-norm solution is conjugate-symmetric (rates and targets
  // are); project out the numerical asymmetry the SVD leaves behind
  for (int j = 0; j < nc; ++j) {
    for (int j2 = j; j2 < nc; ++j2) {
      if (std::abs(std::conj(cols[j]) - cols[j2]) < 1e-9) {
        const cplx avg = 0.5 * (a(j) + std::conj(a(j2)));
        a(j) = avg;
        a(j2) = std::conj(avg);
        break;
      }
    }
  }

  // algebraic residual on moment rows only
  const Eigen::VectorXcd res = b.head(n_moment_rows) -
                               A.topRows(n_moment_rows) * a;
  const double res_max = res.lpNorm<Eigen::Infinity>();
  if (res_max > opts.residual_tol && !opts.tolerate_residual)
    throw MomentsError("solve_moments: residual " + std::to_string(res_max) +
                       " above tolerance (gram condition " +
                       std::to_string(cond) + ")");

  ControlSignal out;
  out.T = T;
  out.modal_rates = cols;
  out.modal_coeffs.assign(a.data(), a.data() + nc);
  out.residual_norm = res_max;
  out.gram_condition = cond;

  const int M = std::max(opts.sample_count, 16);
  out.times.resize(M + 1);
  out.samples.resize(M + 1);
  double max_abs = 0.0, max_imag = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double t = T * i / M;
    cplx v = 0.0;
    for (int j = 0; j < nc; ++j)
      v += out.modal_coeffs[j] * std::exp(cols[j] * (T - t));
    out.times[i] = t;
    out.samples[i] = v.real();
    max_abs = std::max(max_abs, std::abs(v.real()));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  out.imag_defect = max_imag / std::max(max_abs, 1e-300);
  cplx mean = 0.0;
  cplx l2sq = 0.0;
  for (int j = 0; j < nc; ++j) {
    mean += out.modal_coeffs[j] * integral01_exp(cols[j] * T) * T;
    for (int j2 = 0; j2 < nc; ++j2)
      l2sq += std::conj(out.modal_coeffs[j]) * out.modal_coeffs[j2] *
              gram_entry(cols[j], cols[j2], T);
  }
  out.mean_defect = std::abs(mean);
  out.l2_norm = std::sqrt(std::max(0.0, l2sq.real()));
  return out;
}

std::vector<cplx> moment_residuals(const ControlSignal& p,
                                   const MomentSystem& ms, int quad_n) {
  std::vector<double> ts, ps;
  if (p.has_modal()) {
    ts.resize(quad_n + 1);
    ps.resize(quad_n + 1);
    for (int i = 0; i <= quad_n; ++i) {
      ts[i] = ms.T * i / quad_n;
      ps[i] = p.eval_modal(ts[i]);
    }
  } else {
    if (p.times.size() < 1025)
      throw MomentsError("moment_residuals: need >= 1024 sample intervals");
    ts = p.times;
    ps = p.samples;
  }
  const size_t n = ts.size();
  std::vector<cplx> out;
  out.reserve(ms.rows.size());
  for (const auto& r : ms.rows) {
    const cplx lc = std::conj(r.lambda);
    cplx acc = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      const double dt = ts[i + 1] - ts[i];
      acc += 0.5 * dt *
             (std::exp(lc * (ms.T - ts[i])) * ps[i] +
              std::exp(lc * (ms.T - ts[i + 1])) * ps[i + 1]);
    }
    out.push_back(r.target + acc);
  }
  return out;
}

ControlSignal lift_to_dirichlet(const ControlSignal& p,
                                const std::vector<double>& trace) {
  if (trace.size() != p.samples.size())
    throw MomentsError("lift_to_dirichlet: grid mismatch");
  ControlSignal h;
  h.T = p.T;
  h.times = p.times;
  h.samples.resize(trace.size());
  for (size_t i = 0; i < trace.size(); ++i)
    h.samples[i] = trace[i] + p.samples[i];
  return h;
}

std::string ControlSignal::to_csv() const {
  std::string out = "t,p\n";
  char line[96];
  for (size_t i = 0; i < times.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", times[i], samples[i]);
    out += line;
  }
  return out;
}

std::string ControlSignal::to_json() const {
  nlohmann::json j;
  j["T"] = T;
  j["residual_norm"] = residual_norm;
  j["gram_condition"] = gram_condition;
  j["imag_defect"] = imag_defect;
  j["mean_defect"] = mean_defect;
  j["l2_norm"] = l2_norm;
  for (size_t i = 0; i < modal_rates.size(); ++i)
    j["modal"].push_back({modal_rates[i].real(), modal_rates[i].imag(),
                          modal_coeffs[i].real(), modal_coeffs[i].imag()});
  j["sample_count"] = static_cast<int>(times.size()) - 1;
  return j.dump(2);
}

ControlSignal ControlSignal::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ControlSignal p;
  p.T = j.at("T").get<double>();
  p.residual_norm = j.value("residual_norm", 0.0);
  p.gram_condition = j.value("gram_condition", 0.0);
  p.imag_defect = j.value("imag_defect", 0.0);
  p.mean_defect = j.value("mean_defect", 0.0);
  p.l2_norm = j.value("l2_norm", 0.0);
  if (j.contains("modal"))
    for (const auto& row : j["modal"]) {
      p.modal_rates.push_back(
          cplx(row[0].get<double>(), row[1].get<double>()));
      p.modal_coeffs.push_back(
          cplx(row[2].get<double>(), row[3].get<double>()));
    }
  const int M = j.value("sample_count", 4096);
  p.times.resize(M + 1);
  p.samples.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    p.times[i] = p.T * i / M;
    p.samples[i] = p.eval_modal(p.times[i]);
  }
  return p;
}

}  // namespace nsc
