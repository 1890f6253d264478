#include "nsc/pde.hpp"

#include <algorithm>
#include <cmath>

namespace nsc {

namespace {

// Thomas solve of (I - c D2) x = rhs on interior nodes, Dirichlet ends.
struct CnSolver {
  int n;          // cells; unknowns 1..n-1
  double c;       // dt/(2 h^2)
  std::vector<double> diag, lower, upper, work;

  CnSolver(int n_, double dt, double h) : n(n_), c(dt / (2.0 * h * h)) {
    const int m = n - 1;
    diag.assign(m, 1.0 + 2.0 * c);
    lower.assign(m, -c);
    upper.assign(m, -c);
    work.resize(m);
  }

  void solve(std::vector<double>& rhs) {
    const int m = n - 1;
    work[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (int i = 1; i < m; ++i) {
      const double piv = diag[i] - lower[i] * work[i - 1];
      work[i] = upper[i] / piv;
      rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
    }
    for (int i = m - 2; i >= 0; --i) rhs[i] -= work[i] * rhs[i + 1];
  }
};

double l2sq_x(const std::vector<double>& v, double h) {
  double s = 0.5 * (v.front() * v.front() + v.back() * v.back());
  for (size_t i = 1; i + 1 < v.size(); ++i) s += v[i] * v[i];
  return s * h;
}

State to_state(const std::vector<double>& rho, const std::vector<double>& u,
               int n) {
  State s;
  s.rho = GridFunction::zeros(n);
  s.u = GridFunction::zeros(n);
  for (int i = 0; i <= n; ++i) {
    s.rho.values[i] = rho[i];
    s.u.values[i] = u[i];
  }
  return s;
}

struct ForwardScheme {
  int n;
  double h, dt;
  int order;
  bool dirichlet;
  const TimeSignal& bc;

  void apply_bc(std::vector<double>& rho, double t) const {
    rho[0] = dirichlet ? bc(t) : rho[n] + bc(t);
  }

  // explicit advective tendencies at boundary-consistent state
  void tendencies(const std::vector<double>& rho, const std::vector<double>& u,
                  double t, std::vector<double>& drho,
                  std::vector<double>& du) const {
    const double ih = 1.0 / h, i2h = 0.5 / h;
    if (order == 1) {
      for (int i = 1; i <= n; ++i)
        drho[i] = -(rho[i] - rho[i - 1]) * ih - (u[i] - u[i - 1]) * ih;
      for (int i = 1; i < n; ++i)
        du[i] = -(u[i] - u[i - 1]) * ih - (rho[i] - rho[i - 1]) * ih;
      return;
    }
    // second order: upwind-biased density transport, central couplings
    for (int i = 2; i <= n; ++i)
      drho[i] = -(3.0 * rho[i] - 4.0 * rho[i - 1] + rho[i - 2]) * i2h;
    if (dirichlet) {
      drho[1] = -(rho[2] - rho[0]) * i2h;
    } else {
      const double ghost = rho[n - 1] + bc(t);  // periodic extension shift
      drho[1] = -(3.0 * rho[1] - 4.0 * rho[0] + ghost) * i2h;
    }
    for (int i = 1; i < n; ++i) drho[i] += -(u[i + 1] - u[i - 1]) * i2h;
    drho[n] += -(3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) * i2h;
    for (int i = 1; i < n; ++i)
      du[i] = -(u[i + 1] - u[i - 1]) * i2h - (rho[i + 1] - rho[i - 1]) * i2h;
  }
};

Trajectory run_forward(const State& u0, const TimeSignal& bc, int n, int m,
                       double T, const SimOptions& opts, bool dirichlet) {
  if (n < 8) throw PdeError("simulate: need n >= 8");
  const double h = 1.0 / n, dt = T / m;
  if (dt > h) {
    const int suggested = static_cast<int>(std::ceil(T * n));
    throw PdeError("simulate: CFL dt <= dx violated, need m >= " +
                   std::to_string(suggested));
  }
  if (u0.rho.n != n || u0.u.n != n)
    throw PdeError("simulate: initial state grid mismatch");

  std::vector<double> rho(n + 1), u(n + 1);
  for (int i = 0; i <= n; ++i) {
    rho[i] = u0.rho.values[i].real();
    u[i] = u0.u.values[i].real();
  }
  u[0] = u[n] = 0.0;

  Trajectory traj;
  traj.tag = dirichlet ? SystemTag::forward_dirichlet
                       : SystemTag::forward_auxiliary;
  traj.n = n;
  traj.m = m;
  traj.T = T;
  traj.scheme_order = opts.order;
  const int stride =
      opts.snapshot_stride > 0 ? opts.snapshot_stride : std::max(1, m / 64);

  ForwardScheme scheme{n, h, dt, opts.order, dirichlet, bc};
  scheme.apply_bc(rho, 0.0);
  traj.initial = to_state(rho, u, n);

  CnSolver cn(n, dt, h);
  std::vector<double> drho1(n + 1, 0.0), du1(n + 1, 0.0);
  std::vector<double> drho2(n + 1, 0.0), du2(n + 1, 0.0);
  std::vector<double> rho1(n + 1), us(n + 1), rhs(n - 1);
  std::vector<double> ux(n + 1);

  const double e0 =
      0.5 * (l2sq_x(rho, h) + l2sq_x(u, h));

  auto record = [&](int step, double t) {
    traj.trace_x1.push_back(rho[n]);
    traj.energy.push_back(0.5 * (l2sq_x(rho, h) + l2sq_x(u, h)));
    // accumulators (trapezoid in t)
    const double w = (step == 0 || step == m) ? 0.5 : 1.0;
    traj.int_rho_sq += w * dt * l2sq_x(rho, h);
    for (int i = 0; i < n; ++i)
      ux[i] = i == 0 ? (u[1] - u[0]) / h : (u[i + 1] - u[i - 1]) / (2 * h);
    ux[n] = (u[n] - u[n - 1]) / h;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += wx * (static_cast<double>(i) * h) * rho[i] * ux[i];
    }
    traj.int_x_rho_ux += w * dt * acc * h;
    if (step % stride == 0 || step == m) {
      traj.snapshot_times.push_back(t);
      traj.states.push_back(to_state(rho, u, n));
    }
    if (opts.step_hook) opts.step_hook(step, t, rho, u);
  };
  record(0, 0.0);

  auto diffusion_halfstep = [&](const std::vector<double>& ubase,
                                const std::vector<double>& du,
                                double weight, std::vector<double>& out) {
    // out = solve (I - c D2) x = ubase + weight*dt*du + c D2 ubase
    const double c = dt / (2.0 * h * h);
    for (int i = 1; i < n; ++i)
      rhs[i - 1] = ubase[i] + weight * dt * du[i] +
                   c * (ubase[i + 1] - 2.0 * ubase[i] + ubase[i - 1]);
    cn.solve(rhs);
    out[0] = 0.0;
    out[n] = 0.0;
    for (int i = 1; i < n; ++i) out[i] = rhs[i - 1];
  };

  for (int step = 0; step < m; ++step) {
    const double t0 = step * dt, t1 = (step + 1) * dt;
    scheme.tendencies(rho, u, t0, drho1, du1);
    if (opts.order == 1) {
      for (int i = 1; i <= n; ++i) rho[i] += dt * drho1[i];
      scheme.apply_bc(rho, t1);
      diffusion_halfstep(u, du1, 1.0, u);
    } else {
      for (int i = 1; i <= n; ++i) rho1[i] = rho[i] + dt * drho1[i];
      scheme.apply_bc(rho1, t1);
      diffusion_halfstep(u, du1, 1.0, us);
      scheme.tendencies(rho1, us, t1, drho2, du2);
      for (int i = 1; i <= n; ++i)
        rho[i] += 0.5 * dt * (drho1[i] + drho2[i]);
      scheme.apply_bc(rho, t1);
      for (int i = 1; i < n; ++i) du1[i] = 0.5 * (du1[i] + du2[i]);
      diffusion_halfstep(u, du1, 1.0, u);
    }
    record(step + 1, t1);
    if (traj.energy.back() > 1e12 * std::max(e0, 1e-30))
      throw PdeError("simulate: solution diverged at t = " +
                     std::to_string(t1));
  }
  traj.final_state = to_state(rho, u, n);
  traj.check_finite();
  return traj;
}

}  // namespace

void Trajectory::check_finite() const {
  for (const auto& s : states)
    for (int i = 0; i <= n; ++i)
      if (!std::isfinite(s.rho.values[i].real()) ||
          !std::isfinite(s.u.values[i].real()))
        throw PdeError("trajectory contains non-finite values");
}

TimeSignal signal_of(const ControlSignal& p) {
  if (p.has_modal()) {
    return [p](double t) { return p.eval_modal(t); };
  }
  return [p](double t) {
    if (p.times.empty()) return 0.0;
    // linear interpolation in the sampled signal
    const double dt = p.times.size() > 1 ? p.times[1] - p.times[0] : 1.0;
    const double s = std::clamp(t / dt, 0.0,
                                static_cast<double>(p.times.size() - 1));
    const size_t i = std::min(static_cast<size_t>(s), p.times.size() - 2);
    const double w = s - i;
    return (1.0 - w) * p.samples[i] + w * p.samples[i + 1];
  };
}

Trajectory simulate_forward(const State& u0, const TimeSignal& p, int n, int m,
                            double T, const SimOptions& opts) {
  return run_forward(u0, p, n, m, T, opts, false);
}

Trajectory simulate_dirichlet(const State& u0, const TimeSignal& h, int n,
                              int m, double T, const SimOptions& opts) {
  return run_forward(u0, h, n, m, T, opts, true);
}

Trajectory simulate_adjoint(const SourceTerm& src, const State& vT, int n,
                            int m, double T, const SimOptions& opts) {
  // backward system in tau = T - t:
  //   sigma_tau = sigma_x + v_x + f,  v_tau = v_xx + v_x + sigma_x + g
  // sigma periodic, v Dirichlet. The transport speed is -1, so the biased
  // stencil leans on i+1, i+2 with periodic wrap.
  if (n < 8) throw PdeError("simulate_adjoint: need n >= 8");
  const double h = 1.0 / n, dt = T / m;
  if (dt > h) {
    const int suggested = static_cast<int>(std::ceil(T * n));
    throw PdeError("simulate_adjoint: CFL dt <= dx violated, need m >= " +
                   std::to_string(suggested));
  }
  if (vT.rho.n != n || vT.u.n != n)
    throw PdeError("simulate_adjoint: terminal state grid mismatch");

  std::vector<double> s(n + 1), v(n + 1);
  for (int i = 0; i <= n; ++i) {
    s[i] = vT.rho.values[i].real();
    v[i] = vT.u.values[i].real();
  }
  v[0] = v[n] = 0.0;
  s[0] = s[n];

  Trajectory traj;
  traj.tag = SystemTag::adjoint;
  traj.n = n;
  traj.m = m;
  traj.T = T;
  traj.scheme_order = opts.order;
  const int stride =
      opts.snapshot_stride > 0 ? opts.snapshot_stride : std::max(1, m / 64);

  traj.trace_x1.assign(m + 1, 0.0);
  traj.energy.assign(m + 1, 0.0);
  std::vector<std::pair<double, State>> snaps;

  auto wrap = [&](int i) { return i <= n ? i : i - n; };  // sigma_{n+j}=sigma_j

  auto tend = [&](const std::vector<double>& sg, const std::vector<double>& vv,
                  double t, std::vector<double>& ds, std::vector<double>& dv) {
    const double i2h = 0.5 / h, ih = 1.0 / h;
    if (opts.order == 1) {
      for (int i = 0; i < n; ++i)
        ds[i] = (sg[i + 1] - sg[i]) * ih;
      for (int i = 0; i < n; ++i) {
        const double vx =
            i + 1 <= n ? (vv[i + 1] - vv[i]) * ih : (vv[i] - vv[i - 1]) * ih;
        ds[i] += vx + src.f(t, i * h);
      }
      for (int i = 1; i < n; ++i)
        dv[i] = (vv[i + 1] - vv[i]) * ih + (sg[i + 1] - sg[i]) * ih +
                src.g(t, i * h);
      return;
    }
    for (int i = 0; i < n; ++i) {
      ds[i] = (-3.0 * sg[i] + 4.0 * sg[wrap(i + 1)] - sg[wrap(i + 2)]) * i2h;
      double vx;
      if (i == 0)
        vx = (4.0 * vv[1] - vv[2]) * i2h;
      else
        vx = (vv[i + 1] - vv[i - 1]) * i2h;
      ds[i] += vx + src.f(t, i * h);
    }
    for (int i = 1; i < n; ++i)
      dv[i] = (vv[i + 1] - vv[i - 1]) * i2h + (sg[wrap(i + 1)] - sg[i - 1]) * i2h +
              src.g(t, i * h);
  };

  CnSolver cn(n, dt, h);
  std::vector<double> ds1(n + 1, 0.0), dv1(n + 1, 0.0);
  std::vector<double> ds2(n + 1, 0.0), dv2(n + 1, 0.0);
  std::vector<double> s1(n + 1), vs(n + 1), rhs(n - 1);

  auto diffuse = [&](const std::vector<double>& vb, const std::vector<double>& dv,
                     std::vector<double>& out) {
    const double c = dt / (2.0 * h * h);
    for (int i = 1; i < n; ++i)
      rhs[i - 1] = vb[i] + dt * dv[i] +
                   c * (vb[i + 1] - 2.0 * vb[i] + vb[i - 1]);
    cn.solve(rhs);
    out[0] = 0.0;
    out[n] = 0.0;
    for (int i = 1; i < n; ++i) out[i] = rhs[i - 1];
  };

  auto record = [&](int back_step) {
    // back_step counts tau steps; forward index is m - back_step
    const int fw = m - back_step;
    traj.trace_x1[fw] = s[n];
    traj.energy[fw] = 0.5 * (l2sq_x(s, h) + l2sq_x(v, h));
    if (fw % stride == 0 || fw == 0 || fw == m)
      snaps.push_back({fw * dt, to_state(s, v, n)});
  };
  record(0);

  for (int bs = 0; bs < m; ++bs) {
    const double t0 = T - bs * dt, t1 = T - (bs + 1) * dt;
    tend(s, v, t0, ds1, dv1);
    if (opts.order == 1) {
      for (int i = 0; i < n; ++i) s[i] += dt * ds1[i];
      s[n] = s[0];
      diffuse(v, dv1, v);
    } else {
      for (int i = 0; i < n; ++i) s1[i] = s[i] + dt * ds1[i];
      s1[n] = s1[0];
      diffuse(v, dv1, vs);
      tend(s1, vs, t1, ds2, dv2);
      for (int i = 0; i < n; ++i) s[i] += 0.5 * dt * (ds1[i] + ds2[i]);
      s[n] = s[0];
      for (int i = 1; i < n; ++i) dv1[i] = 0.5 * (dv1[i] + dv2[i]);
      diffuse(v, dv1, v);
    }
    record(bs + 1);
    if (traj.energy[m - bs - 1] > 1e12 * std::max(traj.energy[m], 1e-30) &&
        traj.energy[m] > 0.0)
      throw PdeError("simulate_adjoint: solution diverged");
  }

  std::sort(snaps.begin(), snaps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [t, st] : snaps) {
    traj.snapshot_times.push_back(t);
    traj.states.push_back(std::move(st));
  }
  traj.initial = traj.states.front();
  traj.final_state = traj.states.back();
  traj.check_finite();
  return traj;
}

ModalRun modal_simulate(const State& u0, const ControlSignal& p,
                        const std::vector<EigenPair>& adjoint_pairs, int grid_n,
                        int snapshots, double cond_limit) {
  const int K = static_cast<int>(adjoint_pairs.size());
  if (K == 0) throw PdeError("modal_simulate: empty eigenfamily");
  const double T = p.T;

  // forward eigenfunctions: reflections of the adjoint ones
  std::vector<ExpSum> fx(K), fe(K);
  for (int j = 0; j < K; ++j) {
    fx[j] = adjoint_pairs[j].xi().reflected();
    fe[j] = adjoint_pairs[j].eta().reflected();
  }

  // projection coefficients from the family Gram
  Eigen::MatrixXcd G(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      G(i, j) = inner01(fx[j], fx[i]) + inner01(fe[j], fe[i]);
  Eigen::VectorXcd rhs(K);
  for (int i = 0; i < K; ++i) {
    rhs(i) = std::conj(l2_inner(GridFunction::sample(fx[i], u0.rho.n), u0.rho) +
                       l2_inner(GridFunction::sample(fe[i], u0.u.n), u0.u));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
  const double cond =
      es.eigenvalues().maxCoeff() / std::max(es.eigenvalues().minCoeff(), 1e-300);
  if (!(cond < cond_limit))
    throw PdeError("modal_simulate: family Gram condition " +
                   std::to_string(cond) + " exceeds limit");
  Eigen::VectorXcd c = G.ldlt().solve(rhs);

  // duality input coefficients: pair each mode with its conjugate partner
  std::vector<cplx> binput(K);
  for (int j = 0; j < K; ++j) {
    const cplx lam = adjoint_pairs[j].lambda;
    int partner = -1;
    for (int i = 0; i < K; ++i)
      if (std::abs(adjoint_pairs[i].lambda - std::conj(lam)) < 1e-8) {
        partner = i;
        break;
      }
    if (partner < 0)
      throw PdeError("modal_simulate: eigenfamily not conjugate-closed");
    const cplx pairing =
        inner01(fx[j], adjoint_pairs[partner].xi()) +
        inner01(fe[j], adjoint_pairs[partner].eta());
    if (std::abs(pairing) < 1e-12)
      throw PdeError("modal_simulate: degenerate biorthogonal pairing");
    binput[j] = std::conj(observation(adjoint_pairs[partner])) / pairing;
  }

  ModalRun run;
  run.gram_condition = cond;
  run.coeff0.assign(c.data(), c.data() + K);

  const int steps = std::max(snapshots - 1, 1);
  const double dt = T / steps;
  Trajectory traj;
  traj.tag = SystemTag::forward_auxiliary;
  traj.n = grid_n;
  traj.m = steps;
  traj.T = T;
  traj.scheme_order = 0;  // exact modal propagation

  auto record = [&](double t, const Eigen::VectorXcd& coef) {
    State st;
    st.rho = GridFunction::zeros(grid_n);
    st.u = GridFunction::zeros(grid_n);
    for (int i = 0; i <= grid_n; ++i) {
      const double x = static_cast<double>(i) / grid_n;
      cplx r = 0.0, uu = 0.0;
      for (int j = 0; j < K; ++j) {
        r += coef(j) * fx[j](x);
        uu += coef(j) * fe[j](x);
      }
      st.rho.values[i] = r;
      st.u.values[i] = uu;
    }
    traj.snapshot_times.push_back(t);
    traj.trace_x1.push_back(st.rho.values[grid_n].real());
    traj.energy.push_back(0.5 * (l2_norm(st.rho) * l2_norm(st.rho) +
                                 l2_norm(st.u) * l2_norm(st.u)));
    traj.states.push_back(std::move(st));
  };
  record(0.0, c);

  for (int sstep = 0; sstep < steps; ++sstep) {
    const double t0 = sstep * dt, t1 = (sstep + 1) * dt;
    for (int j = 0; j < K; ++j) {
      const cplx lam = adjoint_pairs[j].lambda;
      cplx inp = 0.0;
      if (p.has_modal()) {
        for (size_t q = 0; q < p.modal_rates.size(); ++q) {
          const cplx rq = p.modal_rates[q];
          const cplx sum_rate = lam + rq;
          const cplx base = std::exp(rq * (T - t1));
          cplx integral;
          if (std::abs(sum_rate) < 1e-14)
            integral = dt;
          else
            integral = (std::exp(sum_rate * dt) - 1.0) / sum_rate;
          inp += p.modal_coeffs[q] * base * integral;
        }
      } else {
        // two-point quadrature on the sampled signal
        const TimeSignal sig = signal_of(p);
        inp = 0.5 * dt * (std::exp(lam * dt) * sig(t0) + sig(t1));
      }
      c(j) = std::exp(lam * dt) * c(j) + binput[j] * inp;
    }
    record(t1, c);
  }
  run.coeffT.assign(c.data(), c.data() + K);
  for (const cplx& v : run.coeffT)
    run.max_terminal = std::max(run.max_terminal, std::abs(v));
  traj.initial = traj.states.front();
  traj.final_state = traj.states.back();
  run.trajectory = std::move(traj);
  return run;
}

double transposition_defect(const State& u0, const TimeSignal& p,
                            const SourceTerm& src, int n, int m, double T,
                            int order) {
  const double h = 1.0 / n, dt = T / m;
  double i1 = 0.0;
  SimOptions opts;
  opts.order = order;
  opts.step_hook = [&](int step, double t, const std::vector<double>& rho,
                       const std::vector<double>& u) {
    const double w = (step == 0 || step == m) ? 0.5 : 1.0;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
      const double x = i * h;
      acc += wx * (rho[i] * src.f(t, x) + u[i] * src.g(t, x));
    }
    i1 += w * dt * acc * h;
  };
  simulate_forward(u0, p, n, m, T, opts);

  State vT;
  vT.rho = GridFunction::zeros(n);
  vT.u = GridFunction::zeros(n);
  SimOptions aopts;
  aopts.order = order;
  Trajectory adj = simulate_adjoint(src, vT, n, m, T, aopts);

  const State& v0 = adj.states.front();
  double i2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
    i2 += wx * (u0.rho.values[i].real() * v0.rho.values[i].real() +
                u0.u.values[i].real() * v0.u.values[i].real());
  }
  i2 *= h;
  double i3 = 0.0;
  for (int step = 0; step <= m; ++step) {
    const double w = (step == 0 || step == m) ? 0.5 : 1.0;
    i3 += w * dt * adj.trace_x1[step] * p(step * dt);
  }
  return std::abs(i1 - i2 - i3);
}

double weighted_energy_defect(const Trajectory& traj) {
  if (traj.tag != SystemTag::forward_auxiliary)
    throw PdeError("weighted_energy_defect: needs a forward-auxiliary run");
  const int n = traj.n;
  const double h = 1.0 / n, dt = traj.dt();
  double a = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
    const double x = i * h;
    const double rT = traj.final_state.rho.values[i].real();
    const double r0 = traj.initial.rho.values[i].real();
    a += wx * x * (rT * rT - r0 * r0);
  }
  a *= 0.5 * h;
  double b = 0.0;
  for (int s = 0; s <= traj.m; ++s) {
    const double w = (s == 0 || s == traj.m) ? 0.5 : 1.0;
    b += w * dt * traj.trace_x1[s] * traj.trace_x1[s];
  }
  b *= 0.5;
  return std::abs(a + b - 0.5 * traj.int_rho_sq + traj.int_x_rho_ux);
}

TraceReport boundary_trace(const Trajectory& traj, TraceKind which) {
  if (which == TraceKind::sigma_at_1 && traj.tag != SystemTag::adjoint)
    throw PdeError("boundary_trace: sigma trace needs an adjoint run");
  TraceReport rep;
  rep.values = traj.trace_x1;
  const double dt = traj.dt();
  double acc = 0.0;
  for (size_t i = 0; i < rep.values.size(); ++i) {
    const double w = (i == 0 || i + 1 == rep.values.size()) ? 0.5 : 1.0;
    acc += w * dt * rep.values[i] * rep.values[i];
  }
  rep.l2_norm = std::sqrt(acc);
  return rep;
}

}  // namespace nsc
