#pragma once

#include <functional>
#include <vector>

#include "nsc/moments.hpp"
#include "nsc/spaces.hpp"

namespace nsc {

enum class SystemTag { forward_auxiliary, forward_dirichlet, adjoint };

struct PdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time-indexed grid states plus the identity accumulators the verification
/// checks need. Snapshots are kept at a stride; traces and energies at every
/// step.
struct Trajectory {
  SystemTag tag = SystemTag::forward_auxiliary;
  int n = 0, m = 0;       // space cells, time steps
  double T = 0.0;
  int scheme_order = 2;
  std::vector<double> snapshot_times;
  std::vector<State> states;           // strided snapshots, first and last included
  std::vector<double> trace_x1;        // rho (or sigma) at x=1, every step
  std::vector<double> energy;          // (||rho||^2+||u||^2)/2, every step
  // accumulated over the run (trapezoid in t):
  double int_rho_sq = 0.0;             // iint rho^2 dx dt
  double int_x_rho_ux = 0.0;           // iint x rho u_x dx dt
  State initial, final_state;

  double dt() const { return T / m; }
  void check_finite() const;
};

using TimeSignal = std::function<double(double)>;
using SpaceTimeField = std::function<double(double t, double x)>;

/// Adjoint right-hand sides (f, g).
struct SourceTerm {
  SpaceTimeField f, g;
  static SourceTerm zero() {
    return {[](double, double) { return 0.0; },
            [](double, double) { return 0.0; }};
  }
};

struct SimOptions {
  int order = 2;           // 1: first-order upwind; 2: upwind-biased + Heun
  int snapshot_stride = 0; // 0: pick automatically (<= 65 snapshots)
  std::function<void(int step, double t, const std::vector<double>& rho,
                     const std::vector<double>& u)>
      step_hook;           // optional per-step observer
};

TimeSignal signal_of(const ControlSignal& p);

/// Transport + viscous system with the nonlocal density boundary condition
/// rho(t,0) = rho(t,1) + p(t). IMEX: explicit upwind transport, implicit
/// Crank-Nicolson diffusion; order 2 wraps the explicit part in a Heun pass.
Trajectory simulate_forward(const State& u0, const TimeSignal& p, int n, int m,
                            double T, const SimOptions& opts = {});

/// Same scheme with the inflow Dirichlet value rho(t,0) = h(t).
Trajectory simulate_dirichlet(const State& u0, const TimeSignal& h, int n,
                              int m, double T, const SimOptions& opts = {});

/// Backward solve of the adjoint system with terminal data and sources;
/// returned trajectory is indexed by forward time, trace_x1 holds sigma(.,1).
Trajectory simulate_adjoint(const SourceTerm& src, const State& vT, int n,
                            int m, double T, const SimOptions& opts = {});

struct ModalRun {
  Trajectory trajectory;
  std::vector<cplx> coeff0;       // projection of U0 on the forward family
  std::vector<cplx> coeffT;       // modal coefficients at t = T
  double gram_condition = 0.0;
  double max_terminal = 0.0;      // max_j |coeffT_j|
};

/// Evolves the forward-eigenfamily coefficients by their exact scalar ODEs
/// (boundary input from the duality pairing) and reconstructs grid states.
/// The forward eigenfunctions are the reflections x -> 1-x of the adjoint
/// ones at the same eigenvalue.
ModalRun modal_simulate(const State& u0, const ControlSignal& p,
                        const std::vector<EigenPair>& adjoint_pairs, int grid_n,
                        int snapshots = 17, double cond_limit = 1e8);

/// | iint rho f + iint u g - <U0, V(0)> - int sigma(t,1) p dt | from one
/// forward and one adjoint solve at resolution (n, m).
double transposition_defect(const State& u0, const TimeSignal& p,
                            const SourceTerm& src, int n, int m, double T,
                            int order = 2);

/// Defect of the x-weighted density identity
/// 1/2 int x (rho^2(T)-rho0^2) + 1/2 int rho^2(t,1) - 1/2 iint rho^2
///   + iint x rho u_x = 0.
double weighted_energy_defect(const Trajectory& traj);

struct TraceReport {
  std::vector<double> values;
  double l2_norm = 0.0;
};

enum class TraceKind { rho_at_1, sigma_at_1 };

TraceReport boundary_trace(const Trajectory& traj, TraceKind which);

}  // namespace nsc
