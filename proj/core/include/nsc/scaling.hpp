#pragma once

#include <cmath>
#include <stdexcept>

namespace nsc {

/// Physical constants of the linearized barotropic system: steady state
/// (Q0, V0), viscosity nu, pressure law a rho^gamma, interval length L.
struct ScalingParams {
  double Q0 = 1.0, V0 = 1.0, nu = 1.0, a = 1.0, gamma = 1.0, L = 1.0;

  void validate() const {
    if (!(Q0 > 0 && V0 > 0 && nu > 0 && a > 0 && L > 0))
      throw std::invalid_argument("ScalingParams: all fields must be > 0");
    if (!(gamma >= 1.0))
      throw std::invalid_argument("ScalingParams: gamma must be >= 1");
  }
};

struct Nondimensional {
  double b, delta, alpha, beta;
};

/// Change of variables that reduces the linearized system to unit transport
/// and diffusion coefficients with coupling b.
inline Nondimensional nondimensionalize(const ScalingParams& p) {
  p.validate();
  const double root = std::sqrt(p.a * p.gamma * std::pow(p.Q0, p.gamma - 3.0));
  Nondimensional n;
  n.alpha = 1.0 / root;
  n.beta = p.Q0 * p.V0 * p.V0 / p.nu;
  n.delta = p.Q0 * p.V0 / p.nu;
  n.b = p.Q0 / p.V0 * root;
  return n;
}

}  // namespace nsc
