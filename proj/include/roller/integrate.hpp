#pragma once

namespace roller {

// One classic RK4 step for an autonomous system. `f` maps a state vector to
// its time derivative; State must support scaling by double and addition
// (Eigen fixed-size vectors do).
template <typename State, typename Deriv>
State rk4_step(const State& x, double dt, Deriv&& f) {
  const State k1 = f(x);
  const State k2 = f(State(x + (0.5 * dt) * k1));
  const State k3 = f(State(x + (0.5 * dt) * k2));
  const State k4 = f(State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace roller
