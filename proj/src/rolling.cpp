#include "roller/rolling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roller/errors.hpp"
#include "roller/integrate.hpp"

namespace roller::rolling {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

double wrap_to_pi(double angle) {
  angle = std::fmod(angle + M_PI, 2.0 * M_PI);
  if (angle < 0.0) angle += 2.0 * M_PI;
  return angle - M_PI;
}
}  // namespace

bool InputBounds::contains(const UnicycleInput& u) const {
  return std::abs(u.alpha) <= alpha_max + 1e-12 && std::abs(u.omega) <= omega_max + 1e-12;
}

Eigen::Vector4d unicycle_derivative(const UnicycleState& state, const UnicycleInput& input) {
  return {state.nu * std::cos(state.theta), state.nu * std::sin(state.theta), input.alpha,
          input.omega};
}

Eigen::Vector4d unicycle_derivative(const UnicycleState& state, const UnicycleInput& input,
                                    const InputBounds& bounds) {
  if (!bounds.contains(input)) throw DomainError("unicycle input outside configured bounds");
  return unicycle_derivative(state, input);
}

Jacobians unicycle_jacobians(const UnicycleState& state, const UnicycleInput&) {
  const double c = std::cos(state.theta), s = std::sin(state.theta);
  Jacobians j;
  j.dfdx.setZero();
  j.dfdx(0, 2) = c;
  j.dfdx(0, 3) = -state.nu * s;
  j.dfdx(1, 2) = s;
  j.dfdx(1, 3) = state.nu * c;
  j.dfdu.setZero();
  j.dfdu(2, 0) = 1.0;
  j.dfdu(3, 1) = 1.0;
  return j;
}

double yaw_torque_from_thrusts(const std::array<double, 4>& f, double frame_d) {
  return (f[0] + f[1] - f[2] - f[3]) * kSqrt2 * frame_d / 4.0;
}

RollingActuation allocate_rolling_actuators(const UnicycleInput& input,
                                            const UnicycleState& state, double yaw_accel,
                                            const RollingActuationParams& params) {
  (void)input;  // speed tracking keys off the actual state, not the accel command
  RollingActuation out;
  out.servo_omega = params.gear_ratio * state.nu / params.wheel_radius;

  const double tau_demand = params.yaw_inertia * yaw_accel;
  const double delta = tau_demand / (kSqrt2 * params.frame_d);
  const double hi = params.bias_thrust + delta;
  const double lo = params.bias_thrust - delta;
  const auto clamp = [&](double f) {
    const double c = std::clamp(f, 0.0, params.thrust_max);
    if (c != f) out.saturated = true;
    return c;
  };
  out.thrusts = {clamp(hi), clamp(hi), clamp(lo), clamp(lo)};
  out.yaw_torque = yaw_torque_from_thrusts(out.thrusts, params.frame_d);
  return out;
}

std::vector<UnicycleState> rollout(const UnicycleState& initial,
                                   std::span<const UnicycleInput> inputs, double dt,
                                   const InputBounds& bounds) {
  std::vector<UnicycleState> states;
  states.reserve(inputs.size() + 1);
  states.push_back(initial);
  for (const auto& u : inputs) {
    if (!bounds.contains(u)) throw DomainError("rollout input outside configured bounds");
    const auto f = [&](const Eigen::Vector4d& x) {
      return unicycle_derivative(UnicycleState::from_vector(x), u);
    };
    states.push_back(UnicycleState::from_vector(rk4_step(states.back().to_vector(), dt, f)));
  }
  return states;
}

std::vector<UnicycleState> predict_euler(const UnicycleState& initial,
                                         std::span<const UnicycleInput> inputs, double dt) {
  std::vector<UnicycleState> states;
  states.reserve(inputs.size() + 1);
  states.push_back(initial);
  for (const auto& u : inputs) {
    const Eigen::Vector4d x = states.back().to_vector();
    states.push_back(UnicycleState::from_vector(x + dt * unicycle_derivative(states.back(), u)));
  }
  return states;
}

void CostWeights::validate() const {
  if (horizon < 1) throw DomainError("cost: horizon must be >= 1");
  if (!(dt > 0.0)) throw DomainError("cost: dt must be > 0");
  if (!S.isApprox(S.transpose(), 1e-12) || !Q.isApprox(Q.transpose(), 1e-12) ||
      !R.isApprox(R.transpose(), 1e-12))
    throw DomainError("cost: weight matrices must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es_s(S), es_q(Q);
  if (es_s.eigenvalues().minCoeff() < -1e-12 || es_q.eigenvalues().minCoeff() < -1e-12)
    throw DomainError("cost: S and Q must be positive semidefinite");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es_r(R);
  if (es_r.eigenvalues().minCoeff() <= 0.0)
    throw DomainError("cost: R must be positive definite");
}

std::vector<UnicycleState> ReferenceTrajectory::derive_states() const {
  std::vector<UnicycleState> states;
  states.reserve(positions.size());
  double heading = heading_hint;
  for (size_t k = 0; k < positions.size(); ++k) {
    UnicycleState s;
    s.px = positions[k].x();
    s.py = positions[k].y();
    if (k + 1 < positions.size()) {
      const Eigen::Vector2d d = positions[k + 1] - positions[k];
      const double len = d.norm();
      s.nu = len / dt;
      if (len > 1e-12) heading += wrap_to_pi(std::atan2(d.y(), d.x()) - heading);
    } else if (k > 0) {
      s.nu = states.back().nu;  // hold the last derived speed/heading
    }
    s.theta = heading;
    states.push_back(s);
  }
  return states;
}

double evaluate_cost(std::span<const UnicycleState> states,
                     std::span<const UnicycleInput> inputs,
                     std::span<const UnicycleState> ref_states, const CostWeights& weights) {
  const int n = weights.horizon;
  if (states.size() != static_cast<size_t>(n) + 1)
    throw DomainError("evaluate_cost: states must have horizon+1 entries");
  if (inputs.size() != static_cast<size_t>(n))
    throw DomainError("evaluate_cost: inputs must have horizon entries");
  if (ref_states.size() < static_cast<size_t>(n) + 1)
    throw DomainError("evaluate_cost: reference shorter than horizon");

  const Eigen::Vector4d e_n = states[n].to_vector() - ref_states[n].to_vector();
  double cost = e_n.dot(weights.S * e_n);
  for (int k = 1; k < n; ++k) {
    const Eigen::Vector4d e = states[k].to_vector() - ref_states[k].to_vector();
    const Eigen::Vector2d u(inputs[k].alpha, inputs[k].omega);
    cost += e.dot(weights.Q * e) + u.dot(weights.R * u);
  }
  return cost;
}

namespace {

struct Problem {
  const UnicycleState& initial;
  const std::vector<UnicycleState>& ref_states;
  const CostWeights& weights;
  const InputBounds& bounds;

  int n() const { return weights.horizon; }

  std::vector<UnicycleInput> unpack(const Eigen::VectorXd& flat) const {
    std::vector<UnicycleInput> u(static_cast<size_t>(n()));
    for (int k = 0; k < n(); ++k) u[static_cast<size_t>(k)] = {flat(2 * k), flat(2 * k + 1)};
    return u;
  }

  Eigen::VectorXd project(Eigen::VectorXd flat) const {
    for (int k = 0; k < n(); ++k) {
      flat(2 * k) = std::clamp(flat(2 * k), -bounds.alpha_max, bounds.alpha_max);
      flat(2 * k + 1) = std::clamp(flat(2 * k + 1), -bounds.omega_max, bounds.omega_max);
    }
    return flat;
  }

  double cost(const Eigen::VectorXd& flat) const {
    const auto u = unpack(flat);
    const auto states = predict_euler(initial, u, weights.dt);
    return evaluate_cost(states, u, ref_states, weights);
  }

  // Adjoint gradient through the Euler prediction chain.
  Eigen::VectorXd gradient(const Eigen::VectorXd& flat) const {
    const auto u = unpack(flat);
    const auto states = predict_euler(initial, u, weights.dt);
    const int horizon = n();
    Eigen::VectorXd grad(2 * horizon);
    Eigen::Vector4d lambda =
        2.0 * weights.S *
        (states[static_cast<size_t>(horizon)].to_vector() -
         ref_states[static_cast<size_t>(horizon)].to_vector());
    for (int k = horizon - 1; k >= 0; --k) {
      const auto& xk = states[static_cast<size_t>(k)];
      const auto& uk = u[static_cast<size_t>(k)];
      const Jacobians jac = unicycle_jacobians(xk, uk);
      // B_k' lambda with B_k = dt * dfdu (rows 2 and 3 are the identity part)
      Eigen::Vector2d gu = weights.dt * (jac.dfdu.transpose() * lambda);
      if (k >= 1) gu += 2.0 * weights.R * Eigen::Vector2d(uk.alpha, uk.omega);
      grad(2 * k) = gu(0);
      grad(2 * k + 1) = gu(1);
      Eigen::Vector4d lx = (Eigen::Matrix4d::Identity() + weights.dt * jac.dfdx).transpose() * lambda;
      if (k >= 1)
        lx += 2.0 * weights.Q *
              (xk.to_vector() - ref_states[static_cast<size_t>(k)].to_vector());
      lambda = lx;
    }
    return grad;
  }
};

}  // namespace

OptimizeResult optimize_tracking(const UnicycleState& initial, const ReferenceTrajectory& ref,
                                 const CostWeights& weights, const InputBounds& bounds,
                                 const OptimizeOptions& options,
                                 std::span<const UnicycleInput> warm_start) {
  weights.validate();
  const auto ref_states = ref.derive_states();
  const int n = weights.horizon;
  if (ref_states.size() < static_cast<size_t>(n) + 1)
    throw DomainError("optimize_tracking: reference shorter than horizon");

  Problem prob{initial, ref_states, weights, bounds};

  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n);
  double cost = prob.cost(u);
  if (warm_start.size() == static_cast<size_t>(n)) {
    Eigen::VectorXd w(2 * n);
    for (int k = 0; k < n; ++k) {
      w(2 * k) = warm_start[static_cast<size_t>(k)].alpha;
      w(2 * k + 1) = warm_start[static_cast<size_t>(k)].omega;
    }
    w = prob.project(w);
    const double wcost = prob.cost(w);
    if (wcost < cost) {
      u = w;
      cost = wcost;
    }
  }

  Eigen::VectorXd grad = prob.gradient(u);
  double step = 1.0 / (1.0 + grad.norm());
  OptimizeResult result;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double pg_norm = (u - prob.project(u - grad)).norm();
    if (pg_norm < options.tolerance) {
      result.converged = true;
      break;
    }
    double t = step;
    Eigen::VectorXd candidate;
    double cand_cost = cost;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      candidate = prob.project(u - t * grad);
      cand_cost = prob.cost(candidate);
      const double decrease = grad.dot(candidate - u);
      if (cand_cost <= cost + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || (candidate - u).norm() == 0.0) break;  // stalled; return best so far

    const Eigen::VectorXd new_grad = prob.gradient(candidate);
    const Eigen::VectorXd s = candidate - u;
    const Eigen::VectorXd y = new_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-16) step = std::clamp(s.dot(s) / sy, 1e-10, 1e6);
    u = candidate;
    cost = cand_cost;
    grad = new_grad;
  }

  result.inputs = prob.unpack(u);
  result.cost = cost;
  result.iterations = it;
  return result;
}

OracleResult brute_force_oracle(const UnicycleState& initial, const ReferenceTrajectory& ref,
                                const CostWeights& weights,
                                std::span<const double> alpha_levels,
                                std::span<const double> omega_levels, std::uint64_t cap) {
  weights.validate();
  if (alpha_levels.empty() || omega_levels.empty())
    throw DomainError("oracle: input level sets must be non-empty");
  const auto ref_states = ref.derive_states();
  const int n = weights.horizon;
  if (ref_states.size() < static_cast<size_t>(n) + 1)
    throw DomainError("oracle: reference shorter than horizon");

  const std::uint64_t per_step =
      static_cast<std::uint64_t>(alpha_levels.size()) * omega_levels.size();
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (total > cap / per_step) throw EnumerationCapError("oracle enumeration exceeds cap");
    total *= per_step;
  }

  std::vector<size_t> ia(static_cast<size_t>(n), 0), iw(static_cast<size_t>(n), 0);
  std::vector<UnicycleInput> u(static_cast<size_t>(n));
  OracleResult best;
  best.cost = std::numeric_limits<double>::infinity();

  for (std::uint64_t c = 0; c < total; ++c) {
    for (int k = 0; k < n; ++k)
      u[static_cast<size_t>(k)] = {alpha_levels[ia[static_cast<size_t>(k)]],
                                   omega_levels[iw[static_cast<size_t>(k)]]};
    const auto states = predict_euler(initial, u, weights.dt);
    const double cost = evaluate_cost(states, u, ref_states, weights);
    if (cost < best.cost) {
      best.cost = cost;
      best.inputs = u;
    }
    // odometer: alpha digit first, then omega, step by step
    for (int k = 0; k < n; ++k) {
      auto& a = ia[static_cast<size_t>(k)];
      if (++a < alpha_levels.size()) break;
      a = 0;
      auto& w = iw[static_cast<size_t>(k)];
      if (++w < omega_levels.size()) break;
      w = 0;
    }
  }
  best.candidates = total;
  return best;
}

}  // namespace roller::rolling
