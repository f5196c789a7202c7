#include "roller/transition.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "roller/errors.hpp"
#include "roller/integrate.hpp"

namespace roller::transition {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
}

void TransitionParams::validate() const {
  if (!(mass > 0.0)) throw DomainError("transition: mass must be > 0");
  if (!(pivot_length > 0.0)) throw DomainError("transition: pivot_length must be > 0");
  if (!(lever > 0.0)) throw DomainError("transition: lever must be > 0");
  if (!(gain_kp > 0.0) || !(gain_kv > 0.0))
    throw DomainError("transition: gains must be > 0");
  if (!(thrust_pair_max > 0.0)) throw DomainError("transition: thrust_pair_max must be > 0");
}

PendulumDerivative pendulum_derivative(const PendulumState& state, double tau,
                                       const TransitionParams& params) {
  if (state.theta < kThetaMin || state.theta > kThetaMax)
    throw GuardError("tilt outside the transition envelope");
  const double ml2 = params.mass * params.pivot_length * params.pivot_length;
  const double gravity_moment =
      params.mass * params.pivot_length * params.gravity * std::cos(state.theta);
  return {state.theta_dot, (tau - gravity_moment) / ml2};
}

double feedback_linearize(const PendulumState& state, double tau_prime,
                          const TransitionParams& params) {
  const double alpha = params.mass * params.pivot_length * params.pivot_length;
  const double beta =
      params.mass * params.pivot_length * params.gravity * std::cos(state.theta);
  return alpha * tau_prime + beta;
}

double pd_tracking_law(const PendulumState& state, const TrackingReference& ref,
                       const TransitionParams& params) {
  return ref.theta_ddot + params.gain_kv * (ref.theta_dot - state.theta_dot) +
         params.gain_kp * (ref.theta - state.theta);
}

PairThrust allocate_pair_thrust(double tau, const TransitionParams& params) {
  if (tau < 0.0 && !params.bidirectional_authority)
    throw AllocationError("negative pivot torque with no braking authority",
                          {tau / (2.0 * params.lever), 0.0, 0.0, tau / (2.0 * params.lever)});
  PairThrust out;
  double f = tau / (2.0 * params.lever);
  if (std::abs(f) > params.thrust_pair_max) {
    f = std::copysign(params.thrust_pair_max, f);
    out.clamped = true;
  }
  out.front = out.rear = f;
  return out;
}

TrackingReference QuinticProfile::at(double t) const {
  const double delta = theta_end - theta_start;
  if (t <= 0.0) return {theta_start, 0.0, 0.0};
  if (t >= duration) return {theta_end, 0.0, 0.0};
  const double s = t / duration;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  TrackingReference ref;
  ref.theta = theta_start + delta * (10.0 * s3 - 15.0 * s4 + 6.0 * s5);
  ref.theta_dot = delta / duration * (30.0 * s2 - 60.0 * s3 + 30.0 * s4);
  ref.theta_ddot = delta / (duration * duration) * (60.0 * s - 180.0 * s2 + 120.0 * s3);
  return ref;
}

QuinticProfile default_profile(Direction direction, double duration) {
  if (direction == Direction::ToRolling) return {0.0, kHalfPi, duration};
  return {kHalfPi, 0.0, duration};
}

PendulumState transition_step(const PendulumState& state, const TrackingReference& ref,
                              const TransitionParams& params, double dt,
                              StepOutputs* outputs) {
  const double tau_prime = pd_tracking_law(state, ref, params);
  const double tau_cmd = feedback_linearize(state, tau_prime, params);
  const PairThrust pair = allocate_pair_thrust(tau_cmd, params);
  // Torque actually delivered by the (possibly clamped) pair.
  const double tau = (pair.front + pair.rear) * params.lever;
  if (outputs) *outputs = {tau, tau_prime, pair};

  const Eigen::Vector2d x(state.theta, state.theta_dot);
  const auto f = [&](const Eigen::Vector2d& v) {
    const auto d = pendulum_derivative({v(0), v(1)}, tau, params);
    return Eigen::Vector2d(d.theta_dot, d.theta_ddot);
  };
  const Eigen::Vector2d next = rk4_step(x, dt, f);
  return {next(0), next(1)};
}

TransitionResult run_transition(const PendulumState& initial, Direction direction,
                                const QuinticProfile& profile, const TransitionParams& params,
                                double dt, double settle_time, double theta_tol,
                                double rate_tol) {
  TransitionResult result;
  PendulumState state = initial;
  (void)direction;  // the profile already encodes the endpoints
  const double theta_target = profile.theta_end;
  const int steps = static_cast<int>(std::llround((profile.duration + settle_time) / dt));

  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const TrackingReference ref = profile.at(t);
    StepOutputs out;
    PendulumState next;
    try {
      next = transition_step(state, ref, params, dt, &out);
    } catch (const GuardError& e) {
      result.trace.push_back({t, state.theta, state.theta_dot, 0.0, 0.0, 0.0});
      result.final_state = state;
      result.failure_reason = e.what();
      return result;
    }
    result.trace.push_back({t, state.theta, state.theta_dot, out.tau, out.pair.front,
                            out.pair.rear});
    if (k == steps) break;
    state = next;
    if (state.theta < kThetaMin || state.theta > kThetaMax) {
      result.final_state = state;
      result.failure_reason = "tilt left the operational envelope";
      return result;
    }
  }

  result.final_state = state;
  const bool converged = std::abs(state.theta - theta_target) < theta_tol &&
                         std::abs(state.theta_dot) < rate_tol;
  result.success = converged;
  if (!converged) result.failure_reason = "terminal tolerance not met";
  return result;
}

}  // namespace roller::transition
