#pragma once

#include <string>
#include <vector>

namespace roller::transition {

// Operational tilt envelope: theta = 0 is the flight pose (body horizontal),
// theta = pi/2 the rolling pose (body upright).
inline constexpr double kThetaMin = -0.2;
inline constexpr double kThetaMax = 1.5707963267948966 + 0.2;

struct TransitionParams {
  double mass = 1.5;          // kg
  double pivot_length = 0.10; // m, center of gravity above the contact line
  double lever = 0.11;        // m, rotor-pair moment arm about the pivot
  double gravity = 9.81;
  double gain_kp = 25.0;      // 1/s^2
  double gain_kv = 10.0;      // 1/s
  double thrust_pair_max = 20.0;  // N, per rotor of the pair
  // Whether the opposite rotor pair may supply reverse moment. Without it,
  // negative torque demands are infeasible.
  bool bidirectional_authority = true;

  void validate() const;
};

struct PendulumState {
  double theta = 0.0;      // rad
  double theta_dot = 0.0;  // rad/s
};

struct PendulumDerivative {
  double theta_dot;
  double theta_ddot;
};

struct TrackingReference {
  double theta;
  double theta_dot;
  double theta_ddot;
};

// Net pair thrust realizing a pivot torque. Negative values mean the reverse
// pair pushes; `clamped` marks per-rotor saturation.
struct PairThrust {
  double front;  // N, rotor 1 share (signed)
  double rear;   // N, rotor 4 share (signed)
  bool clamped = false;
};

// Inverted-pendulum tilt dynamics about the wheel contact line. Throws
// GuardError outside the envelope.
PendulumDerivative pendulum_derivative(const PendulumState& state, double tau,
                                       const TransitionParams& params);

// Computed-torque law: cancels inertia scaling and the gravity moment so the
// closed-form tilt acceleration equals tau_prime.
double feedback_linearize(const PendulumState& state, double tau_prime,
                          const TransitionParams& params);

// Feedforward + PD tracking in the linearized coordinates.
double pd_tracking_law(const PendulumState& state, const TrackingReference& ref,
                       const TransitionParams& params);

// Splits a pivot torque across the rotor pair: front = rear = tau / (2 * lever),
// clamped per rotor. Negative torque without bidirectional authority throws
// AllocationError.
PairThrust allocate_pair_thrust(double tau, const TransitionParams& params);

// Smooth tilt reference with zero boundary velocity and acceleration; holds
// the endpoint beyond [0, duration].
struct QuinticProfile {
  double theta_start;
  double theta_end;
  double duration;

  TrackingReference at(double t) const;
};

enum class Direction { ToRolling, ToFlying };

QuinticProfile default_profile(Direction direction, double duration);

struct TransitionSample {
  double t;
  double theta;
  double theta_dot;
  double tau;
  double f_front;
  double f_rear;
};

struct StepOutputs {
  double tau = 0.0;
  double tau_prime = 0.0;
  PairThrust pair;
};

// One closed-loop step (PD law -> linearizing torque -> pair allocation ->
// RK4 on the pendulum). The torque actually applied is the one realized by
// the (possibly clamped) pair thrusts.
PendulumState transition_step(const PendulumState& state, const TrackingReference& ref,
                              const TransitionParams& params, double dt,
                              StepOutputs* outputs = nullptr);

struct TransitionResult {
  std::vector<TransitionSample> trace;
  bool success = false;
  PendulumState final_state;
  std::string failure_reason;
};

// Full closed-loop transition: profile tracking plus a settling window, with
// terminal tolerances on tilt and tilt rate. Envelope exit aborts with the
// trace preserved.
TransitionResult run_transition(const PendulumState& initial, Direction direction,
                                const QuinticProfile& profile, const TransitionParams& params,
                                double dt = 1e-3, double settle_time = 1.0,
                                double theta_tol = 0.02, double rate_tol = 0.05);

}  // namespace roller::transition
