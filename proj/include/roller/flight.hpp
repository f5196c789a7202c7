#pragma once

#include <array>

#include <Eigen/Dense>

namespace roller::flight {

// Pitch magnitude beyond which the Euler-angle dynamics refuse to evaluate
// (85 deg guard band short of the 90 deg singularity).
inline constexpr double kGimbalGuard = 1.4835298641951802;

struct FlightParams {
  double mass = 1.5;  // kg
  Eigen::Matrix3d inertia = Eigen::Vector3d(0.02, 0.02, 0.035).asDiagonal();
  double prop_distance = 0.22;  // m, diagonal propeller distance D
  double gravity = 9.81;        // m/s^2
  // Needed to invert the mixer: per-rotor torque/thrust ratio and thrust cap.
  double torque_thrust_ratio = 0.016;
  double thrust_max_per_rotor = 33.10875;  // N

  void validate() const;
};

// Euler-angle rigid-body state: attitude is [phi, theta, psi] (roll, pitch,
// yaw), attitude_rate its time derivative (not the body angular velocity).
struct FlightState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d attitude = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d attitude_rate = Eigen::Vector3d::Zero();

  using Vec = Eigen::Matrix<double, 12, 1>;
  Vec to_vector() const;
  static FlightState from_vector(const Vec& v);
};

struct ControlInputs {
  double U1 = 0.0;  // collective thrust, N
  double U2 = 0.0;  // roll torque, N m
  double U3 = 0.0;  // pitch torque, N m
  double U4 = 0.0;  // yaw torque, N m
};

// Body-to-inertial rotation for Z-Y-X Euler angles.
Eigen::Matrix3d rotation_body_to_inertial(const Eigen::Vector3d& attitude);

// Maps Euler-angle rates to the body angular velocity.
Eigen::Matrix3d euler_rate_to_body_rate(const Eigen::Vector3d& attitude);

// Thrusts/torques of rotors 1..4 into collective thrust and body torques.
ControlInputs mix_forces(const std::array<double, 4>& thrusts,
                         const std::array<double, 4>& torques, double prop_distance);

struct InverseMixResult {
  std::array<double, 4> thrusts;
  bool clamped = false;  // any rotor at thrust_max_per_rotor
};

// Per-rotor thrusts realizing the given inputs. Thrusts above the cap clamp
// (flagged); a solution requiring negative thrust throws AllocationError
// carrying the unclamped values.
InverseMixResult inverse_mix(const ControlInputs& u, const FlightParams& params);

// Like inverse_mix but clamps on both ends instead of throwing. For use
// inside simulation loops where saturation is physical.
InverseMixResult inverse_mix_clamped(const ControlInputs& u, const FlightParams& params);

// Time derivative of the 12-dim flight state. Throws SingularityError inside
// the gimbal-lock guard band.
FlightState::Vec flight_derivative(const FlightState& state, const ControlInputs& u,
                                   const FlightParams& params);

FlightState rk4_flight_step(const FlightState& state, const ControlInputs& u,
                            const FlightParams& params, double dt);

struct FlightReference {
  bool position_hold = true;  // false = stabilize: attitude commanded directly
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d attitude = Eigen::Vector3d::Zero();       // stabilize setpoint + yaw
  Eigen::Vector3d attitude_rate = Eigen::Vector3d::Zero();
};

struct ControllerGains {
  double kp_roll, kd_roll;    // torque per rad, per rad/s
  double kp_pitch, kd_pitch;
  double kp_yaw, kd_yaw;
  double kp_pos_xy, kd_pos_xy;  // desired-acceleration gains
  double kp_pos_z, kd_pos_z;
  double tilt_limit = 0.5;  // rad, cap on position-loop attitude setpoints

  // Critically damped pole placement on the hover linearization.
  static ControllerGains critically_damped(const FlightParams& params, double attitude_wn,
                                           double yaw_wn, double position_wn);
};

struct ControllerOutput {
  ControlInputs u;
  bool thrust_saturated = false;
  Eigen::Vector3d attitude_setpoint = Eigen::Vector3d::Zero();
};

// Cascaded position -> attitude PD controller for hover-regime tracking.
// U1 is always >= 0.
ControllerOutput attitude_position_controller(const FlightState& state,
                                              const FlightReference& ref,
                                              const ControllerGains& gains,
                                              const FlightParams& params);

}  // namespace roller::flight
