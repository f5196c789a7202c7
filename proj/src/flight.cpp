#include "roller/flight.hpp"

#include <algorithm>
#include <cmath>

#include "roller/errors.hpp"
#include "roller/integrate.hpp"

namespace roller::flight {

void FlightParams::validate() const {
  if (!(mass > 0.0)) throw DomainError("flight: mass must be > 0");
  if (!(prop_distance > 0.0)) throw DomainError("flight: prop_distance must be > 0");
  if (!inertia.isApprox(inertia.transpose(), 1e-12))
    throw DomainError("flight: inertia must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw DomainError("flight: inertia must be positive definite");
  if (!(torque_thrust_ratio > 0.0)) throw DomainError("flight: torque_thrust_ratio must be > 0");
  if (!(thrust_max_per_rotor > 0.0)) throw DomainError("flight: thrust_max_per_rotor must be > 0");
}

FlightState::Vec FlightState::to_vector() const {
  Vec v;
  v << position, attitude, velocity, attitude_rate;
  return v;
}

FlightState FlightState::from_vector(const Vec& v) {
  FlightState s;
  s.position = v.segment<3>(0);
  s.attitude = v.segment<3>(3);
  s.velocity = v.segment<3>(6);
  s.attitude_rate = v.segment<3>(9);
  return s;
}

Eigen::Matrix3d rotation_body_to_inertial(const Eigen::Vector3d& attitude) {
  return (Eigen::AngleAxisd(attitude.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(attitude.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(attitude.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Matrix3d euler_rate_to_body_rate(const Eigen::Vector3d& attitude) {
  const double cphi = std::cos(attitude.x()), sphi = std::sin(attitude.x());
  const double cth = std::cos(attitude.y()), sth = std::sin(attitude.y());
  Eigen::Matrix3d g;
  g << 1.0, 0.0, -sth,
       0.0, cphi, sphi * cth,
       0.0, -sphi, cphi * cth;
  return g;
}

ControlInputs mix_forces(const std::array<double, 4>& f, const std::array<double, 4>& tau,
                         double prop_distance) {
  for (double fi : f)
    if (fi < 0.0) throw DomainError("mix_forces: thrusts must be >= 0");
  ControlInputs u;
  u.U1 = f[0] + f[1] + f[2] + f[3];
  u.U2 = (f[1] - f[3]) * prop_distance / 2.0;
  u.U3 = (f[2] - f[0]) * prop_distance / 2.0;
  u.U4 = tau[1] + tau[3] - tau[0] - tau[2];
  return u;
}

namespace {

std::array<double, 4> solve_mix(const ControlInputs& u, const FlightParams& p) {
  const double gamma = p.torque_thrust_ratio;
  const double d = p.prop_distance;
  // F1+F3 and F2+F4 from U1 and U4; the differences from U2 and U3.
  const double a = (u.U1 - u.U4 / gamma) / 2.0;
  const double b = (u.U1 + u.U4 / gamma) / 2.0;
  return {a / 2.0 - u.U3 / d,   // F1
          b / 2.0 + u.U2 / d,   // F2
          a / 2.0 + u.U3 / d,   // F3
          b / 2.0 - u.U2 / d};  // F4
}

}  // namespace

InverseMixResult inverse_mix(const ControlInputs& u, const FlightParams& params) {
  const std::array<double, 4> raw = solve_mix(u, params);
  InverseMixResult out;
  for (int i = 0; i < 4; ++i) {
    if (raw[i] < -1e-12)
      throw AllocationError("inverse_mix: input requires negative rotor thrust", raw);
    double f = std::max(raw[i], 0.0);
    if (f > params.thrust_max_per_rotor) {
      f = params.thrust_max_per_rotor;
      out.clamped = true;
    }
    out.thrusts[i] = f;
  }
  return out;
}

InverseMixResult inverse_mix_clamped(const ControlInputs& u, const FlightParams& params) {
  const std::array<double, 4> raw = solve_mix(u, params);
  InverseMixResult out;
  for (int i = 0; i < 4; ++i) {
    out.thrusts[i] = std::clamp(raw[i], 0.0, params.thrust_max_per_rotor);
    if (out.thrusts[i] != raw[i]) out.clamped = true;
  }
  return out;
}

FlightState::Vec flight_derivative(const FlightState& state, const ControlInputs& u,
                                   const FlightParams& params) {
  if (std::abs(state.attitude.y()) >= kGimbalGuard)
    throw SingularityError("pitch inside the gimbal-lock guard band");

  const Eigen::Matrix3d rot = rotation_body_to_inertial(state.attitude);
  const Eigen::Vector3d accel =
      rot * Eigen::Vector3d(0.0, 0.0, u.U1) / params.mass -
      Eigen::Vector3d(0.0, 0.0, params.gravity);

  const Eigen::Vector3d omega_body =
      euler_rate_to_body_rate(state.attitude) * state.attitude_rate;
  const Eigen::Vector3d torque(u.U2, u.U3, u.U4);
  const Eigen::Vector3d attitude_accel =
      params.inertia.ldlt().solve(torque - omega_body.cross(params.inertia * omega_body));

  FlightState::Vec dv;
  dv << state.velocity, state.attitude_rate, accel, attitude_accel;
  return dv;
}

FlightState rk4_flight_step(const FlightState& state, const ControlInputs& u,
                            const FlightParams& params, double dt) {
  const auto f = [&](const FlightState::Vec& x) {
    return flight_derivative(FlightState::from_vector(x), u, params);
  };
  return FlightState::from_vector(rk4_step(state.to_vector(), dt, f));
}

ControllerGains ControllerGains::critically_damped(const FlightParams& params,
                                                   double attitude_wn, double yaw_wn,
                                                   double position_wn) {
  ControllerGains g{};
  g.kp_roll = params.inertia(0, 0) * attitude_wn * attitude_wn;
  g.kd_roll = 2.0 * params.inertia(0, 0) * attitude_wn;
  g.kp_pitch = params.inertia(1, 1) * attitude_wn * attitude_wn;
  g.kd_pitch = 2.0 * params.inertia(1, 1) * attitude_wn;
  g.kp_yaw = params.inertia(2, 2) * yaw_wn * yaw_wn;
  g.kd_yaw = 2.0 * params.inertia(2, 2) * yaw_wn;
  g.kp_pos_xy = position_wn * position_wn;
  g.kd_pos_xy = 2.0 * position_wn;
  g.kp_pos_z = position_wn * position_wn;
  g.kd_pos_z = 2.0 * position_wn;
  return g;
}

ControllerOutput attitude_position_controller(const FlightState& state,
                                              const FlightReference& ref,
                                              const ControllerGains& gains,
                                              const FlightParams& params) {
  ControllerOutput out;
  Eigen::Vector3d att_sp = ref.attitude;
  Eigen::Vector3d rate_sp = ref.attitude_rate;

  const double az_des = gains.kp_pos_z * (ref.position.z() - state.position.z()) +
                        gains.kd_pos_z * (ref.velocity.z() - state.velocity.z());

  if (ref.position_hold) {
    const double ax = gains.kp_pos_xy * (ref.position.x() - state.position.x()) +
                      gains.kd_pos_xy * (ref.velocity.x() - state.velocity.x());
    const double ay = gains.kp_pos_xy * (ref.position.y() - state.position.y()) +
                      gains.kd_pos_xy * (ref.velocity.y() - state.velocity.y());
    const double cpsi = std::cos(state.attitude.z()), spsi = std::sin(state.attitude.z());
    const double g = params.gravity;
    att_sp.y() = std::clamp((ax * cpsi + ay * spsi) / g, -gains.tilt_limit, gains.tilt_limit);
    att_sp.x() = std::clamp((ax * spsi - ay * cpsi) / g, -gains.tilt_limit, gains.tilt_limit);
    rate_sp.x() = rate_sp.y() = 0.0;
  }

  const double cphi = std::cos(state.attitude.x());
  const double cth = std::cos(state.attitude.y());
  const double tilt = std::max(cphi * cth, 0.5);  // bounded thrust compensation
  double thrust = params.mass * (params.gravity + az_des) / tilt;
  if (thrust < 0.0) {
    thrust = 0.0;
    out.thrust_saturated = true;
  }
  const double thrust_cap = 4.0 * params.thrust_max_per_rotor;
  if (thrust > thrust_cap) {
    thrust = thrust_cap;
    out.thrust_saturated = true;
  }

  out.u.U1 = thrust;
  out.u.U2 = gains.kp_roll * (att_sp.x() - state.attitude.x()) +
             gains.kd_roll * (rate_sp.x() - state.attitude_rate.x());
  out.u.U3 = gains.kp_pitch * (att_sp.y() - state.attitude.y()) +
             gains.kd_pitch * (rate_sp.y() - state.attitude_rate.y());
  out.u.U4 = gains.kp_yaw * (att_sp.z() - state.attitude.z()) +
             gains.kd_yaw * (rate_sp.z() - state.attitude_rate.z());
  out.attitude_setpoint = att_sp;
  return out;
}

}  // namespace roller::flight
