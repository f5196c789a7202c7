#include "roller/actuators.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "roller/errors.hpp"

namespace roller::actuators {

void RotorParams::validate() const {
  if (!(kappa_f > 0.0)) throw DomainError("rotor: kappa_f must be > 0");
  if (!(kappa_m > 0.0)) throw DomainError("rotor: kappa_m must be > 0");
  if (!(omega_max > 0.0)) throw DomainError("rotor: omega_max must be > 0");
  if (!(dshot_max > dshot_min)) throw DomainError("rotor: dshot_max must exceed dshot_min");
  // Monotonically non-decreasing speed map on the command interval: the
  // derivative 2*p1*u + p2 must not be negative at either endpoint of an
  // interval where the quadratic is monotone, i.e. at both ends.
  const double d_lo = 2.0 * p1 * dshot_min + p2;
  const double d_hi = 2.0 * p1 * dshot_max + p2;
  if (d_lo < 0.0 || d_hi < 0.0)
    throw DomainError("rotor: dshot map decreases on the command interval");
}

void GearTrainParams::validate() const {
  if (!(ratio_i > 0.0)) throw DomainError("gear: ratio_i must be > 0");
  if (!(wheel_radius > 0.0)) throw DomainError("gear: wheel_radius must be > 0");
  if (!(tau_s_max > 0.0)) throw DomainError("gear: tau_s_max must be > 0");
  if (!(omega_s_max > 0.0)) throw DomainError("gear: omega_s_max must be > 0");
}

double rotor_speed_from_dshot(const RotorParams& params, const RotorCommand& cmd) {
  if (cmd.dshot < params.dshot_min || cmd.dshot > params.dshot_max)
    throw DomainError("rotor command outside [dshot_min, dshot_max]");
  const double u = cmd.dshot;
  const double omega = params.p1 * u * u + params.p2 * u + params.p3;
  return std::clamp(omega, 0.0, params.omega_max);
}

ThrustTorque rotor_thrust_torque(const RotorParams& params, double omega) {
  if (omega < 0.0) throw DomainError("rotor speed must be >= 0");
  const double w2 = omega * omega;
  return {params.kappa_f * w2, params.kappa_m * w2};
}

double rotor_speed_for_thrust(const RotorParams& params, double thrust) {
  if (thrust < 0.0) throw DomainError("rotor thrust must be >= 0");
  return std::min(std::sqrt(thrust / params.kappa_f), params.omega_max);
}

double calibrate_kappa_f(double vehicle_mass, const std::array<double, 4>& hover_omegas,
                         double gravity) {
  if (!(vehicle_mass > 0.0)) throw DomainError("calibration: vehicle mass must be > 0");
  double sum_w2 = 0.0;
  for (double w : hover_omegas) {
    if (!(w > 0.0)) throw DomainError("calibration: hover speeds must all be > 0");
    sum_w2 += w * w;
  }
  return vehicle_mass * gravity / sum_w2;
}

DshotFit fit_dshot_map(std::span<const DshotSample> samples) {
  if (samples.size() < 3) throw FitError("dshot fit needs at least 3 samples");
  // Distinct command values; a quadratic needs three.
  std::vector<double> u_values;
  for (const auto& s : samples) {
    bool seen = false;
    for (double u : u_values)
      if (u == s.dshot) { seen = true; break; }
    if (!seen) u_values.push_back(s.dshot);
  }
  if (u_values.size() < 3) throw FitError("dshot fit needs 3 distinct command values");

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = samples[static_cast<size_t>(i)].dshot;
    A(i, 0) = u * u;
    A(i, 1) = u;
    A(i, 2) = 1.0;
    b(i) = samples[static_cast<size_t>(i)].omega;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3) throw FitError("dshot fit sample set is rank-deficient");
  const Eigen::Vector3d p = qr.solve(b);
  const double rms = std::sqrt((A * p - b).squaredNorm() / static_cast<double>(n));
  return {p(0), p(1), p(2), rms};
}

WheelOutput wheel_output(const GearTrainParams& params, double tau_s, double omega_s) {
  if (std::abs(tau_s) > params.tau_s_max || std::abs(omega_s) > params.omega_s_max) {
    const double tau_c = std::clamp(tau_s, -params.tau_s_max, params.tau_s_max);
    const double omega_c = std::clamp(omega_s, -params.omega_s_max, params.omega_s_max);
    throw SaturationError("servo command exceeds torque/speed limits", tau_c, omega_c);
  }
  WheelOutput out;
  out.omega_w = omega_s / params.ratio_i;
  out.nu_w = out.omega_w * params.wheel_radius;
  out.tau_w = params.convention == GearConvention::Paper ? tau_s / params.ratio_i
                                                         : tau_s * params.ratio_i;
  out.force_w = out.tau_w / params.wheel_radius;
  out.power_s = tau_s * omega_s;
  return out;
}

}  // namespace roller::actuators
