#pragma once

#include <array>
#include <span>
#include <vector>

namespace roller::actuators {

enum class SpinDirection { CW, CCW };

// Gearbox torque convention. The wheel drive is modeled with torque divided
// by the transmission ratio (Paper); PowerConserving multiplies instead, as a
// physical speed reducer would.
enum class GearConvention { Paper, PowerConserving };

struct RotorParams {
  double kappa_f = 3.67875e-6;  // N s^2 / rad^2
  double kappa_m = 5.886e-8;    // N m s^2 / rad^2
  double p1 = 0.0;              // rad/s per dshot^2
  double p2 = 1.5;              // rad/s per dshot
  double p3 = 0.0;              // rad/s
  double omega_max = 3000.0;    // rad/s
  double dshot_min = 0.0;
  double dshot_max = 2000.0;

  double max_thrust() const { return kappa_f * omega_max * omega_max; }
  // Throws DomainError when coefficients are unusable (non-positive kappas or
  // omega_max, or a dshot map that decreases on the command interval).
  void validate() const;
};

struct RotorCommand {
  double dshot = 0.0;
  SpinDirection spin = SpinDirection::CW;
};

struct GearTrainParams {
  double ratio_i = 2.0;
  double wheel_radius = 0.18;  // m
  double tau_s_max = 6.0;      // N m
  double omega_s_max = 12.0;   // rad/s
  GearConvention convention = GearConvention::Paper;

  void validate() const;
};

struct ThrustTorque {
  double thrust;  // N
  double torque;  // N m
};

struct WheelOutput {
  double omega_w;  // rad/s
  double nu_w;     // m/s
  double tau_w;    // N m
  double force_w;  // N
  double power_s;  // W, servo output power
};

struct DshotSample {
  double dshot;
  double omega;
};

struct DshotFit {
  double p1, p2, p3;
  double rms_residual;
};

// Quadratic command-to-speed map, clamped to [0, omega_max]. Commands outside
// [dshot_min, dshot_max] are caller bugs and throw DomainError.
double rotor_speed_from_dshot(const RotorParams& params, const RotorCommand& cmd);

// Square-law thrust/torque at a given rotor speed. Negative speed throws.
ThrustTorque rotor_thrust_torque(const RotorParams& params, double omega);

// Rotor speed needed for a given thrust (inverse of the square law), clamped
// to omega_max. Used when converting allocated thrusts to speeds.
double rotor_speed_for_thrust(const RotorParams& params, double thrust);

// Hover-balance calibration: kappa_f such that the four rotors at the given
// speeds exactly carry m*g.
double calibrate_kappa_f(double vehicle_mass, const std::array<double, 4>& hover_omegas,
                         double gravity);

// Least-squares quadratic fit of (dshot, omega) samples. Needs >= 3 samples
// with at least 3 distinct dshot values; otherwise throws FitError.
DshotFit fit_dshot_map(std::span<const DshotSample> samples);

// Eq.-3 wheel kinematics/torque chain from servo torque and speed. Exceeding
// the servo limits throws SaturationError carrying clamped values; simulation
// code clamps before calling.
WheelOutput wheel_output(const GearTrainParams& params, double tau_s, double omega_s);

}  // namespace roller::actuators
