#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace roller::rolling {

struct UnicycleState {
  double px = 0.0;     // m
  double py = 0.0;     // m
  double nu = 0.0;     // m/s, forward speed
  double theta = 0.0;  // rad, heading (unwrapped)

  Eigen::Vector4d to_vector() const { return {px, py, nu, theta}; }
  static UnicycleState from_vector(const Eigen::Vector4d& v) {
    return {v(0), v(1), v(2), v(3)};
  }
};

struct UnicycleInput {
  double alpha = 0.0;  // m/s^2
  double omega = 0.0;  // rad/s, yaw rate
};

struct InputBounds {
  double alpha_max = 1.0;
  double omega_max = 2.0;

  bool contains(const UnicycleInput& u) const;
};

// (px_dot, py_dot, nu_dot, theta_dot) = (nu cos, nu sin, alpha, omega).
Eigen::Vector4d unicycle_derivative(const UnicycleState& state, const UnicycleInput& input);

// Bound-checked variant for the API boundary; throws DomainError.
Eigen::Vector4d unicycle_derivative(const UnicycleState& state, const UnicycleInput& input,
                                    const InputBounds& bounds);

struct Jacobians {
  Eigen::Matrix4d dfdx;
  Eigen::Matrix<double, 4, 2> dfdu;
};

Jacobians unicycle_jacobians(const UnicycleState& state, const UnicycleInput& input);

// Differential rotor yaw torque: (F1 + F2 - F3 - F4) * sqrt(2) * D / 4.
double yaw_torque_from_thrusts(const std::array<double, 4>& thrusts, double frame_d);

struct RollingActuationParams {
  double gear_ratio = 2.0;
  double wheel_radius = 0.18;   // m
  double frame_d = 0.22;        // m
  double yaw_inertia = 0.035;   // kg m^2, I_zz
  double bias_thrust = 0.0;     // N, per-rotor collective during rolling
  double thrust_max = 33.10875; // N, per rotor
};

struct RollingActuation {
  double servo_omega = 0.0;              // rad/s
  std::array<double, 4> thrusts{};       // N, rotors 1..4
  double yaw_torque = 0.0;               // N m actually realized
  bool saturated = false;
};

// Servo speed to roll at the state's forward speed plus a pairwise rotor
// differential realizing the yaw torque I_zz * yaw_accel. Thrusts clamp to
// [0, thrust_max] (flagged); the reported yaw_torque is the realized one.
RollingActuation allocate_rolling_actuators(const UnicycleInput& input,
                                            const UnicycleState& state, double yaw_accel,
                                            const RollingActuationParams& params);

// RK4 truth propagation with zero-order-hold inputs; result has one more
// state than there are inputs. Inputs are bound-checked.
std::vector<UnicycleState> rollout(const UnicycleState& initial,
                                   std::span<const UnicycleInput> inputs, double dt,
                                   const InputBounds& bounds);

// Forward-Euler prediction chain used by the optimizer and the oracle.
std::vector<UnicycleState> predict_euler(const UnicycleState& initial,
                                         std::span<const UnicycleInput> inputs, double dt);

struct CostWeights {
  Eigen::Matrix4d S = 10.0 * Eigen::Vector4d(10.0, 10.0, 1.0, 1.0).asDiagonal().toDenseMatrix();
  Eigen::Matrix4d Q = Eigen::Vector4d(10.0, 10.0, 1.0, 1.0).asDiagonal();
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  int horizon = 20;
  double dt = 0.05;

  void validate() const;
};

// Planar position reference; speed and heading references are derived by
// finite differencing so the full 4-state error is defined.
struct ReferenceTrajectory {
  std::vector<Eigen::Vector2d> positions;
  double dt = 0.05;
  // Branch anchor for the unwrapped headings; receding-horizon callers set
  // this to the vehicle's current heading so theta errors never jump by 2*pi.
  double heading_hint = 0.0;

  // One derived state per position sample; headings are unwrapped.
  std::vector<UnicycleState> derive_states() const;
};

// Quadratic tracking cost: terminal S error plus stage sum k = 1..N-1 of
// Q state error and R input effort. states must have horizon+1 entries,
// inputs horizon entries, ref_states at least horizon+1.
double evaluate_cost(std::span<const UnicycleState> states,
                     std::span<const UnicycleInput> inputs,
                     std::span<const UnicycleState> ref_states, const CostWeights& weights);

struct OptimizeOptions {
  int max_iterations = 400;
  double tolerance = 1e-6;  // projected-gradient norm
};

struct OptimizeResult {
  std::vector<UnicycleInput> inputs;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected-gradient minimization of the tracking cost over box-bounded
// input sequences, on the Euler prediction model. Deterministic; never
// returns a cost above the zero-input baseline.
OptimizeResult optimize_tracking(const UnicycleState& initial, const ReferenceTrajectory& ref,
                                 const CostWeights& weights, const InputBounds& bounds,
                                 const OptimizeOptions& options = {},
                                 std::span<const UnicycleInput> warm_start = {});

struct OracleResult {
  std::vector<UnicycleInput> inputs;
  double cost = 0.0;
  std::uint64_t candidates = 0;
};

// Exhaustive enumeration over per-scalar input levels (same prediction model
// as the optimizer). Throws EnumerationCapError when levels^(2N) exceeds cap.
OracleResult brute_force_oracle(const UnicycleState& initial, const ReferenceTrajectory& ref,
                                const CostWeights& weights,
                                std::span<const double> alpha_levels,
                                std::span<const double> omega_levels,
                                std::uint64_t cap = 10'000'000);

}  // namespace roller::rolling
