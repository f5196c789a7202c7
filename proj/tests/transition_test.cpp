#include "roller/transition.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "roller/errors.hpp"

using namespace roller;
using namespace roller::transition;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

TEST(PendulumDerivative, UprightHasNoGravityMoment) {
  TransitionParams p;
  auto d = pendulum_derivative({kHalfPi, 0.0}, 0.3, p);
  const double ml2 = p.mass * p.pivot_length * p.pivot_length;
  EXPECT_NEAR(d.theta_ddot, 0.3 / ml2, 1e-9);
}

TEST(PendulumDerivative, StaticBalance) {
  TransitionParams p;
  const double theta = 0.7;
  const double tau = p.mass * p.pivot_length * p.gravity * std::cos(theta);
  auto d = pendulum_derivative({theta, 0.0}, tau, p);
  EXPECT_NEAR(d.theta_ddot, 0.0, 1e-12);
}

TEST(PendulumDerivative, HandArithmetic) {
  // (2 - 1.5*0.1*9.81) / (1.5*0.01) = 0.5285 / 0.015
  TransitionParams p;
  auto d = pendulum_derivative({0.0, 0.0}, 2.0, p);
  EXPECT_NEAR(d.theta_ddot, 35.23333333333333, 1e-10);
}

TEST(PendulumDerivative, EnvelopeGuard) {
  TransitionParams p;
  EXPECT_THROW(pendulum_derivative({kThetaMax + 0.01, 0.0}, 0.0, p), GuardError);
  EXPECT_THROW(pendulum_derivative({kThetaMin - 0.01, 0.0}, 0.0, p), GuardError);
}

TEST(FeedbackLinearize, GravityCompensationAtZeroAccel) {
  TransitionParams p;
  const double theta = 0.4;
  EXPECT_DOUBLE_EQ(feedback_linearize({theta, 0.0}, 0.0, p),
                   p.mass * p.pivot_length * p.gravity * std::cos(theta));
}

TEST(FeedbackLinearize, UprightArithmetic) {
  TransitionParams p;  // m = 1.5, l = 0.1 -> alpha = 0.015
  EXPECT_NEAR(feedback_linearize({kHalfPi, 0.0}, 10.0, p), 0.15, 1e-12);
}

TEST(FeedbackLinearize, ComposesToExactDoubleIntegrator) {
  TransitionParams p;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> th(kThetaMin + 0.01, kThetaMax - 0.01);
  std::uniform_real_distribution<double> tp(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double theta = th(rng), tau_prime = tp(rng);
    const double tau = feedback_linearize({theta, 0.0}, tau_prime, p);
    const auto d = pendulum_derivative({theta, 0.0}, tau, p);
    EXPECT_NEAR(d.theta_ddot, tau_prime, 1e-12 * std::max(1.0, std::abs(tau_prime)));
  }
}

TEST(PdTrackingLaw, ZeroErrorPassesFeedforward) {
  TransitionParams p;
  TrackingReference ref{0.5, 0.2, 1.7};
  EXPECT_DOUBLE_EQ(pd_tracking_law({0.5, 0.2}, ref, p), 1.7);
}

TEST(PdTrackingLaw, HandArithmetic) {
  TransitionParams p;  // kp = 25, kv = 10
  // 25*0.1 + 10*(-0.05) = 2.5 - 0.5
  TrackingReference ref{0.1, -0.05, 0.0};
  EXPECT_DOUBLE_EQ(pd_tracking_law({0.0, 0.0}, ref, p), 2.0);
}

TEST(AllocatePairThrust, ZeroAndArithmetic) {
  TransitionParams p;  // lever = 0.11
  auto zero = allocate_pair_thrust(0.0, p);
  EXPECT_DOUBLE_EQ(zero.front, 0.0);
  EXPECT_DOUBLE_EQ(zero.rear, 0.0);
  auto unit = allocate_pair_thrust(0.22, p);
  EXPECT_DOUBLE_EQ(unit.front, 1.0);
  EXPECT_DOUBLE_EQ(unit.rear, 1.0);
  EXPECT_FALSE(unit.clamped);
}

TEST(AllocatePairThrust, ClampsWithFlag) {
  TransitionParams p;
  auto big = allocate_pair_thrust(2.0 * p.lever * p.thrust_pair_max * 1.5, p);
  EXPECT_TRUE(big.clamped);
  EXPECT_DOUBLE_EQ(big.front, p.thrust_pair_max);
}

TEST(AllocatePairThrust, NegativeTorqueNeedsBidirectionalAuthority) {
  TransitionParams p;
  p.bidirectional_authority = false;
  EXPECT_THROW(allocate_pair_thrust(-0.1, p), AllocationError);
  p.bidirectional_authority = true;
  auto r = allocate_pair_thrust(-0.22, p);
  EXPECT_DOUBLE_EQ(r.front, -1.0);  // realized by the opposite pair
}

TEST(AllocatePairThrust, RoundTripOnUnclampedRange) {
  TransitionParams p;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> taus(-2.0 * p.lever * p.thrust_pair_max,
                                              2.0 * p.lever * p.thrust_pair_max);
  for (int i = 0; i < 200; ++i) {
    const double tau = taus(rng);
    auto pair = allocate_pair_thrust(tau, p);
    if (pair.clamped) continue;
    EXPECT_DOUBLE_EQ((pair.front + pair.rear) * p.lever, tau);
  }
}

TEST(QuinticProfile, BoundaryConditions) {
  QuinticProfile q{0.0, kHalfPi, 2.0};
  auto a = q.at(0.0);
  EXPECT_DOUBLE_EQ(a.theta, 0.0);
  EXPECT_DOUBLE_EQ(a.theta_dot, 0.0);
  EXPECT_DOUBLE_EQ(a.theta_ddot, 0.0);
  auto b = q.at(2.0);
  EXPECT_DOUBLE_EQ(b.theta, kHalfPi);
  EXPECT_DOUBLE_EQ(b.theta_dot, 0.0);
  EXPECT_DOUBLE_EQ(b.theta_ddot, 0.0);
  auto mid = q.at(1.0);
  EXPECT_NEAR(mid.theta, kHalfPi / 2.0, 1e-12);
  auto held = q.at(5.0);
  EXPECT_DOUBLE_EQ(held.theta, kHalfPi);
}

TEST(RunTransition, ToRollingConverges) {
  TransitionParams p;
  auto result = run_transition({0.0, 0.0}, Direction::ToRolling,
                               default_profile(Direction::ToRolling, 2.0), p);
  EXPECT_TRUE(result.success) << result.failure_reason;
  EXPECT_LT(std::abs(result.final_state.theta - kHalfPi), 0.02);
  EXPECT_LT(std::abs(result.final_state.theta_dot), 0.05);
}

TEST(RunTransition, ToFlyingConverges) {
  TransitionParams p;
  auto result = run_transition({kHalfPi, 0.0}, Direction::ToFlying,
                               default_profile(Direction::ToFlying, 2.0), p);
  EXPECT_TRUE(result.success) << result.failure_reason;
  EXPECT_LT(std::abs(result.final_state.theta), 0.02);
}

TEST(RunTransition, EquilibriumStaysPut) {
  TransitionParams p;
  QuinticProfile constant{kHalfPi, kHalfPi, 2.0};
  auto result = run_transition({kHalfPi, 0.0}, Direction::ToRolling, constant, p);
  EXPECT_TRUE(result.success);
  for (const auto& s : result.trace) {
    EXPECT_LT(std::abs(s.theta - kHalfPi), 1e-9);
    EXPECT_LT(std::abs(s.theta_dot), 1e-9);
  }
}

TEST(RunTransition, OpenLoopCannotConverge) {
  TransitionParams p;
  p.gain_kp = 0.0;
  p.gain_kv = 0.0;
  auto result = run_transition({0.1, 0.0}, Direction::ToRolling,
                               default_profile(Direction::ToRolling, 2.0), p);
  EXPECT_FALSE(result.success);
  EXPECT_FALSE(result.failure_reason.empty());
}

TEST(RunTransition, TraceTorqueMatchesPairThrusts) {
  TransitionParams p;
  auto result = run_transition({0.0, 0.0}, Direction::ToRolling,
                               default_profile(Direction::ToRolling, 2.0), p);
  ASSERT_TRUE(result.success);
  for (const auto& s : result.trace)
    EXPECT_DOUBLE_EQ((s.f_front + s.f_rear) * p.lever, s.tau);
}

// Exact linearization makes the tracking-error ODE linear; the simulated
// decay must match the closed-form solution of e'' + kv e' + kp e = 0.
TEST(RunTransition, ErrorDecayMatchesAnalyticSolution) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> kv_dist(4.0, 12.0), ratio(0.3, 1.0),
      e0_dist(-0.3, 0.3), target_dist(0.5, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    TransitionParams p;
    p.gain_kv = kv_dist(rng);
    p.gain_kp = ratio(rng) * p.gain_kv * p.gain_kv / 4.0;  // kv^2 >= 4 kp
    const double target = target_dist(rng);
    const double e0 = e0_dist(rng);

    const double disc = std::sqrt(p.gain_kv * p.gain_kv - 4.0 * p.gain_kp);
    const double r1 = (-p.gain_kv + disc) / 2.0, r2 = (-p.gain_kv - disc) / 2.0;
    auto analytic = [&](double t) {
      if (disc < 1e-9) {  // critically damped
        const double r = -p.gain_kv / 2.0;
        return e0 * (1.0 - r * t) * std::exp(r * t);
      }
      const double a = -e0 * r2 / (r1 - r2), b = e0 * r1 / (r1 - r2);
      return a * std::exp(r1 * t) + b * std::exp(r2 * t);
    };

    PendulumState state{target - e0, 0.0};
    const TrackingReference ref{target, 0.0, 0.0};
    const double dt = 1e-3;
    double max_dev = 0.0;
    for (int k = 1; k <= 2000; ++k) {
      state = transition_step(state, ref, p, dt);
      const double e_sim = target - state.theta;
      max_dev = std::max(max_dev, std::abs(e_sim - analytic(k * dt)));
    }
    EXPECT_LT(max_dev / std::abs(e0), 1e-6);
  }
}

}  // namespace
