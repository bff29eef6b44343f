#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ctol/control.hpp"
#include "ctol/units.hpp"

using namespace ctol;

TEST(Pid, PureProportional) {
  PidLoop loop({1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(pid_step(loop, 0.5, 0.0, 0.01), 0.5);
}

TEST(Pid, PureIntegralRamps) {
  PidLoop loop({0.0, 1.0, 0.0});
  const double dt = 0.01;
  double u = 0.0;
  for (int k = 1; k <= 300; ++k) {
    u = loop.step(1.0, 0.0, dt);
    EXPECT_NEAR(u, k * dt, 1e-12);
  }
}

TEST(Pid, DerivativeIsBackwardDifference) {
  PidLoop loop({0.0, 0.0, 2.0});
  EXPECT_EQ(loop.step(1.0, 0.0, 0.1), 0.0);  // no history on the first call
  EXPECT_NEAR(loop.step(1.0, 0.5, 0.1), 2.0 * (0.5 - 1.0) / 0.1, 1e-12);
}

TEST(Pid, SaturationFreezesIntegrator) {
  PidLoop loop({1.0, 1.0, 0.0, 0.0, 1.5, true});
  const double u = loop.step(2.3, 0.0, 0.01);
  EXPECT_EQ(u, 1.5);
  EXPECT_EQ(loop.integral(), 0.0);
  for (int k = 0; k < 100; ++k) loop.step(2.3, 0.0, 0.01);
  EXPECT_EQ(loop.integral(), 0.0);
}

TEST(Pid, SaturatedIntegratorUnwindsWhenErrorReverses) {
  PidLoop loop({0.0, 1.0, 0.0, 0.0, 0.05, true});
  for (int k = 0; k < 10; ++k) loop.step(1.0, 0.0, 0.01);  // reaches 0.05 then freezes
  const double held = loop.integral();
  EXPECT_NEAR(held, 0.05, 1e-12);
  loop.step(-1.0, 0.0, 0.01);
  EXPECT_LT(loop.integral(), held);
}

TEST(Pid, PlainIntegrationKeepsRunning) {
  PidLoop loop({1.0, 1.0, 0.0, 0.0, 1.5, false});
  for (int k = 0; k < 100; ++k) EXPECT_LE(loop.step(2.3, 0.0, 0.01), 1.5);
  EXPECT_NEAR(loop.integral(), 2.3, 1e-12);
}

TEST(Pid, ResetClearsMemory) {
  PidLoop loop({1.0, 1.0, 1.0});
  loop.step(1.0, 0.0, 0.1);
  loop.step(2.0, 0.0, 0.1);
  loop.reset();
  EXPECT_EQ(loop.integral(), 0.0);
  EXPECT_DOUBLE_EQ(loop.step(1.0, 0.0, 0.1), 1.0 + 0.1);
}

// Doubling the gains doubles an unsaturated output for the same history.
TEST(Pid, LinearInGains) {
  const double gains[][3] = {{1.0, 0.001, 0.01}, {30.0, 0.01, 1.0}, {0.7, 0.08, 0.05}};
  for (const auto& g : gains) {
    PidLoop one({g[0], g[1], g[2]});
    PidLoop two({2 * g[0], 2 * g[1], 2 * g[2]});
    for (int k = 0; k < 200; ++k) {
      const double ref = std::sin(0.05 * k);
      const double meas = 0.3 * std::cos(0.11 * k);
      const double a = one.step(ref, meas, 0.001);
      const double b = two.step(ref, meas, 0.001);
      EXPECT_NEAR(b, 2.0 * a, 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST(Saturate, ClampsToTableBounds) {
  const AircraftConfig config;
  EXPECT_EQ(saturate({2.0, 0.0}, config).thrust, 1.5);
  EXPECT_NEAR(saturate({0.5, deg_to_rad(-30.0)}, config).pitch_rate, deg_to_rad(-20.0), 1e-15);
  const ControlInput inside{0.7, 0.1};
  EXPECT_EQ(saturate(inside, config), inside);
}

TEST(Saturate, Idempotent) {
  const AircraftConfig config;
  for (double f = -1.0; f <= 3.0; f += 0.173) {
    for (double w = -1.0; w <= 1.0; w += 0.0913) {
      const auto once = saturate({f, w}, config);
      EXPECT_EQ(saturate(once, config), once);
      EXPECT_GE(once.thrust, 0.0);
      EXPECT_LE(once.thrust, 1.5);
      EXPECT_LE(std::abs(once.pitch_rate), config.pitch_rate_limit);
    }
  }
}

namespace {

LqrLaw sample_law() {
  LqrLaw law;
  law.x_ref = {deg_to_rad(7.18), 10.84, 0.0, 0.0};
  law.u_ref = {0.07, 0.0};
  law.gain << -30.7, 1.38, 18.7, 2.59, -7.18, 0.288, 6.61, 2.71;
  return law;
}

FlightState from_reduced(const ReducedState& x) {
  return {0.3, x[0], x[1], x[2], x[3], false};
}

}  // namespace

TEST(Lqr, ReferenceGivesReferenceControl) {
  const auto law = sample_law();
  const auto u = lqr_command(law, from_reduced(law.x_ref));
  EXPECT_EQ(u, law.u_ref);
}

TEST(Lqr, ZeroGainGivesReferenceControl) {
  auto law = sample_law();
  law.gain.setZero();
  const auto u = lqr_command(law, from_reduced(ReducedState(0.2, 3.0, -0.3, 0.5)));
  EXPECT_EQ(u, law.u_ref);
}

TEST(Lqr, AffineInState) {
  const auto law = sample_law();
  const ReducedState deltas[] = {{0.01, 0.0, 0.0, 0.0},
                                 {0.0, 0.7, 0.0, 0.0},
                                 {0.003, -0.2, 0.02, -0.04}};
  for (const auto& d : deltas) {
    const auto plus = lqr_command(law, from_reduced(law.x_ref + d));
    const auto minus = lqr_command(law, from_reduced(law.x_ref - d));
    EXPECT_NEAR((plus + minus - 2.0 * law.u_ref).norm(), 0.0, 1e-12);
  }
}

TEST(Lqr, AngleErrorsAreWrapped) {
  const auto law = sample_law();
  ReducedState x = law.x_ref;
  x[3] += 2.0 * std::numbers::pi;
  EXPECT_NEAR((lqr_command(law, from_reduced(x)) - law.u_ref).norm(), 0.0, 1e-9);
}

TEST(Lqr, StepSaturates) {
  const AircraftConfig config;
  auto law = sample_law();
  law.u_ref = {5.0, 2.0};
  law.gain.setZero();
  const auto u = lqr_step(law, from_reduced(law.x_ref), config);
  EXPECT_EQ(u.thrust, 1.5);
  EXPECT_EQ(u.pitch_rate, config.pitch_rate_limit);
}

TEST(WrapAngle, Range) {
  EXPECT_EQ(wrap_angle(0.3), 0.3);
  EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(-3.5 * std::numbers::pi), 0.5 * std::numbers::pi, 1e-12);
}
