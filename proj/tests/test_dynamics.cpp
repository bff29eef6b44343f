#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ctol/dynamics.hpp"
#include "ctol/errors.hpp"
#include "ctol/synthesis.hpp"
#include "ctol/units.hpp"

using namespace ctol;

namespace {

FlightState airborne(double beta_deg, double v, double gamma_deg, double theta_deg) {
  return {0.0, deg_to_rad(beta_deg), v, deg_to_rad(gamma_deg), deg_to_rad(theta_deg), false};
}

}  // namespace

TEST(Airborne, LevelRunwayRates) {
  const Plant plant;
  const auto d = rhs_airborne(airborne(0, 7.98, 0, 5), {0.0, 0.0}, plant);
  EXPECT_NEAR(d.azimuth_rate, 3.325, 1e-12);
  EXPECT_EQ(d.elevation_rate, 0.0);
}

TEST(Airborne, LevelFlightWithoutThrustOnlyDecelerates) {
  const Plant plant;
  for (double v : {2.0, 8.0, 11.0}) {
    const auto x = airborne(5, v, 0, 3);
    const auto d = rhs_airborne(x, {0.0, 0.1}, plant);
    const auto f = aero_forces(plant.aircraft, plant.env, plant.polar, v, x.angle_of_attack());
    EXPECT_DOUBLE_EQ(d.airspeed_rate, -f.drag / plant.aircraft.mass);
    EXPECT_EQ(d.pitch_rate, 0.1);
  }
}

TEST(Airborne, LoiterTrimIsStationary) {
  const Plant plant;
  TrimSpec spec{height_to_elevation(0.3, plant.tether), 0.0, 0.0, {}, true};
  const auto point = solve_operating_point(spec, plant);
  EXPECT_NEAR(point.u_ref[0], 0.073, 1e-3);
  FlightState x{0.0, point.x_ref[0], point.x_ref[1], point.x_ref[2], point.x_ref[3], false};
  const auto d = rhs_airborne(x, {point.u_ref[0], 0.0}, plant);
  EXPECT_LE(std::abs(d.airspeed_rate), 1e-9);
  EXPECT_LE(std::abs(d.flight_path_rate), 1e-9);
}

TEST(Airborne, Preconditions) {
  const Plant plant;
  EXPECT_THROW(rhs_airborne(airborne(3, 0.2, 0, 0), {}, plant), SingularityError);
  FlightState x = airborne(0, 5, 0, 0);
  x.elevation = std::numbers::pi / 2;
  EXPECT_THROW(rhs_airborne(x, {}, plant), GeometryError);
  EXPECT_THROW(rhs_airborne(airborne(3, 8, 0, 20), {}, plant), DomainError);
}

TEST(Airborne, BallisticOnSphereWithoutAero) {
  Plant plant;
  plant.polar = AeroPolar::zero(-1.5, 1.5);
  for (double gamma : {-20.0, -3.0, 0.0, 4.0, 30.0}) {
    for (double beta : {0.0, 10.0, 40.0}) {
      const auto x = airborne(beta, 6.0, gamma, 0.0);
      const auto d = rhs_airborne(x, {0.0, 0.0}, plant);
      EXPECT_NEAR(d.airspeed_rate, -9.8 * std::cos(x.elevation) * std::sin(x.flight_path),
                  1e-14);
    }
  }
}

// Property: m V V' + m g h' = V (F_p cos(alpha) - F_D) on a state grid.
TEST(Airborne, EnergyIdentityOnGrid) {
  const Plant plant;
  const double m = plant.aircraft.mass;
  for (double beta = 0.0; beta < 60.0; beta += 7.3) {
    for (double v = 1.0; v < 20.0; v += 2.9) {
      for (double gamma = -25.0; gamma < 25.0; gamma += 6.1) {
        for (double alpha = -5.5; alpha < 13.5; alpha += 3.7) {
          for (double thrust : {0.0, 0.6, 1.5}) {
            const auto x = airborne(beta, v, gamma, gamma + alpha);
            const auto d = rhs_airborne(x, {thrust, 0.2}, plant);
            const auto f = aero_forces(plant.aircraft, plant.env, plant.polar, v,
                                       x.angle_of_attack());
            const double hdot = plant.tether.length * d.elevation_rate * std::cos(x.elevation);
            const double lhs = m * v * d.airspeed_rate + m * 9.8 * hdot;
            const double rhs = v * (thrust * std::cos(x.angle_of_attack()) - f.drag);
            EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, m * 9.8 * v));
          }
        }
      }
    }
  }
}

TEST(Airborne, AlphaIsPitchMinusFlightPath) {
  const auto x = airborne(4, 9, -2, 7);
  EXPECT_DOUBLE_EQ(x.angle_of_attack(), x.pitch - x.flight_path);
}

TEST(GroundRoll, FullThrottleFromRest) {
  const Plant plant;
  FlightState rest;
  const auto d = rhs_ground_roll(rest, {1.5, 0.0}, plant);
  EXPECT_NEAR(d.airspeed_rate, (1.5 - 0.03 * 0.35 * 9.8) / 0.35, 1e-12);
  EXPECT_NEAR(d.airspeed_rate, 3.992, 5e-4);
}

TEST(GroundRoll, StaticRestWithoutThrust) {
  const Plant plant;
  FlightState rest;
  const auto d = rhs_ground_roll(rest, {0.0, 0.0}, plant);
  EXPECT_EQ(d.airspeed_rate, 0.0);
  EXPECT_EQ(d.elevation_rate, 0.0);
  EXPECT_EQ(d.flight_path_rate, 0.0);
}

TEST(GroundRoll, NoFrictionAtLiftOffBoundary) {
  Plant plant;
  // Pick V so that F_L = m g at alpha = 9 deg.
  const double cl = 1.4002;
  const double v = std::sqrt(0.35 * 9.8 / (0.5 * 1.225 * 0.0576 * cl));
  FlightState x{0.0, 0.0, v, 0.0, deg_to_rad(9.0), true};
  EXPECT_NEAR(ground_normal_force(x, {0.0, 0.0}, plant), 0.0, 1e-12);
  const auto f = aero_forces(plant.aircraft, plant.env, plant.polar, v, x.pitch);
  const auto d = rhs_ground_roll(x, {0.0, 0.0}, plant);
  EXPECT_NEAR(d.airspeed_rate, -f.drag / 0.35, 1e-12);
}

TEST(GroundRoll, NeverLeavesThePlane) {
  const Plant plant;
  for (double v : {0.0, 3.0, 9.0}) {
    for (double w : {-0.3, 0.0, 0.3}) {
      FlightState x{1.0, 0.0, v, 0.0, 0.0, true};
      const auto d = rhs_ground_roll(x, {1.0, w}, plant);
      EXPECT_EQ(d.elevation_rate, 0.0);
      EXPECT_EQ(d.flight_path_rate, 0.0);
      EXPECT_GE(d.pitch_rate, 0.0);  // theta = 0 cannot decrease
      EXPECT_NEAR(d.azimuth_rate, v / 2.4, 1e-15);
    }
  }
}

TEST(Tension, ZeroAtRest) {
  const Plant plant;
  EXPECT_EQ(tether_tension(FlightState{}, plant), 0.0);
}

TEST(Tension, CentripetalOnRunwayPlane) {
  const Plant plant;
  const double ft = tether_tension(airborne(0, 7.98, 0, 0), plant);
  EXPECT_NEAR(ft, 0.35 * 7.98 * 7.98 / 2.4, 1e-12);
  EXPECT_NEAR(ft, 9.28, 0.01);
}

TEST(Tension, DecreasesWithElevation) {
  const Plant plant;
  double previous = tether_tension(airborne(0, 10, 0, 0), plant);
  for (double beta = 0.5; beta < 80.0; beta += 0.5) {
    const double ft = tether_tension(airborne(beta, 10, 0, 0), plant);
    EXPECT_LT(ft, previous);
    previous = ft;
  }
}

TEST(Tension, AzimuthInvariant) {
  const Plant plant;
  for (double beta : {0.0, 5.0, 30.0}) {
    for (double gamma : {-10.0, 0.0, 8.0}) {
      auto x = airborne(beta, 9.0, gamma, 0.0);
      const double base = tether_tension(x, plant);
      for (double phi = -20.0; phi < 20.0; phi += 1.37) {
        x.azimuth = phi;
        EXPECT_EQ(tether_tension(x, plant), base);
      }
    }
  }
}

TEST(Geometry, TableAnchors) {
  const TetherConfig tether;
  EXPECT_NEAR(height(deg_to_rad(7.18), tether), 0.3, 1e-3);
  EXPECT_NEAR(height(deg_to_rad(1.50), tether), 0.063, 1e-3);
  EXPECT_EQ(height(0.0, tether), 0.0);
}

TEST(Geometry, RoundTrip) {
  const TetherConfig tether;
  for (double h = 0.0; h <= 2.4; h += 0.01) {
    EXPECT_NEAR(height(height_to_elevation(h, tether), tether), h, 1e-12);
  }
  EXPECT_THROW(height_to_elevation(2.5, tether), GeometryError);
  EXPECT_THROW(height_to_elevation(-0.1, tether), GeometryError);
}

TEST(Geometry, ClimbRateMatchesElevationRate) {
  const Plant plant;
  const auto x = airborne(6, 10, 3, 8);
  const auto d = rhs_airborne(x, {0.5, 0.0}, plant);
  EXPECT_NEAR(climb_rate(x), plant.tether.length * d.elevation_rate * std::cos(x.elevation),
              1e-14);
}
