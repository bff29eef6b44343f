#include "ctol/airframe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctol/errors.hpp"
#include "ctol/units.hpp"

namespace ctol {

void AircraftConfig::validate() const {
  if (!(mass > 0.0)) throw ParameterError("aircraft.mass must be > 0");
  if (!(wing_area > 0.0)) throw ParameterError("aircraft.wing_area must be > 0");
  if (!(wingspan > 0.0)) throw ParameterError("aircraft.wingspan must be > 0");
  if (!(thrust_min >= 0.0)) throw ParameterError("limits.thrust_min must be >= 0");
  if (!(thrust_min < thrust_max))
    throw ParameterError("limits.thrust_min must be < limits.thrust_max");
  if (!(pitch_rate_limit > 0.0))
    throw ParameterError("limits.pitch_rate_limit must be > 0");
}

void Environment::validate() const {
  if (!(air_density > 0.0)) throw ParameterError("env.air_density must be > 0");
  if (!(gravity > 0.0)) throw ParameterError("env.gravity must be > 0");
  if (wind_speed != 0.0)
    throw ParameterError(
        "env.wind_speed must be 0: the tethered model assumes no wind");
}

AeroPolar::AeroPolar(std::vector<PolarPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    throw ParameterError("aero polar needs at least two breakpoints");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.alpha) || !std::isfinite(p.cl) || !std::isfinite(p.cd))
      throw ParameterError("aero polar row " + std::to_string(i) + " is not finite");
    if (!(p.cd > 0.0))
      throw ParameterError("aero polar row " + std::to_string(i) + ": c_D must be > 0");
    if (i > 0 && !(p.alpha > points_[i - 1].alpha))
      throw ParameterError("aero polar alphas must be strictly increasing (row " +
                           std::to_string(i) + ")");
  }
  const auto by_cl = std::max_element(
      points_.begin(), points_.end(),
      [](const PolarPoint& a, const PolarPoint& b) { return a.cl < b.cl; });
  const auto by_ratio = std::max_element(
      points_.begin(), points_.end(), [](const PolarPoint& a, const PolarPoint& b) {
        return a.cl / a.cd < b.cl / b.cd;
      });
  stall_angle_ = by_cl->alpha;
  steady_angle_ = by_ratio->alpha;
}

AeroPolar AeroPolar::zero(double alpha_lo, double alpha_hi) {
  if (!(alpha_lo < alpha_hi)) throw ParameterError("zero polar needs lo < hi");
  AeroPolar polar;
  polar.points_ = {{alpha_lo, 0.0, 0.0}, {alpha_hi, 0.0, 0.0}};
  return polar;
}

AeroCoefficients AeroPolar::coefficients(double alpha) const {
  if (!(alpha >= alpha_min() && alpha <= alpha_max())) {
    throw DomainError("angle of attack " + std::to_string(rad_to_deg(alpha)) +
                          " deg outside polar range [" +
                          std::to_string(rad_to_deg(alpha_min())) + ", " +
                          std::to_string(rad_to_deg(alpha_max())) + "] deg",
                      alpha);
  }
  // First breakpoint strictly above alpha; clamp so alpha_max maps to the last segment.
  auto hi = std::upper_bound(
      points_.begin(), points_.end(), alpha,
      [](double a, const PolarPoint& p) { return a < p.alpha; });
  if (hi == points_.end()) --hi;
  const auto lo = hi - 1;
  const double s = (alpha - lo->alpha) / (hi->alpha - lo->alpha);
  return {lo->cl + s * (hi->cl - lo->cl), lo->cd + s * (hi->cd - lo->cd)};
}

double AeroPolar::max_lift_coefficient() const {
  double best = points_.front().cl;
  for (const auto& p : points_) best = std::max(best, p.cl);
  return best;
}

AeroPolar default_polar() {
  constexpr double cl0 = 1.341625;
  constexpr double cd0 = cl0 / 76.557;
  constexpr double cl_max = 1.4002;
  // Below 0 deg the 0..9 deg lift slope is continued, so the loiter point
  // does not sit on a slope discontinuity.
  constexpr double cl_neg6 = 1.302575;  // cl0 - 6 (cl_max - cl0) / 9
  return AeroPolar({
      {deg_to_rad(-6.0), cl_neg6, 0.025},
      {deg_to_rad(0.0), cl0, cd0},
      {deg_to_rad(9.0), cl_max, 2.2 * cd0},
      {deg_to_rad(14.0), 1.20, 0.10},
  });
}

AeroCoefficients coefficients(const AeroPolar& polar, double alpha) {
  return polar.coefficients(alpha);
}

AeroForces aero_forces(const AircraftConfig& config, const Environment& env,
                       const AeroPolar& polar, double airspeed, double alpha) {
  const auto c = polar.coefficients(alpha);
  const double qa = 0.5 * env.air_density * config.wing_area * airspeed * airspeed;
  return {qa * c.cl, qa * c.cd};
}

}  // namespace ctol
