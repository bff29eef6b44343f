#include "ctol/synthesis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctol/errors.hpp"

namespace ctol {

namespace {

constexpr double kTrimTolerance = 1e-9;
constexpr double kCareTolerance = 1e-8;
constexpr int kMaxNewtonIterations = 60;

FlightState airborne(const ReducedState& x) {
  return {0.0, x[0], x[1], x[2], x[3], false};
}

// (V', gamma') as a function of (V, F_p) for a fixed spec.
Eigen::Vector2d trim_equations(const TrimSpec& spec, double airspeed, double thrust,
                               const Plant& plant) {
  const FlightState x{0.0, spec.elevation, airspeed, spec.flight_path,
                      spec.flight_path + spec.alpha, false};
  const auto d = rhs_airborne(x, {thrust, 0.0}, plant);
  return {d.airspeed_rate, d.flight_path_rate};
}

OperatingPoint make_point(const TrimSpec& spec, double airspeed, double thrust,
                          const Plant& plant, int iterations) {
  OperatingPoint op;
  op.x_ref = {spec.elevation, airspeed, spec.flight_path, spec.flight_path + spec.alpha};
  op.u_ref = {thrust, 0.0};
  op.residual = trim_residual(op.x_ref, op.u_ref, plant, spec.hold_elevation);
  op.thrust_bound_active = thrust <= plant.aircraft.thrust_min ||
                           thrust >= plant.aircraft.thrust_max;
  op.iterations = iterations;
  return op;
}

// Residual is affine in F_p at fixed state: r(F) = r0 + F d.
OperatingPoint pinned_airspeed_trim(const TrimSpec& spec, double airspeed,
                                    const Plant& plant) {
  const Eigen::Vector2d r0 = trim_equations(spec, airspeed, 0.0, plant);
  const Eigen::Vector2d d = trim_equations(spec, airspeed, 1.0, plant) - r0;
  const double unconstrained = -r0.dot(d) / d.squaredNorm();
  const double thrust =
      std::clamp(unconstrained, plant.aircraft.thrust_min, plant.aircraft.thrust_max);
  auto op = make_point(spec, airspeed, thrust, plant, 1);
  op.thrust_bound_active = thrust != unconstrained;
  return op;
}

}  // namespace

double trim_residual(const ReducedState& x, const ReducedControl& u,
                     const Plant& plant, bool hold_elevation) {
  const auto d = rhs_airborne(airborne(x), to_control(u), plant);
  double sum = d.airspeed_rate * d.airspeed_rate +
               d.flight_path_rate * d.flight_path_rate + d.pitch_rate * d.pitch_rate;
  if (hold_elevation) sum += d.elevation_rate * d.elevation_rate;
  return std::sqrt(sum);
}

OperatingPoint solve_operating_point(const TrimSpec& spec, const Plant& plant) {
  if (spec.airspeed) return pinned_airspeed_trim(spec, *spec.airspeed, plant);

  const double m = plant.aircraft.mass;
  const double g = plant.env.gravity;
  const double lift_slope = 0.5 * plant.env.air_density * plant.aircraft.wing_area *
                            plant.polar.coefficients(spec.alpha).cl;
  const double denom = lift_slope - (m / plant.tether.length) *
                                        std::tan(spec.elevation) *
                                        std::cos(spec.flight_path);
  if (!(denom > 0.0)) {
    throw SynthesisError("no lift margin for a steady state at this elevation "
                         "(beyond the maximum attainable elevation)");
  }
  // Thrust-free closed form as the starting guess.
  double v = std::sqrt(m * g * std::cos(spec.elevation) * std::cos(spec.flight_path) /
                       denom);
  v = std::max(v, 2.0 * plant.ground.min_airborne_speed);
  double f = 0.0;
  const double f_lo = plant.aircraft.thrust_min;
  const double f_hi = plant.aircraft.thrust_max;

  std::vector<double> history;
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    const Eigen::Vector2d res = trim_equations(spec, v, f, plant);
    history.push_back(res.norm());
    if (res.norm() <= 0.1 * kTrimTolerance) return make_point(spec, v, f, plant, it);

    Eigen::Matrix2d jac;
    const double hv = 1e-7 * std::max(1.0, v);
    const double hf = 1e-7 * std::max(1.0, std::abs(f));
    jac.col(0) = (trim_equations(spec, v + hv, f, plant) -
                  trim_equations(spec, v - hv, f, plant)) / (2.0 * hv);
    jac.col(1) = (trim_equations(spec, v, f + hf, plant) -
                  trim_equations(spec, v, f - hf, plant)) / (2.0 * hf);
    Eigen::Vector2d step = jac.fullPivLu().solve(-res);
    if (!step.allFinite()) break;

    double v_next = v + step[0];
    const double f_next = std::clamp(f + step[1], f_lo, f_hi);
    if (v_next < plant.ground.min_airborne_speed)
      v_next = 0.5 * (v + plant.ground.min_airborne_speed);
    const bool clamped = f_next != f + step[1];
    if (clamped && (f_next == f)) {
      // Thrust pinned at its bound: nothing left to trade against gamma'.
      return make_point(spec, v_next, f_next, plant, it);
    }
    if (std::abs(v_next - v) <= 1e-15 * v && std::abs(f_next - f) <= 1e-15 &&
        res.norm() <= kTrimTolerance) {
      return make_point(spec, v_next, f_next, plant, it);
    }
    v = v_next;
    f = f_next;
  }
  const auto op = make_point(spec, v, f, plant, kMaxNewtonIterations);
  if (op.exact() || op.thrust_bound_active) return op;
  throw SynthesisError("trim Newton iteration did not converge, last residual " +
                           std::to_string(history.empty() ? op.residual : history.back()),
                       std::move(history));
}

ReducedState reduced_rhs(const ReducedState& x, const ReducedControl& u,
                         const Plant& plant) {
  const auto d = rhs_airborne(airborne(x), to_control(u), plant);
  return {d.elevation_rate, d.airspeed_rate, d.flight_path_rate, d.pitch_rate};
}

LinearModel linearize(const ReducedField& field, const ReducedState& x,
                      const ReducedControl& u, double step_scale) {
  LinearModel lin;
  for (int i = 0; i < 4; ++i) {
    const double h = step_scale * std::max(1.0, std::abs(x[i]));
    ReducedState xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    lin.a.col(i) = (field(xp, u) - field(xm, u)) / (xp[i] - xm[i]);
  }
  for (int j = 0; j < 2; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(u[j]));
    ReducedControl up = u, um = u;
    up[j] += h;
    um[j] -= h;
    lin.b.col(j) = (field(x, up) - field(x, um)) / (up[j] - um[j]);
  }
  if (!lin.a.allFinite() || !lin.b.allFinite())
    throw SynthesisError("linearization produced non-finite entries");
  return lin;
}

LinearModel linearize(const OperatingPoint& point, const Plant& plant,
                      double step_scale) {
  const ReducedField field = [&plant](const ReducedState& x, const ReducedControl& u) {
    try {
      return reduced_rhs(x, u, plant);
    } catch (const Error& e) {
      throw SynthesisError(std::string("linearization probe failed: ") + e.what());
    }
  };
  return linearize(field, point.x_ref, point.u_ref, step_scale);
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  // vec(A'X + XA) = (I kron A' + A' kron I) vec(X), column-major vec.
  Eigen::MatrixXd kron(n * n, n * n);
  const Eigen::MatrixXd at = a.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      kron.block(i * n, j * n, n, n) = eye(i, j) * at + at(i, j) * eye;
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
  const Eigen::VectorXd sol = kron.fullPivLu().solve(rhs);
  Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

double care_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                     const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd g = b * r.ldlt().solve(b.transpose());
  return (a.transpose() * p + p * a - p * g * p + q).norm();
}

CareSolution solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols())
    throw SynthesisError("solve_care: inconsistent matrix dimensions");
  const Eigen::LDLT<Eigen::MatrixXd> r_ldlt(r);
  if (r_ldlt.info() != Eigen::Success || !r_ldlt.isPositive() ||
      (r_ldlt.vectorD().array() <= 0.0).any())
    throw SynthesisError("solve_care: R must be positive definite");
  const Eigen::MatrixXd g = b * r_ldlt.solve(b.transpose());

  Eigen::MatrixXd h(2 * n, 2 * n);
  h << a, -g, -q, -a.transpose();

  // Newton iteration for sign(H) with determinant scaling.
  Eigen::MatrixXd z = h;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(z);
    const double logdet = lu.matrixLU().diagonal().array().abs().log().sum();
    if (!std::isfinite(logdet))
      throw SynthesisError("solve_care: Hamiltonian has eigenvalues on the imaginary axis");
    const double c = std::exp(-logdet / static_cast<double>(2 * n));
    const Eigen::MatrixXd next = 0.5 * (c * z + lu.inverse() / c);
    const double change = (next - z).lpNorm<1>();
    z = next;
    if (change <= 1e-13 * z.lpNorm<1>()) {
      converged = true;
      break;
    }
  }
  if (!converged || !z.allFinite())
    throw SynthesisError("solve_care: sign iteration did not converge (stabilizable?)");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd lhs(2 * n, n), rhs(2 * n, n);
  lhs << z.topRightCorner(n, n), z.bottomRightCorner(n, n) + eye;
  rhs << z.topLeftCorner(n, n) + eye, z.bottomLeftCorner(n, n);
  Eigen::MatrixXd p = lhs.colPivHouseholderQr().solve(-rhs);
  p = 0.5 * (p + p.transpose());

  std::vector<double> history{care_residual(a, b, q, r, p)};
  // Newton-Kleinman polish from the sign-function estimate.
  for (int it = 0; it < 8 && history.back() > 1e-3 * kCareTolerance; ++it) {
    const Eigen::MatrixXd k = r_ldlt.solve(b.transpose() * p);
    const Eigen::MatrixXd ac = a - b * k;
    const Eigen::MatrixXd candidate =
        solve_lyapunov(ac, q + k.transpose() * r * k);
    const double res = care_residual(a, b, q, r, candidate);
    if (!(res < history.back())) break;
    p = candidate;
    history.push_back(res);
  }

  CareSolution sol;
  sol.p = p;
  sol.k = r_ldlt.solve(b.transpose() * p);
  sol.closed_loop_eigenvalues = (a - b * sol.k).eigenvalues();
  sol.residual = history.back();
  if (!(sol.residual <= kCareTolerance))
    throw SynthesisError("solve_care: residual " + std::to_string(sol.residual) +
                             " exceeds tolerance",
                         history);
  if ((sol.closed_loop_eigenvalues.real().array() >= 0.0).any())
    throw SynthesisError("solve_care: closed loop not Hurwitz", history);
  return sol;
}

double LqrDesign::spectral_abscissa() const {
  return closed_loop_eigenvalues.real().maxCoeff();
}

LqrDesign design_lqr(const OperatingPoint& point, const LqrWeights& weights,
                     const Plant& plant) {
  if ((weights.q_diag.array() < 0.0).any())
    throw SynthesisError("LQR weight Q must be positive semidefinite");
  if ((weights.r_diag.array() <= 0.0).any())
    throw SynthesisError("LQR weight R must be positive definite");
  LqrDesign d;
  d.point = point;
  d.weights = weights;
  d.model = linearize(point, plant);
  const auto sol = solve_care(d.model.a, d.model.b, weights.q_diag.asDiagonal().toDenseMatrix(),
                              weights.r_diag.asDiagonal().toDenseMatrix());
  d.p = sol.p;
  d.k = sol.k;
  d.closed_loop_eigenvalues = sol.closed_loop_eigenvalues;
  d.care_residual = sol.residual;
  return d;
}

BrysonWeights bryson_init(std::span<const double> state_scales,
                          std::span<const double> control_scales) {
  BrysonWeights w;
  w.q_diag.resize(static_cast<Eigen::Index>(state_scales.size()));
  w.r_diag.resize(static_cast<Eigen::Index>(control_scales.size()));
  for (std::size_t i = 0; i < state_scales.size(); ++i) {
    const double s = state_scales[i];
    if (s < 0.0 || std::isnan(s))
      throw SynthesisError("Bryson state scale " + std::to_string(i) + " must be >= 0");
    w.q_diag[static_cast<Eigen::Index>(i)] =
        (s == 0.0 || std::isinf(s)) ? 0.0 : 1.0 / (s * s);
  }
  for (std::size_t j = 0; j < control_scales.size(); ++j) {
    const double c = control_scales[j];
    if (!(c > 0.0) || !std::isfinite(c))
      throw SynthesisError("Bryson control scale " + std::to_string(j) +
                           " must be positive and finite");
    w.r_diag[static_cast<Eigen::Index>(j)] = 1.0 / (c * c);
  }
  return w;
}

}  // namespace ctol
