#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ctol/control.hpp"
#include "ctol/dynamics.hpp"

namespace ctol {

/// Fixed quantities of a steady-state request. The free unknowns are the
/// airspeed (unless pinned) and the thrust; the pitch-rate reference is 0.
struct TrimSpec {
  double elevation = 0.0;
  double flight_path = 0.0;
  double alpha = 0.0;
  /// When set, only the thrust is free and the trim is a best-effort least
  /// squares fit. Used to audit a tabulated reference state.
  std::optional<double> airspeed;
  /// Include beta-dot in the residual (level loiter).
  bool hold_elevation = false;
};

struct OperatingPoint {
  ReducedState x_ref = ReducedState::Zero();
  ReducedControl u_ref = ReducedControl::Zero();
  /// Euclidean norm of the held derivative components at (x_ref, u_ref).
  double residual = 0.0;
  bool thrust_bound_active = false;
  int iterations = 0;

  /// Exact trim means residual <= 1e-9.
  bool exact() const { return residual <= 1e-9; }
};

/// Norm of (beta' if hold_elevation, V', gamma', theta') at the given point.
double trim_residual(const ReducedState& x, const ReducedControl& u,
                     const Plant& plant, bool hold_elevation);

/// Newton iteration on (V_a, F_p) for V' = gamma' = 0 (theta' = 0 through
/// omega_q = 0). With a pinned airspeed, F_p minimizes the residual inside
/// its bounds. A binding thrust bound is reported, not hidden; an
/// unconstrained Newton run that fails to converge throws SynthesisError.
OperatingPoint solve_operating_point(const TrimSpec& spec, const Plant& plant);

struct LinearModel {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  Eigen::Matrix<double, 4, 2> b = Eigen::Matrix<double, 4, 2>::Zero();
};

using ReducedField =
    std::function<ReducedState(const ReducedState&, const ReducedControl&)>;

/// The last four components of the airborne model, (beta, V_a, gamma, theta).
ReducedState reduced_rhs(const ReducedState& x, const ReducedControl& u,
                         const Plant& plant);

/// Central differences with per-coordinate step
/// h_i = step_scale * max(1, |z_i|); step_scale defaults to 1e-6.
LinearModel linearize(const ReducedField& field, const ReducedState& x,
                      const ReducedControl& u, double step_scale = 1e-6);
LinearModel linearize(const OperatingPoint& point, const Plant& plant,
                      double step_scale = 1e-6);

struct CareSolution {
  Eigen::MatrixXd p;
  Eigen::MatrixXd k;
  Eigen::VectorXcd closed_loop_eigenvalues;
  double residual = 0.0;  // Frobenius norm of the Riccati residual
};

/// Stabilizing solution of A'P + PA - P B R^-1 B' P + Q = 0 via the matrix
/// sign function of the Hamiltonian, polished by Newton-Kleinman steps.
/// Throws SynthesisError (with residual history) when the residual exceeds
/// 1e-8 or the closed loop is not Hurwitz.
CareSolution solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const Eigen::MatrixXd& q, const Eigen::MatrixXd& r);

/// Frobenius norm of the CARE residual for a candidate P.
double care_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                     const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                     const Eigen::MatrixXd& p);

/// Solves A'X + XA + C = 0 through the Kronecker form.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

struct LqrWeights {
  Eigen::Vector4d q_diag = Eigen::Vector4d::Zero();
  Eigen::Vector2d r_diag = Eigen::Vector2d::Ones();
  bool operator==(const LqrWeights&) const = default;
};

struct LqrDesign {
  OperatingPoint point;
  LinearModel model;
  LqrWeights weights;
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  FeedbackGain k = FeedbackGain::Zero();
  Eigen::Vector4cd closed_loop_eigenvalues = Eigen::Vector4cd::Zero();
  double care_residual = 0.0;

  LqrLaw law() const { return {point.x_ref, point.u_ref, k}; }
  double spectral_abscissa() const;
};

LqrDesign design_lqr(const OperatingPoint& point, const LqrWeights& weights,
                     const Plant& plant);

struct BrysonWeights {
  Eigen::VectorXd q_diag;
  Eigen::VectorXd r_diag;
};

/// Q_ii = 1/s_i^2, R_jj = 1/c_j^2. A state scale of 0 or +inf marks an ignored
/// state (Q_ii = 0). Control scales must be positive and finite.
BrysonWeights bryson_init(std::span<const double> state_scales,
                          std::span<const double> control_scales);

}  // namespace ctol
