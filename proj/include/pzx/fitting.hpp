#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pzx/measure.hpp"

namespace pzx {

/// The two closed-form model families fitted to magnitude sweeps:
///   TwoTermExp: y(x) = a*e^{bx} + c*e^{dx},  params (a, b, c, d)
///   Gaussian:   y(x) = a*e^{-((x-b)/c)^2},   params (a, b, c), c > 0
enum class ModelKind { TwoTermExp, Gaussian };

struct FitModel {
  ModelKind kind = ModelKind::TwoTermExp;
  Eigen::VectorXd params;
};

struct FitResult {
  FitModel model;
  double rmse = 0.0;
  double r_squared = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  int max_iterations = 200;
  double sse_rel_tol = 1e-12;   // converged when an accepted step improves SSE by less
  double step_rel_tol = 1e-10;  // converged when the proposed step is this small
  double lambda0 = 1e-3;
  /// When non-null, receives the SSE after every accepted step (for
  /// monitoring the descent).
  std::vector<double>* sse_trace = nullptr;
};

int param_count(ModelKind kind);

/// Evaluate y(x) for the model. Throws Overflow when an exponent argument
/// exceeds 700 (TwoTermExp only; the Gaussian exponent is never positive).
double model_eval(const FitModel& model, double x);

/// Analytic partial derivatives of y(x) w.r.t. each parameter, in parameter
/// order. Throws as model_eval.
Eigen::VectorXd model_jacobian(const FitModel& model, double x);

/// Starting parameters from dataset shape. TwoTermExp: saturating-rise
/// heuristic a = max magnitude, c = -a, b = 0, d = -1/omega_half (smallest
/// omega whose magnitude reaches a/2). Gaussian: a = peak, b = argmax omega,
/// c = half-width where the magnitude falls to a/e (fallback: a quarter of
/// the sweep span). Throws DegenerateDataset on a flat response.
Eigen::VectorXd init_params(ModelKind kind, const SweepDataset& ds);

/// Pick the model family by shape: an interior peak at least 1.2x both
/// endpoint magnitudes selects Gaussian, anything else TwoTermExp. Throws
/// DegenerateDataset on a flat response.
ModelKind select_model(const SweepDataset& ds);

/// Damped least-squares (Levenberg-Marquardt) fit of the model to
/// (omega, magnitude) pairs. Every accepted step strictly decreases the sum
/// of squared residuals; lambda starts at opts.lambda0, x10 on rejection,
/// /10 on acceptance. Frequencies are rescaled by 1/median(omega) internally
/// and parameters unscaled on output. Throws InsufficientSamples,
/// NonFiniteResidual, or SingularNormalEquations.
FitResult lm_fit(ModelKind kind, const SweepDataset& ds, const Eigen::VectorXd& init,
                 const FitOptions& opts = {});

}  // namespace pzx
