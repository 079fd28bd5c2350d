#include "pzx/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pzx {

namespace {

constexpr double kExpLimit = 700.0;  // just under log(DBL_MAX)

double checked_exp(double arg) {
  if (arg > kExpLimit)
    throw Overflow("model_eval: exponent " + std::to_string(arg) + " exceeds " +
                   std::to_string(kExpLimit));
  return std::exp(arg);
}

/// Non-throwing evaluation for use inside the solver loop: trial parameters
/// may overflow, which just means the step gets rejected.
double eval_or_nan(const FitModel& m, double x) {
  if (m.kind == ModelKind::TwoTermExp) {
    const double e1 = m.params(1) * x;
    const double e2 = m.params(3) * x;
    if (e1 > kExpLimit || e2 > kExpLimit) return std::numeric_limits<double>::quiet_NaN();
    return m.params(0) * std::exp(e1) + m.params(2) * std::exp(e2);
  }
  const double u = (x - m.params(1)) / m.params(2);
  return m.params(0) * std::exp(-u * u);
}

double median(std::vector<double> v) {
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

/// Parameter transforms between natural units and the internally scaled
/// frequency axis x_tilde = x / w_med. TwoTermExp exponents scale up by
/// w_med; Gaussian location/width scale down.
Eigen::VectorXd to_scaled(ModelKind kind, Eigen::VectorXd p, double w_med) {
  if (kind == ModelKind::TwoTermExp) {
    p(1) *= w_med;
    p(3) *= w_med;
  } else {
    p(1) /= w_med;
    p(2) /= w_med;
  }
  return p;
}

Eigen::VectorXd from_scaled(ModelKind kind, Eigen::VectorXd p, double w_med) {
  if (kind == ModelKind::TwoTermExp) {
    p(1) /= w_med;
    p(3) /= w_med;
  } else {
    p(1) *= w_med;
    p(2) *= w_med;
  }
  return p;
}

struct Shape {
  Eigen::Index n = 0;
  Eigen::Index peak = 0;  // index of the magnitude maximum
  double max_mag = 0.0;
  double min_mag = 0.0;
};

Shape dataset_shape(const SweepDataset& ds, const char* who) {
  Shape s;
  s.n = static_cast<Eigen::Index>(ds.samples.size());
  if (s.n == 0) throw DegenerateDataset(std::string(who) + ": empty dataset");
  s.max_mag = ds.samples[0].magnitude;
  s.min_mag = ds.samples[0].magnitude;
  for (Eigen::Index k = 1; k < s.n; ++k) {
    const double m = ds.samples[static_cast<size_t>(k)].magnitude;
    if (m > s.max_mag) {
      s.max_mag = m;
      s.peak = k;
    }
    if (m < s.min_mag) s.min_mag = m;
  }
  if (!(s.max_mag > 0.0) || s.max_mag - s.min_mag <= 1e-9 * s.max_mag)
    throw DegenerateDataset(std::string(who) + ": flat magnitude response cannot be fit");
  return s;
}

}  // namespace

int param_count(ModelKind kind) { return kind == ModelKind::TwoTermExp ? 4 : 3; }

double model_eval(const FitModel& model, double x) {
  const auto& p = model.params;
  if (model.kind == ModelKind::TwoTermExp)
    return p(0) * checked_exp(p(1) * x) + p(2) * checked_exp(p(3) * x);
  const double u = (x - p(1)) / p(2);
  return p(0) * std::exp(-u * u);
}

Eigen::VectorXd model_jacobian(const FitModel& model, double x) {
  const auto& p = model.params;
  if (model.kind == ModelKind::TwoTermExp) {
    const double e1 = checked_exp(p(1) * x);
    const double e2 = checked_exp(p(3) * x);
    Eigen::VectorXd j(4);
    j << e1, p(0) * x * e1, e2, p(2) * x * e2;
    return j;
  }
  const double u = (x - p(1)) / p(2);
  const double e = std::exp(-u * u);
  Eigen::VectorXd j(3);
  j << e, p(0) * e * 2.0 * u / p(2), p(0) * e * 2.0 * u * u / p(2);
  return j;
}

Eigen::VectorXd init_params(ModelKind kind, const SweepDataset& ds) {
  const Shape s = dataset_shape(ds, "init_params");
  const auto& samples = ds.samples;

  if (kind == ModelKind::TwoTermExp) {
    const double a = s.max_mag;
    double w_half = samples.back().omega;
    for (const FrequencySample& smp : samples)
      if (smp.magnitude >= 0.5 * a) {
        w_half = smp.omega;
        break;
      }
    if (!(w_half > 0.0)) w_half = std::abs(samples.back().omega) > 0.0 ? std::abs(samples.back().omega) : 1.0;
    Eigen::VectorXd p(4);
    p << a, 0.0, -a, -1.0 / w_half;
    return p;
  }

  const double a = s.max_mag;
  const double b = samples[static_cast<size_t>(s.peak)].omega;
  const double cutoff = a * std::exp(-1.0);
  double left = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index k = s.peak; k >= 0; --k)
    if (samples[static_cast<size_t>(k)].magnitude <= cutoff) {
      left = b - samples[static_cast<size_t>(k)].omega;
      break;
    }
  double right = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index k = s.peak; k < s.n; ++k)
    if (samples[static_cast<size_t>(k)].magnitude <= cutoff) {
      right = samples[static_cast<size_t>(k)].omega - b;
      break;
    }

  double c;
  if (std::isfinite(left) && std::isfinite(right))
    c = 0.5 * (left + right);
  else if (std::isfinite(left))
    c = left;
  else if (std::isfinite(right))
    c = right;
  else
    c = 0.25 * (samples.back().omega - samples.front().omega);
  if (!(c > 0.0)) c = 0.25 * (samples.back().omega - samples.front().omega);

  Eigen::VectorXd p(3);
  p << a, b, c;
  return p;
}

ModelKind select_model(const SweepDataset& ds) {
  const Shape s = dataset_shape(ds, "select_model");
  const double first = ds.samples.front().magnitude;
  const double last = ds.samples.back().magnitude;
  const bool interior = s.peak != 0 && s.peak != s.n - 1;
  if (interior && s.max_mag >= 1.2 * first && s.max_mag >= 1.2 * last)
    return ModelKind::Gaussian;
  return ModelKind::TwoTermExp;
}

FitResult lm_fit(ModelKind kind, const SweepDataset& ds, const Eigen::VectorXd& init,
                 const FitOptions& opts) {
  const Eigen::Index n = static_cast<Eigen::Index>(ds.samples.size());
  const int np = param_count(kind);
  if (init.size() != np)
    throw InvalidRange("lm_fit: expected " + std::to_string(np) + " initial parameters");
  if (n < np)
    throw InsufficientSamples("lm_fit: " + std::to_string(n) + " samples for " +
                              std::to_string(np) + " parameters");
  if (!init.allFinite()) throw NonFiniteResidual("lm_fit: non-finite initial parameters");

  Eigen::VectorXd x(n), y(n);
  std::vector<double> omegas(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    x(k) = ds.samples[static_cast<size_t>(k)].omega;
    y(k) = ds.samples[static_cast<size_t>(k)].magnitude;
    omegas[static_cast<size_t>(k)] = x(k);
  }
  if (!x.allFinite() || !y.allFinite()) throw NonFiniteResidual("lm_fit: non-finite samples");

  double w_med = median(std::move(omegas));
  if (!(std::abs(w_med) > 0.0)) w_med = 1.0;
  w_med = std::abs(w_med);
  const Eigen::VectorXd xs = x / w_med;

  FitModel cur{kind, to_scaled(kind, init, w_med)};

  auto sse_of = [&](const FitModel& m) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double r = y(k) - eval_or_nan(m, xs(k));
      acc += r * r;
    }
    return acc;  // NaN propagates and flags the step as unusable
  };

  double sse = sse_of(cur);
  if (!std::isfinite(sse))
    throw NonFiniteResidual("lm_fit: residuals are non-finite at the initial parameters");

  double lambda = opts.lambda0;
  int iterations = 0;
  bool converged = sse == 0.0;

  while (!converged && iterations < opts.max_iterations) {
    // Assemble J^T J and J^T r at the current point.
    Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(np, np);
    Eigen::VectorXd jtr = Eigen::VectorXd::Zero(np);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::VectorXd row = model_jacobian(cur, xs(k));
      const double r = y(k) - eval_or_nan(cur, xs(k));
      jtj.noalias() += row * row.transpose();
      jtr.noalias() += row * r;
    }
    if (!jtj.allFinite() || !jtr.allFinite())
      throw NonFiniteResidual("lm_fit: non-finite Jacobian");

    const double diag_max = jtj.diagonal().maxCoeff();
    if (!(diag_max > 0.0))
      throw SingularNormalEquations("lm_fit: Jacobian is identically zero");
    // Damping floor keeps parameters with locally vanishing sensitivity from
    // producing a singular system.
    const Eigen::VectorXd damp = jtj.diagonal().cwiseMax(1e-12 * diag_max);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * damp;
      const Eigen::VectorXd step = a.ldlt().solve(jtr);
      if (!step.allFinite())
        throw SingularNormalEquations("lm_fit: damped normal equations are singular");

      // A vanishing proposal means the gradient is dead or lambda has pushed
      // the step to nothing; either way the iteration has converged. Checked
      // before acceptance so rejection loops terminate.
      if (step.norm() <= opts.step_rel_tol * (cur.params.norm() + opts.step_rel_tol)) {
        converged = true;
        break;
      }

      FitModel trial{kind, cur.params + step};
      if (kind == ModelKind::Gaussian && !(std::abs(trial.params(2)) > 0.0)) {
        lambda *= 10.0;  // width collapsed to zero; treat as a rejected step
        continue;
      }
      const double trial_sse = sse_of(trial);

      if (std::isfinite(trial_sse) && trial_sse < sse) {
        const double drop = sse - trial_sse;
        cur = std::move(trial);
        sse = trial_sse;
        lambda = std::max(lambda * 0.1, 1e-15);
        accepted = true;
        ++iterations;
        if (opts.sse_trace) opts.sse_trace->push_back(sse);
        if (drop < opts.sse_rel_tol * std::max(sse, 1e-300) || sse == 0.0) converged = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e30) {  // safety net; the step-norm test normally fires first
          converged = false;
          break;
        }
      }
    }
    if (lambda > 1e30) break;
  }

  FitResult out;
  out.model.kind = kind;
  out.model.params = from_scaled(kind, cur.params, w_med);
  if (kind == ModelKind::Gaussian && out.model.params(2) < 0.0)
    out.model.params(2) = -out.model.params(2);  // c enters squared; keep it positive
  out.iterations = iterations;
  out.converged = converged;
  out.rmse = std::sqrt(sse / static_cast<double>(n));

  const double mean_y = y.mean();
  const double tss = (y.array() - mean_y).square().sum();
  if (tss > 0.0)
    out.r_squared = 1.0 - sse / tss;
  else
    out.r_squared = sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace pzx
