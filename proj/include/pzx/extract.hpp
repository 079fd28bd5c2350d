#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pzx/fitting.hpp"
#include "pzx/measure.hpp"
#include "pzx/transfer_function.hpp"

namespace pzx {

/// Which route produced an extraction result.
enum class ExtractionPath { ModelExp, ModelGaussian, RationalComplex, MagnitudeSquared };

/// Route selection for extract_pipeline. Auto picks RationalComplex when
/// phase is present and otherwise hands the dataset to select_model.
enum class Strategy { Auto, Model, Rational, MagSq };

struct ExtractionReport {
  RationalTF tf;
  PoleZeroSet pz;
  ExtractionPath path = ExtractionPath::RationalComplex;
  std::vector<std::string> warnings;
  /// ModelExp only: max |(b-d)*omega| over the data window — how far the
  /// e^u ~ 1+u linearization was stretched.
  std::optional<double> linearization_span;
  /// Model paths only: the underlying nonlinear fit.
  std::optional<FitResult> fit;
};

/// One matched truth/extracted pair with its relative distance.
struct PzMatch {
  Complex truth;
  Complex extracted;
  double rel_error = 0.0;
};

struct ComparisonReport {
  std::vector<PzMatch> pole_matches;
  std::vector<PzMatch> zero_matches;
  std::vector<double> pole_errors;
  std::vector<double> zero_errors;
  double max_rel_error = 0.0;
  int unmatched_truth = 0;
  int unmatched_extracted = 0;
};

/// Iteration cap reached while the coefficients were still moving; carries
/// the last iterate so callers can inspect how close the fit got.
class NonConvergent : public Error {
 public:
  NonConvergent(const std::string& what, RationalTF last)
      : Error(what), last_(std::move(last)) {}
  const RationalTF& last_iterate() const { return last_; }

 private:
  RationalTF last_;
};

/// Turn a fitted two-term exponential y = a*e^{bx} + c*e^{dx} (d < 0) into a
/// first-order rational TF by the e^u ~ 1+u linearization:
///   y = (a*e^{(b-d)x} + c)*e^{dx} ~ (a(b-d)x + (a+c)) / (1 - d*x),
/// then x -> s. Gain a(b-d)/(-d), zero -(a+c)/(a(b-d)), pole 1/d. Common
/// factors are cancelled (with a warning via `warnings` when non-null).
/// Throws NonDecayingTerm (d >= 0) or DegenerateSlope (vanishing numerator
/// slope with a nonzero intercept).
RationalTF exp_to_rational(double a, double b, double c, double d,
                           std::vector<std::string>* warnings = nullptr);

/// Turn a fitted Gaussian peak y = a*e^{-((x-b)/c)^2} into the bandpass
/// biquad with matching -3 dB bandwidth: the Gaussian reaches a/sqrt(2) at
/// |x-b| = delta = c*sqrt(ln2/2); set w0 = b, B = 2*delta, Q = w0/B and
/// return a*(w0/Q)s / (s^2 + (w0/Q)s + w0^2). Throws NonPositiveParams or
/// PeakTooBroad (b <= 2*delta).
RationalTF gaussian_to_rational(double a, double b, double c);

/// Rational fit of phase-bearing data by iteratively reweighted complex
/// linear least squares (Sanathanan-Koerner): iteration t minimizes
/// sum_k w_k |N(s_k) - H_k*D(s_k)|^2 with w_k = 1/|D_{t-1}(s_k)|^2, D_0 = 1,
/// the denominator constant term pinned to 1 while solving, and real and
/// imaginary parts stacked as real equations. Frequencies are pre-scaled by
/// 1/median(omega). Stops when the max relative coefficient change drops
/// below 1e-10 (25 iterations cap). Throws MissingPhase,
/// InsufficientSamples, IllConditioned, or NonConvergent.
RationalTF fit_rational_complex(const SweepDataset& ds, int m, int n);

/// Magnitude-only rational fit: fits G = magnitude^2 by P(u)/Q(u) in u =
/// omega^2 with the same reweighted scheme, then spectral-factors P(-s^2)
/// and Q(-s^2), keeping the stable/minimum-phase representative of each
/// {r, -r} root pair and the positive square-root gain. Throws as
/// fit_rational_complex, plus AllPassAmbiguity when the magnitude is flat
/// (relative residual of the best constant fit < 1e-3).
RationalTF fit_magnitude_squared(const SweepDataset& ds, int m, int n);

/// End-to-end extraction. Auto: phase present -> fit_rational_complex; else
/// select_model -> lm_fit -> the matching algebraic conversion. Model can be
/// pinned with `model` (otherwise select_model decides). Degrees (m, n)
/// apply to the rational paths only.
ExtractionReport extract_pipeline(const SweepDataset& ds, Strategy strategy, int m, int n,
                                  std::optional<ModelKind> model = std::nullopt);

/// Greedy nearest-pair matching of extracted vs truth (poles with poles,
/// zeros with zeros) on relative distance |p_hat - p| divided by
/// max(|p_hat|, |p|, 1 rad/s); the floor keeps zeros at the origin
/// comparable. Unmatched leftovers are counted, not scored.
ComparisonReport compare_pz(const PoleZeroSet& extracted, const PoleZeroSet& truth);

}  // namespace pzx
