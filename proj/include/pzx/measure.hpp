#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pzx/transfer_function.hpp"

namespace pzx {

/// One recorded point of a frequency sweep. omega is angular (rad/s),
/// magnitude is dimensionless gain, phase (radians, (-pi, pi]) is optional.
struct FrequencySample {
  double omega = 0.0;
  double magnitude = 0.0;
  std::optional<double> phase;
};

/// Acquisition-chain model: ADC resolution and reference, the gain-to-volts
/// mapping, multiplicative gain noise, and the frequency-to-voltage
/// calibration factor applied to the reported frequency axis.
struct MeasurementConfig {
  int adc_bits = 10;
  double v_ref = 5.0;
  double full_scale_gain = 5.0;  // volts recorded for gain 1.0
  double noise_sigma = 0.0;      // relative std-dev, multiplicative
  double f2v_calibration = 1.0;
  std::uint64_t seed = 0;
  bool record_phase = false;
};

/// An ordered sweep (strictly ascending omega, >= 2 samples). meta holds the
/// MeasurementConfig that produced it, or nullopt for ingested data.
struct SweepDataset {
  std::vector<FrequencySample> samples;
  std::optional<MeasurementConfig> meta;
  double input_amplitude = 1.0;

  bool has_phase() const;
};

enum class Spacing { Log, Linear };

/// n strictly increasing frequencies covering [w_min, w_max], endpoints
/// exact. Throws InvalidRange unless 0 < w_min < w_max and n >= 2.
std::vector<double> plan_sweep(double w_min, double w_max, int n, Spacing spacing);

/// Run the simulated acquisition chain over the plan: evaluate |H(j*omega)|,
/// apply multiplicative Gaussian noise from the seeded generator, map to
/// volts, clamp to [0, v_ref], quantize to adc_bits, and convert back to a
/// gain. Phase is recorded exactly when cfg.record_phase. Deterministic for
/// identical inputs. Throws PoleOnAxis and SaturatedSweep (> 50% of samples
/// clipped at v_ref).
SweepDataset simulate_sweep(const RationalTF& tf, const std::vector<double>& plan,
                            const MeasurementConfig& cfg);

/// Parse the sweep CSV exchange format:
///   header `omega_rad_s,magnitude` or `omega_rad_s,magnitude,phase_rad`,
///   `#`-prefixed comment lines, directive `# input_amplitude=<float>`.
/// Rows are sorted ascending by omega; duplicates are rejected. Accepts LF
/// or CRLF. Throws MalformedHeader, NonNumericField, DuplicateFrequency,
/// EmptyDataset.
SweepDataset parse_csv(std::istream& in);

/// Emit the CSV exchange format: LF line endings, 17 significant digits,
/// input_amplitude directive first. parse_csv(emit_csv(ds)) reproduces the
/// samples and amplitude exactly.
void emit_csv(const SweepDataset& ds, std::ostream& out);

/// Divide every magnitude by the input amplitude; the result has
/// input_amplitude 1. Throws NonPositiveAmplitude.
SweepDataset normalize_gain(const SweepDataset& ds, double input_amplitude);

}  // namespace pzx
