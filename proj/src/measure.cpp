#include "pzx/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace pzx {

namespace {

/// Standard-normal draws built directly on mt19937_64 output (Box-Muller on
/// explicitly scaled 64-bit draws), so identical seeds give identical
/// streams on every platform -- std::normal_distribution does not promise
/// that.
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 rng_;
};

double parse_field(const std::string& text, int line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw NonNumericField("parse_csv: non-numeric field '" + text + "' on line " +
                              std::to_string(line_no),
                          line_no);
  return value;
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool SweepDataset::has_phase() const {
  if (samples.empty()) return false;
  return std::all_of(samples.begin(), samples.end(),
                     [](const FrequencySample& s) { return s.phase.has_value(); });
}

std::vector<double> plan_sweep(double w_min, double w_max, int n, Spacing spacing) {
  if (!(w_min > 0.0) || !(w_max > w_min))
    throw InvalidRange("plan_sweep: need 0 < w_min < w_max");
  if (n < 2) throw InvalidRange("plan_sweep: need at least 2 points");

  std::vector<double> plan(static_cast<size_t>(n));
  if (spacing == Spacing::Log) {
    const double ratio = w_max / w_min;
    for (int k = 0; k < n; ++k)
      plan[static_cast<size_t>(k)] =
          w_min * std::pow(ratio, static_cast<double>(k) / static_cast<double>(n - 1));
  } else {
    const double step = (w_max - w_min) / static_cast<double>(n - 1);
    for (int k = 0; k < n; ++k) plan[static_cast<size_t>(k)] = w_min + step * k;
  }
  plan.front() = w_min;
  plan.back() = w_max;
  for (size_t k = 1; k < plan.size(); ++k)
    if (!(plan[k] > plan[k - 1])) throw InvalidRange("plan_sweep: grid is not strictly increasing");
  return plan;
}

SweepDataset simulate_sweep(const RationalTF& tf, const std::vector<double>& plan,
                            const MeasurementConfig& cfg) {
  if (plan.size() < 2) throw InvalidRange("simulate_sweep: plan needs at least 2 points");
  for (size_t k = 1; k < plan.size(); ++k)
    if (!(plan[k] > plan[k - 1]))
      throw InvalidRange("simulate_sweep: plan is not strictly increasing");
  if (cfg.adc_bits < 1 || cfg.adc_bits > 24)
    throw InvalidRange("simulate_sweep: adc_bits must be in [1, 24]");
  if (!(cfg.v_ref > 0.0) || !(cfg.full_scale_gain > 0.0))
    throw InvalidRange("simulate_sweep: v_ref and full_scale_gain must be positive");
  if (!(cfg.noise_sigma >= 0.0) || cfg.noise_sigma >= 0.5)
    throw InvalidRange("simulate_sweep: noise_sigma must be in [0, 0.5)");

  GaussianSource noise(cfg.seed);
  const double levels = std::ldexp(1.0, cfg.adc_bits) - 1.0;  // 2^bits - 1

  SweepDataset ds;
  ds.meta = cfg;
  ds.input_amplitude = 1.0;
  ds.samples.reserve(plan.size());

  size_t clipped = 0;
  for (double omega : plan) {
    Complex h;
    try {
      h = eval_tf(tf, Complex(0.0, omega));
    } catch (const EvaluationAtPole&) {
      throw PoleOnAxis("simulate_sweep: pole on the imaginary axis at omega = " + format17(omega),
                       omega);
    }
    double gain = std::abs(h);
    if (!std::isfinite(gain))
      throw PoleOnAxis("simulate_sweep: non-finite response at omega = " + format17(omega), omega);

    if (cfg.noise_sigma > 0.0) gain *= 1.0 + cfg.noise_sigma * noise();

    double volts = gain * cfg.full_scale_gain;
    if (volts > cfg.v_ref) {
      volts = cfg.v_ref;
      ++clipped;
    }
    if (volts < 0.0) volts = 0.0;
    const double counts = std::round(volts / cfg.v_ref * levels);
    const double quantized = counts * cfg.v_ref / levels;

    FrequencySample sample;
    sample.omega = omega * cfg.f2v_calibration;
    sample.magnitude = quantized / cfg.full_scale_gain;
    if (cfg.record_phase) {
      double phase = std::arg(h);
      if (phase == -std::numbers::pi) phase = std::numbers::pi;
      sample.phase = phase;
    }
    ds.samples.push_back(sample);
  }

  if (2 * clipped > plan.size())
    throw SaturatedSweep("simulate_sweep: " + std::to_string(clipped) + " of " +
                         std::to_string(plan.size()) + " samples clipped at v_ref");
  return ds;
}

SweepDataset parse_csv(std::istream& in) {
  SweepDataset ds;
  ds.input_amplitude = 1.0;

  std::string line;
  int line_no = 0;
  bool header_seen = false;
  bool with_phase = false;

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t comma = s.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(s.substr(start));
        break;
      }
      fields.push_back(s.substr(start, comma - start));
      start = comma + 1;
    }
    return fields;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string directive = "# input_amplitude=";
      if (line.rfind(directive, 0) == 0)
        ds.input_amplitude = parse_field(line.substr(directive.size()), line_no);
      continue;
    }
    if (!header_seen) {
      if (line == "omega_rad_s,magnitude") {
        with_phase = false;
      } else if (line == "omega_rad_s,magnitude,phase_rad") {
        with_phase = true;
      } else {
        throw MalformedHeader("parse_csv: expected header 'omega_rad_s,magnitude[,phase_rad]', got '" +
                              line + "'");
      }
      header_seen = true;
      continue;
    }

    const std::vector<std::string> fields = split(line);
    const size_t expected = with_phase ? 3 : 2;
    if (fields.size() != expected)
      throw NonNumericField("parse_csv: expected " + std::to_string(expected) +
                                " fields on line " + std::to_string(line_no),
                            line_no);
    FrequencySample sample;
    sample.omega = parse_field(fields[0], line_no);
    sample.magnitude = parse_field(fields[1], line_no);
    if (with_phase) sample.phase = parse_field(fields[2], line_no);
    ds.samples.push_back(sample);
  }

  if (!header_seen) throw MalformedHeader("parse_csv: missing header line");
  if (ds.samples.size() < 2)
    throw EmptyDataset("parse_csv: need at least 2 data rows, got " +
                       std::to_string(ds.samples.size()));

  std::stable_sort(ds.samples.begin(), ds.samples.end(),
                   [](const FrequencySample& a, const FrequencySample& b) {
                     return a.omega < b.omega;
                   });
  for (size_t k = 1; k < ds.samples.size(); ++k)
    if (ds.samples[k].omega == ds.samples[k - 1].omega)
      throw DuplicateFrequency("parse_csv: duplicate omega " + format17(ds.samples[k].omega),
                               ds.samples[k].omega);
  return ds;
}

void emit_csv(const SweepDataset& ds, std::ostream& out) {
  out << "# input_amplitude=" << format17(ds.input_amplitude) << "\n";
  const bool with_phase = ds.has_phase();
  out << (with_phase ? "omega_rad_s,magnitude,phase_rad" : "omega_rad_s,magnitude") << "\n";
  for (const FrequencySample& s : ds.samples) {
    out << format17(s.omega) << "," << format17(s.magnitude);
    if (with_phase) out << "," << format17(*s.phase);
    out << "\n";
  }
}

SweepDataset normalize_gain(const SweepDataset& ds, double input_amplitude) {
  if (!(input_amplitude > 0.0))
    throw NonPositiveAmplitude("normalize_gain: input amplitude must be positive");
  SweepDataset out = ds;
  for (FrequencySample& s : out.samples) s.magnitude /= input_amplitude;
  out.input_amplitude = 1.0;
  return out;
}

}  // namespace pzx
