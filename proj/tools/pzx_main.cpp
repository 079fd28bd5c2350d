#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "pzx/extract.hpp"
#include "pzx/filter_zoo.hpp"
#include "pzx/measure.hpp"
#include "pzx/report.hpp"
#include "pzx/svg.hpp"

namespace {

/// Bad flag values discovered after CLI11 parsing (malformed --sweep, unknown
/// family, ...). Distinguished from runtime failures so main can exit 2.
class FlagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  // generate
  std::string family;
  double r = 0.0, c = 0.0, w0 = 0.0, q = 0.0;
  std::string pz_file;
  std::string sweep;
  std::string spacing = "log";
  double noise = 0.0;
  int adc_bits = 10;
  double vref = 5.0;
  std::uint64_t seed = 0;
  bool phase = false;
  bool hz = false;
  // fit / extract / pipeline
  std::string strategy = "auto";
  int num_deg = 1;
  int den_deg = 1;
  std::string model = "auto";
  std::string truth_path;
  double tolerance = 0.0;
  bool has_tolerance = false;
  // io
  std::string in_path;
  std::string out_path;
  std::string svg_path;
  // presence markers for optional filter parameters
  bool has_r = false, has_c = false, has_w0 = false, has_q = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw pzx::Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

/// Write via a temp file and rename so an error never leaves a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw pzx::Error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw pzx::Error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

void emit_document(const Options& opts, const std::string& content) {
  if (opts.out_path.empty())
    std::cout << content;
  else
    write_atomic(opts.out_path, content);
}

std::string truth_path_for(std::string out) {
  if (out.ends_with(".csv")) out.erase(out.size() - 4);
  return out + ".truth.json";
}

void parse_sweep(const std::string& text, double* w_min, double* w_max, int* n) {
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%n", w_min, w_max, n, &consumed) != 3 ||
      consumed != static_cast<int>(text.size()))
    throw FlagError("--sweep expects wmin:wmax:n, got '" + text + "'");
}

pzx::Strategy strategy_from_name(const std::string& name) {
  if (name == "auto") return pzx::Strategy::Auto;
  if (name == "model") return pzx::Strategy::Model;
  if (name == "rational") return pzx::Strategy::Rational;
  return pzx::Strategy::MagSq;
}

std::optional<pzx::ModelKind> model_from_name(const std::string& name) {
  if (name == "exp2") return pzx::ModelKind::TwoTermExp;
  if (name == "gauss1") return pzx::ModelKind::Gaussian;
  return std::nullopt;
}

pzx::SweepDataset load_dataset(const Options& opts) {
  std::ifstream f(opts.in_path, std::ios::binary);
  if (!f) throw pzx::Error("cannot open '" + opts.in_path + "' for reading");
  pzx::SweepDataset ds = pzx::parse_csv(f);
  if (opts.hz)
    for (pzx::FrequencySample& s : ds.samples) s.omega *= 2.0 * std::numbers::pi;
  return pzx::normalize_gain(ds, ds.input_amplitude);
}

int cmd_generate(const Options& opts) {
  pzx::FilterSpec spec;
  try {
    spec.family = pzx::family_from_name(opts.family);
  } catch (const pzx::Error& e) {
    throw FlagError(e.what());
  }
  if (spec.family == pzx::FilterFamily::Custom) {
    if (opts.pz_file.empty())
      throw FlagError("--family custom requires --pz-file");
    spec.custom_pz = pzx::pz_from_json(read_file(opts.pz_file));
  }
  if (opts.has_r) spec.r_ohms = opts.r;
  if (opts.has_c) spec.c_farads = opts.c;
  if (opts.has_w0) spec.w0 = opts.w0;
  if (opts.has_q) spec.q = opts.q;

  double w_min = 0.0, w_max = 0.0;
  int n = 0;
  parse_sweep(opts.sweep, &w_min, &w_max, &n);
  if (opts.hz) {
    w_min *= 2.0 * std::numbers::pi;
    w_max *= 2.0 * std::numbers::pi;
  }

  const pzx::RationalTF tf = pzx::make_filter(spec);
  const std::vector<double> plan = pzx::plan_sweep(
      w_min, w_max, n, opts.spacing == "linear" ? pzx::Spacing::Linear : pzx::Spacing::Log);

  pzx::MeasurementConfig cfg;
  cfg.adc_bits = opts.adc_bits;
  cfg.v_ref = opts.vref;
  cfg.noise_sigma = opts.noise;
  cfg.seed = opts.seed;
  cfg.record_phase = opts.phase;
  const pzx::SweepDataset ds = pzx::simulate_sweep(tf, plan, cfg);

  std::ostringstream csv;
  pzx::emit_csv(ds, csv);
  write_atomic(opts.out_path, csv.str());

  const pzx::PoleZeroSet truth =
      spec.custom_pz ? *spec.custom_pz : pzx::poles_zeros(tf);
  write_atomic(truth_path_for(opts.out_path), pzx::pz_to_json(truth));
  return 0;
}

int cmd_extract_like(const Options& opts, pzx::Strategy strategy, bool allow_compare) {
  const pzx::SweepDataset ds = load_dataset(opts);
  const pzx::ExtractionReport report = pzx::extract_pipeline(
      ds, strategy, opts.num_deg, opts.den_deg, model_from_name(opts.model));

  int code = 0;
  std::optional<pzx::ComparisonReport> comparison;
  if (allow_compare && !opts.truth_path.empty()) {
    const pzx::PoleZeroSet truth = pzx::pz_from_json(read_file(opts.truth_path));
    comparison = pzx::compare_pz(report.pz, truth);
    if (opts.has_tolerance && comparison->max_rel_error > opts.tolerance) code = 3;
  }

  emit_document(opts, pzx::report_to_json(report, comparison ? &*comparison : nullptr));
  if (!opts.svg_path.empty()) write_atomic(opts.svg_path, pzx::render_pz_svg(report.pz));
  return code;
}

int cmd_compare(const Options& opts) {
  const pzx::PoleZeroSet extracted = pzx::pz_from_json(read_file(opts.in_path));
  const pzx::PoleZeroSet truth = pzx::pz_from_json(read_file(opts.truth_path));
  const pzx::ComparisonReport comparison = pzx::compare_pz(extracted, truth);
  emit_document(opts, pzx::comparison_to_json(comparison));
  return opts.has_tolerance && comparison.max_rel_error > opts.tolerance ? 3 : 0;
}

int cmd_plot(const Options& opts) {
  const pzx::PoleZeroSet pz = pzx::pz_from_json(read_file(opts.in_path));
  write_atomic(opts.out_path, pzx::render_pz_svg(pz));
  return 0;
}

std::string family_help() {
  std::string help = "filter family:";
  for (const pzx::FamilyInfo& info : pzx::list_families()) {
    help += " " + info.cli_name + " (needs";
    for (const std::string& req : info.required) help += " " + req;
    help += ")";
  }
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  CLI::App app{"Extract pole-zero sets of analog filters from sampled frequency-response data"};
  app.require_subcommand(1);

  CLI::App* generate = app.add_subcommand(
      "generate", "Simulate a measured frequency sweep of a known filter; writes the dataset "
                  "CSV and a <out>.truth.json with the exact poles/zeros");
  generate->add_option("--family", opts.family, family_help())->required();
  generate->add_option("--r", opts.r, "resistance in ohms (first-order families)");
  generate->add_option("--c", opts.c, "capacitance in farads (first-order families)");
  generate->add_option("--w0", opts.w0, "corner/center frequency in rad/s");
  generate->add_option("--q", opts.q, "quality factor (second-order families)");
  generate->add_option("--pz-file", opts.pz_file,
                       "JSON file with {poles, zeros, gain} for --family custom");
  generate->add_option("--sweep", opts.sweep, "sweep grid as wmin:wmax:n (rad/s unless --hz)")
      ->required();
  generate->add_option("--spacing", opts.spacing, "grid spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  generate->add_option("--noise", opts.noise, "relative Gaussian noise sigma on magnitudes")
      ->capture_default_str();
  generate->add_option("--adc-bits", opts.adc_bits, "ADC resolution in bits (1..24)")
      ->capture_default_str();
  generate->add_option("--vref", opts.vref, "ADC reference voltage")->capture_default_str();
  generate->add_option("--seed", opts.seed, "noise RNG seed")->envname("PZX_SEED");
  generate->add_flag("--phase", opts.phase, "record exact phase alongside magnitudes");
  generate->add_flag("--hz", opts.hz, "sweep bounds are in Hz (converted by 2*pi)");
  generate->add_option("--out", opts.out_path, "output CSV path")->required();

  auto add_ingest_flags = [&](CLI::App* cmd) {
    cmd->add_option("--in", opts.in_path, "input dataset CSV")->required();
    cmd->add_flag("--hz", opts.hz, "input omega column is in Hz (converted by 2*pi)");
    cmd->add_option("--out", opts.out_path, "report JSON path (stdout when omitted)");
  };

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit a closed-form model to a magnitude sweep and report the implied poles/zeros");
  add_ingest_flags(fit);
  fit->add_option("--model", opts.model, "model family: exp2, gauss1, or auto")
      ->check(CLI::IsMember({"exp2", "gauss1", "auto"}))
      ->capture_default_str();

  auto add_extract_flags = [&](CLI::App* cmd) {
    add_ingest_flags(cmd);
    cmd->add_option("--strategy", opts.strategy, "extraction route")
        ->check(CLI::IsMember({"auto", "model", "rational", "magsq"}))
        ->capture_default_str();
    cmd->add_option("--num-deg", opts.num_deg, "numerator degree for rational fits")
        ->capture_default_str();
    cmd->add_option("--den-deg", opts.den_deg, "denominator degree for rational fits")
        ->capture_default_str();
    cmd->add_option("--model", opts.model, "model family: exp2, gauss1, or auto")
        ->check(CLI::IsMember({"exp2", "gauss1", "auto"}))
        ->capture_default_str();
  };

  CLI::App* extract = app.add_subcommand(
      "extract", "Extract a transfer function and pole-zero set from a dataset CSV");
  add_extract_flags(extract);

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Full run: ingest, extract, optionally compare against a truth file, "
                  "write the JSON report and an optional SVG plot");
  add_extract_flags(pipeline);
  pipeline->add_option("--truth", opts.truth_path, "truth JSON with {poles, zeros, gain}");
  pipeline->add_option("--tolerance", opts.tolerance,
                       "exit 3 when comparison max_rel_error exceeds this")
      ->needs(pipeline->get_option("--truth"));
  pipeline->add_option("--svg", opts.svg_path, "also render the pole-zero plot here");

  CLI::App* compare = app.add_subcommand(
      "compare", "Compare an extracted pole-zero set (report or truth JSON) against a truth "
                 "JSON");
  compare->add_option("--in", opts.in_path, "extracted report/pz JSON")->required();
  compare->add_option("--truth", opts.truth_path, "truth JSON")->required();
  compare->add_option("--tolerance", opts.tolerance,
                      "exit 3 when max_rel_error exceeds this");
  compare->add_option("--out", opts.out_path, "comparison JSON path (stdout when omitted)");

  CLI::App* plot = app.add_subcommand(
      "plot", "Render the pole-zero scatter of a report/truth JSON as SVG");
  plot->add_option("--in", opts.in_path, "report or truth JSON")->required();
  plot->add_option("--out", opts.out_path, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  opts.has_r = generate->count("--r") > 0;
  opts.has_c = generate->count("--c") > 0;
  opts.has_w0 = generate->count("--w0") > 0;
  opts.has_q = generate->count("--q") > 0;
  opts.has_tolerance =
      pipeline->count("--tolerance") > 0 || compare->count("--tolerance") > 0;

  try {
    if (app.got_subcommand(generate)) return cmd_generate(opts);
    if (app.got_subcommand(fit))
      return cmd_extract_like(opts, pzx::Strategy::Model, /*allow_compare=*/false);
    if (app.got_subcommand(extract))
      return cmd_extract_like(opts, strategy_from_name(opts.strategy),
                              /*allow_compare=*/false);
    if (app.got_subcommand(pipeline))
      return cmd_extract_like(opts, strategy_from_name(opts.strategy),
                              /*allow_compare=*/true);
    if (app.got_subcommand(compare)) return cmd_compare(opts);
    if (app.got_subcommand(plot)) return cmd_plot(opts);
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pzx::AllPassAmbiguity& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: regenerate the dataset with --phase and extract with "
                 "--strategy rational; flat magnitude alone cannot identify an all-pass\n";
    return 1;
  } catch (const pzx::DegenerateDataset& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: a flat response carries no model information; record phase "
                 "(--phase) and use --strategy rational\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable: require_subcommand(1)
}
