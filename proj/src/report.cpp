#include "pzx/report.hpp"

#include <cstdio>
#include <json.hpp>

namespace pzx {

namespace {

using nlohmann::json;

/// 17 significant digits round-trip doubles exactly; JSON has no literal for
/// non-finite values, so those degrade to null.
std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string num_array(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += num(v(k));
  }
  return out + "]";
}

std::string num_array(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += num(v[k]);
  }
  return out + "]";
}

std::string complex_array(const std::vector<Complex>& v) {
  std::string out = "[";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += "{\"re\": " + num(v[k].real()) + ", \"im\": " + num(v[k].imag()) + "}";
  }
  return out + "]";
}

std::string string_array(const std::vector<std::string>& v) {
  std::string out = "[";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += quoted(v[k]);
  }
  return out + "]";
}

std::string comparison_body(const ComparisonReport& c) {
  std::string out = "{\n";
  out += "    \"pole_errors\": " + num_array(c.pole_errors) + ",\n";
  out += "    \"zero_errors\": " + num_array(c.zero_errors) + ",\n";
  out += "    \"max_rel_error\": " + num(c.max_rel_error) + ",\n";
  out += "    \"unmatched_truth\": " + std::to_string(c.unmatched_truth) + ",\n";
  out += "    \"unmatched_extracted\": " + std::to_string(c.unmatched_extracted) + "\n";
  out += "  }";
  return out;
}

std::vector<Complex> complex_list(const json& arr, const char* what) {
  if (!arr.is_array()) throw InvalidRange(std::string("expected an array for ") + what);
  std::vector<Complex> out;
  out.reserve(arr.size());
  for (const json& item : arr)
    out.emplace_back(item.at("re").get<double>(), item.at("im").get<double>());
  return out;
}

}  // namespace

const char* path_name(ExtractionPath path) {
  switch (path) {
    case ExtractionPath::ModelExp: return "ModelExp";
    case ExtractionPath::ModelGaussian: return "ModelGaussian";
    case ExtractionPath::RationalComplex: return "RationalComplex";
    case ExtractionPath::MagnitudeSquared: return "MagnitudeSquared";
  }
  return "unknown";
}

const char* model_name(ModelKind kind) {
  return kind == ModelKind::TwoTermExp ? "TwoTermExp" : "Gaussian";
}

std::string report_to_json(const ExtractionReport& report, const ComparisonReport* comparison) {
  std::string out = "{\n";
  out += "  \"tf\": {\"num\": " + num_array(report.tf.num.coeffs) +
         ", \"den\": " + num_array(report.tf.den.coeffs) + "},\n";
  out += "  \"poles\": " + complex_array(report.pz.poles) + ",\n";
  out += "  \"zeros\": " + complex_array(report.pz.zeros) + ",\n";
  out += "  \"gain\": " + num(report.pz.gain) + ",\n";
  out += "  \"path\": " + quoted(path_name(report.path)) + ",\n";
  if (report.fit) {
    out += "  \"fit\": {\"model\": " + quoted(model_name(report.fit->model.kind)) +
           ", \"params\": " + num_array(report.fit->model.params) +
           ", \"rmse\": " + num(report.fit->rmse) +
           ", \"r_squared\": " + num(report.fit->r_squared) + "},\n";
  }
  if (report.linearization_span)
    out += "  \"linearization_span\": " + num(*report.linearization_span) + ",\n";
  if (comparison) out += "  \"comparison\": " + comparison_body(*comparison) + ",\n";
  out += "  \"warnings\": " + string_array(report.warnings) + "\n";
  out += "}\n";
  return out;
}

std::string comparison_to_json(const ComparisonReport& comparison) {
  std::string out = "{\n  \"comparison\": " + comparison_body(comparison) + "\n}\n";
  return out;
}

std::string pz_to_json(const PoleZeroSet& pz) {
  std::string out = "{\n";
  out += "  \"poles\": " + complex_array(pz.poles) + ",\n";
  out += "  \"zeros\": " + complex_array(pz.zeros) + ",\n";
  out += "  \"gain\": " + num(pz.gain) + "\n";
  out += "}\n";
  return out;
}

PoleZeroSet pz_from_json(const std::string& text) {
  const json doc = json::parse(text);
  PoleZeroSet pz;
  pz.poles = complex_list(doc.at("poles"), "poles");
  pz.zeros = complex_list(doc.at("zeros"), "zeros");
  pz.gain = doc.at("gain").get<double>();
  return pz;
}

FilterSpec filter_spec_from_json(const std::string& text) {
  const json doc = json::parse(text);
  FilterSpec spec;
  spec.family = family_from_name(doc.at("family").get<std::string>());
  if (doc.contains("R")) spec.r_ohms = doc["R"].get<double>();
  if (doc.contains("C")) spec.c_farads = doc["C"].get<double>();
  if (doc.contains("w0")) spec.w0 = doc["w0"].get<double>();
  if (doc.contains("q")) spec.q = doc["q"].get<double>();
  if (doc.contains("custom_pz")) spec.custom_pz = pz_from_json(doc["custom_pz"].dump());
  return spec;
}

}  // namespace pzx
