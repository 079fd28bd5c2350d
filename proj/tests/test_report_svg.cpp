#include <doctest.h>

#include <json.hpp>
#include <limits>
#include <string>

#include "pzx/extract.hpp"
#include "pzx/filter_zoo.hpp"
#include "pzx/report.hpp"
#include "pzx/svg.hpp"
#include "test_helpers.hpp"

using nlohmann::json;
using pzx::Complex;
using pzx::ExtractionReport;
using pzx::PoleZeroSet;
using pzx::RationalTF;

namespace {

size_t count_of(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

ExtractionReport rational_report() {
  pzx::FilterSpec spec;
  spec.family = pzx::FilterFamily::FirstOrderHP;
  spec.w0 = 1e4;
  const RationalTF truth = pzx::make_filter(spec);
  const auto ds =
      pzxtest::analytic_sweep(truth, pzx::plan_sweep(10.0, 1e6, 40, pzx::Spacing::Log), true);
  return pzx::extract_pipeline(ds, pzx::Strategy::Auto, 1, 1);
}

ExtractionReport model_report() {
  pzx::FilterSpec spec;
  spec.family = pzx::FilterFamily::FirstOrderHP;
  spec.w0 = 1e4;
  const RationalTF truth = pzx::make_filter(spec);
  const auto ds =
      pzxtest::analytic_sweep(truth, pzx::plan_sweep(10.0, 1e6, 120, pzx::Spacing::Log), false);
  return pzx::extract_pipeline(ds, pzx::Strategy::Model, 1, 1);
}

}  // namespace

TEST_CASE("report_to_json round-trips every number at full precision") {
  const ExtractionReport report = rational_report();
  const json j = json::parse(pzx::report_to_json(report));

  REQUIRE(j.contains("tf"));
  REQUIRE(j.contains("poles"));
  REQUIRE(j.contains("zeros"));
  REQUIRE(j.contains("gain"));
  REQUIRE(j.contains("path"));
  REQUIRE(j.contains("warnings"));
  CHECK(j["path"].get<std::string>() == "RationalComplex");
  CHECK_FALSE(j.contains("fit"));
  CHECK_FALSE(j.contains("linearization_span"));
  CHECK_FALSE(j.contains("comparison"));

  CHECK(j["gain"].get<double>() == report.pz.gain);
  REQUIRE(j["poles"].size() == report.pz.poles.size());
  for (size_t k = 0; k < report.pz.poles.size(); ++k) {
    CHECK(j["poles"][k]["re"].get<double>() == report.pz.poles[k].real());
    CHECK(j["poles"][k]["im"].get<double>() == report.pz.poles[k].imag());
  }
  REQUIRE(j["tf"]["num"].size() == static_cast<size_t>(report.tf.num.coeffs.size()));
  for (Eigen::Index k = 0; k < report.tf.num.coeffs.size(); ++k)
    CHECK(j["tf"]["num"][static_cast<size_t>(k)].get<double>() == report.tf.num.coeffs(k));
  for (Eigen::Index k = 0; k < report.tf.den.coeffs.size(); ++k)
    CHECK(j["tf"]["den"][static_cast<size_t>(k)].get<double>() == report.tf.den.coeffs(k));
}

TEST_CASE("model-path reports carry the fit and linearization blocks") {
  const ExtractionReport report = model_report();
  REQUIRE(report.path == pzx::ExtractionPath::ModelExp);
  const json j = json::parse(pzx::report_to_json(report));

  REQUIRE(j.contains("fit"));
  CHECK(j["fit"]["model"].get<std::string>() == "TwoTermExp");
  REQUIRE(j["fit"]["params"].size() == 4);
  CHECK(j["fit"]["rmse"].get<double>() == report.fit->rmse);
  CHECK(j["fit"]["r_squared"].get<double>() == report.fit->r_squared);
  for (size_t k = 0; k < 4; ++k)
    CHECK(j["fit"]["params"][k].get<double>() ==
          report.fit->model.params(static_cast<Eigen::Index>(k)));

  REQUIRE(j.contains("linearization_span"));
  CHECK(j["linearization_span"].get<double>() == *report.linearization_span);
}

TEST_CASE("comparison block appears only when a comparison is supplied") {
  const ExtractionReport report = rational_report();
  PoleZeroSet truth;
  truth.poles = {Complex(-1e4, 0.0)};
  truth.zeros = {Complex(0.0, 0.0)};
  truth.gain = 1.0;
  const pzx::ComparisonReport cmp = pzx::compare_pz(report.pz, truth);

  const json j = json::parse(pzx::report_to_json(report, &cmp));
  REQUIRE(j.contains("comparison"));
  const json& c = j["comparison"];
  REQUIRE(c.contains("pole_errors"));
  REQUIRE(c.contains("zero_errors"));
  REQUIRE(c.contains("max_rel_error"));
  REQUIRE(c.contains("unmatched_truth"));
  REQUIRE(c.contains("unmatched_extracted"));
  CHECK(c["max_rel_error"].get<double>() == cmp.max_rel_error);
  CHECK(c["unmatched_truth"].get<int>() == 0);
  REQUIRE(c["pole_errors"].size() == 1);
  CHECK(c["pole_errors"][0].get<double>() == cmp.pole_errors[0]);
}

TEST_CASE("comparison_to_json wraps the same body") {
  pzx::ComparisonReport cmp;
  cmp.pole_errors = {0.25};
  cmp.max_rel_error = 0.25;
  cmp.unmatched_extracted = 3;
  const json j = json::parse(pzx::comparison_to_json(cmp));
  CHECK(j["comparison"]["max_rel_error"].get<double>() == 0.25);
  CHECK(j["comparison"]["unmatched_extracted"].get<int>() == 3);
  CHECK(j["comparison"]["zero_errors"].empty());
}

TEST_CASE("pole-zero documents round-trip exactly") {
  PoleZeroSet pz;
  pz.poles = {Complex(-588.7050112577373, 9982.656280255273),
              Complex(-588.7050112577373, -9982.656280255273)};
  pz.zeros = {Complex(0.0, 0.0), Complex(-1.2345678901234567e-8, 3.3e300)};
  pz.gain = 9652.540800000001;

  const PoleZeroSet back = pzx::pz_from_json(pzx::pz_to_json(pz));
  REQUIRE(back.poles.size() == 2);
  REQUIRE(back.zeros.size() == 2);
  CHECK(back.gain == pz.gain);
  for (size_t k = 0; k < 2; ++k) {
    CHECK(back.poles[k] == pz.poles[k]);
    CHECK(back.zeros[k] == pz.zeros[k]);
  }
}

TEST_CASE("pz_from_json reads extraction reports too") {
  const ExtractionReport report = rational_report();
  const PoleZeroSet pz = pzx::pz_from_json(pzx::report_to_json(report));
  REQUIRE(pz.poles.size() == report.pz.poles.size());
  CHECK(pz.poles[0] == report.pz.poles[0]);
  CHECK(pz.gain == report.pz.gain);
}

TEST_CASE("filter_spec_from_json reads families, parameters, and custom sets") {
  const pzx::FilterSpec notch =
      pzx::filter_spec_from_json(R"({"family": "notch", "w0": 1e4, "q": 5})");
  CHECK(notch.family == pzx::FilterFamily::Notch);
  REQUIRE(notch.w0.has_value());
  CHECK(*notch.w0 == 1e4);
  REQUIRE(notch.q.has_value());
  CHECK(*notch.q == 5.0);

  const pzx::FilterSpec rc = pzx::filter_spec_from_json(R"({"family": "hp1", "R": 1000, "C": 1e-7})");
  CHECK(rc.family == pzx::FilterFamily::FirstOrderHP);
  REQUIRE(rc.r_ohms.has_value());
  CHECK(*rc.r_ohms == 1000.0);

  const pzx::FilterSpec custom = pzx::filter_spec_from_json(
      R"({"family": "custom", "custom_pz": {"poles": [{"re": -5, "im": 0}], "zeros": [], "gain": 2}})");
  CHECK(custom.family == pzx::FilterFamily::Custom);
  REQUIRE(custom.custom_pz.has_value());
  REQUIRE(custom.custom_pz->poles.size() == 1);
  CHECK(custom.custom_pz->poles[0] == Complex(-5.0, 0.0));
  CHECK(custom.custom_pz->gain == 2.0);
}

TEST_CASE("warning strings survive JSON escaping") {
  ExtractionReport report;
  report.tf = pzx::make_tf(pzx::Polynomial{1.0}, pzx::Polynomial{1.0});
  report.pz = pzx::poles_zeros(report.tf);
  report.warnings = {"quote \" backslash \\ newline \n tab \t done"};
  const json j = json::parse(pzx::report_to_json(report));
  CHECK(j["warnings"][0].get<std::string>() == report.warnings[0]);
}

TEST_CASE("non-finite values degrade to JSON null") {
  ExtractionReport report;
  report.tf = pzx::make_tf(pzx::Polynomial{1.0}, pzx::Polynomial{1.0});
  report.pz = pzx::poles_zeros(report.tf);
  report.pz.gain = std::numeric_limits<double>::infinity();
  const json j = json::parse(pzx::report_to_json(report));
  CHECK(j["gain"].is_null());
}

TEST_CASE("svg output is deterministic") {
  PoleZeroSet pz;
  pz.poles = {Complex(-1000.0, 2000.0), Complex(-1000.0, -2000.0)};
  pz.zeros = {Complex(0.0, 0.0)};
  CHECK(pzx::render_pz_svg(pz) == pzx::render_pz_svg(pz));
}

TEST_CASE("svg draws one x per pole and one circle per zero") {
  PoleZeroSet pz;
  pz.poles = {Complex(-1000.0, 2000.0), Complex(-1000.0, -2000.0), Complex(-50.0, 0.0)};
  pz.zeros = {Complex(0.0, 0.0), Complex(0.0, 3000.0)};
  const std::string svg = pzx::render_pz_svg(pz);
  CHECK(count_of(svg, "crimson") == 6);  // two stroke lines per pole
  CHECK(count_of(svg, "<circle") == 2);
  CHECK(count_of(svg, "royalblue") == 2);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("svg of an empty set still draws the axes") {
  const std::string svg = pzx::render_pz_svg(PoleZeroSet{});
  CHECK(count_of(svg, "crimson") == 0);
  CHECK(count_of(svg, "<circle") == 0);
  CHECK(svg.find("axis limit 1.2 rad/s") != std::string::npos);
  CHECK(count_of(svg, "<line") == 2);
  CHECK(svg.find(">Re<") != std::string::npos);
  CHECK(svg.find(">Im<") != std::string::npos);
}

TEST_CASE("svg mirrors conjugate zeros across the real axis") {
  PoleZeroSet pz;
  pz.zeros = {Complex(0.0, 2.0), Complex(0.0, -2.0)};
  const std::string svg = pzx::render_pz_svg(pz);
  // limit = 2.4, so +/-2 maps 225 px either side of center row 320.
  CHECK(svg.find("cy=\"95.00\"") != std::string::npos);
  CHECK(svg.find("cy=\"545.00\"") != std::string::npos);
  CHECK(count_of(svg, "cx=\"320.00\"") == 2);
}

TEST_CASE("svg reports the axis limit from the outermost singularity") {
  PoleZeroSet pz;
  pz.poles = {Complex(-1e4, 0.0)};
  const std::string svg = pzx::render_pz_svg(pz);
  CHECK(svg.find("axis limit 1.2e+04 rad/s") != std::string::npos);
}
