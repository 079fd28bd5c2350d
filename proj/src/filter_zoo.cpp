#include "pzx/filter_zoo.hpp"

#include <cmath>

namespace pzx {

namespace {

constexpr double kDefaultQ = 0.7071067811865476;  // 1/sqrt(2), maximally flat

double corner_frequency(const FilterSpec& spec) {
  if (spec.w0) {
    if (*spec.w0 <= 0.0) throw InvalidComponentValue("make_filter: w0 must be positive");
    return *spec.w0;
  }
  if (spec.r_ohms && spec.c_farads) {
    if (*spec.r_ohms <= 0.0) throw InvalidComponentValue("make_filter: R must be positive");
    if (*spec.c_farads <= 0.0) throw InvalidComponentValue("make_filter: C must be positive");
    return 1.0 / (*spec.r_ohms * *spec.c_farads);
  }
  throw MissingParameter("make_filter: need w0 or both R and C");
}

double quality_factor(const FilterSpec& spec) {
  if (!spec.q) return kDefaultQ;
  if (*spec.q <= 0.0) throw InvalidComponentValue("make_filter: q must be positive");
  return *spec.q;
}

}  // namespace

RationalTF make_filter(const FilterSpec& spec) {
  switch (spec.family) {
    case FilterFamily::FirstOrderHP: {
      const double w0 = corner_frequency(spec);
      return make_tf(Polynomial{0.0, 1.0}, Polynomial{w0, 1.0});
    }
    case FilterFamily::FirstOrderLP: {
      const double w0 = corner_frequency(spec);
      return make_tf(Polynomial{w0}, Polynomial{w0, 1.0});
    }
    case FilterFamily::FirstOrderAllPass: {
      const double w0 = corner_frequency(spec);
      return make_tf(Polynomial{w0, -1.0}, Polynomial{w0, 1.0});
    }
    case FilterFamily::SecondOrderHP: {
      const double w0 = corner_frequency(spec);
      const double b = w0 / quality_factor(spec);
      return make_tf(Polynomial{0.0, 0.0, 1.0}, Polynomial{w0 * w0, b, 1.0});
    }
    case FilterFamily::SecondOrderLP: {
      const double w0 = corner_frequency(spec);
      const double b = w0 / quality_factor(spec);
      return make_tf(Polynomial{w0 * w0}, Polynomial{w0 * w0, b, 1.0});
    }
    case FilterFamily::BandPass: {
      const double w0 = corner_frequency(spec);
      const double b = w0 / quality_factor(spec);
      return make_tf(Polynomial{0.0, b}, Polynomial{w0 * w0, b, 1.0});
    }
    case FilterFamily::Notch: {
      const double w0 = corner_frequency(spec);
      const double b = w0 / quality_factor(spec);
      return make_tf(Polynomial{w0 * w0, 0.0, 1.0}, Polynomial{w0 * w0, b, 1.0});
    }
    case FilterFamily::SecondOrderAllPass: {
      const double w0 = corner_frequency(spec);
      const double b = w0 / quality_factor(spec);
      return make_tf(Polynomial{w0 * w0, -b, 1.0}, Polynomial{w0 * w0, b, 1.0});
    }
    case FilterFamily::Custom: {
      if (!spec.custom_pz)
        throw MissingParameter("make_filter: Custom family requires custom_pz");
      return from_pole_zero(*spec.custom_pz);
    }
  }
  throw MissingParameter("make_filter: unknown family");
}

const std::vector<FamilyInfo>& list_families() {
  static const std::vector<FamilyInfo> table = {
      {FilterFamily::FirstOrderHP, "FirstOrderHP", "hp1", {"R,C or w0"}},
      {FilterFamily::FirstOrderLP, "FirstOrderLP", "lp1", {"R,C or w0"}},
      {FilterFamily::SecondOrderHP, "SecondOrderHP", "hp2", {"w0", "q"}},
      {FilterFamily::SecondOrderLP, "SecondOrderLP", "lp2", {"w0", "q"}},
      {FilterFamily::BandPass, "BandPass", "bp", {"w0", "q"}},
      {FilterFamily::Notch, "Notch", "notch", {"w0", "q"}},
      {FilterFamily::FirstOrderAllPass, "FirstOrderAllPass", "ap1", {"R,C or w0"}},
      {FilterFamily::SecondOrderAllPass, "SecondOrderAllPass", "ap2", {"w0", "q"}},
      {FilterFamily::Custom, "Custom", "custom", {"custom_pz"}},
  };
  return table;
}

FilterFamily family_from_name(const std::string& name) {
  for (const FamilyInfo& info : list_families())
    if (info.name == name || info.cli_name == name) return info.family;
  throw MissingParameter("unknown filter family: " + name);
}

const FamilyInfo& family_info(FilterFamily family) {
  for (const FamilyInfo& info : list_families())
    if (info.family == family) return info;
  throw MissingParameter("unknown filter family");
}

}  // namespace pzx
