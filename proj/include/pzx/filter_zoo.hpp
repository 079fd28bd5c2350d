#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pzx/transfer_function.hpp"

namespace pzx {

enum class FilterFamily {
  FirstOrderHP,
  FirstOrderLP,
  SecondOrderHP,
  SecondOrderLP,
  BandPass,
  Notch,
  FirstOrderAllPass,
  SecondOrderAllPass,
  Custom,
};

/// Parameters selecting one analytic reference filter. First-order families
/// take (R, C) or w0 directly; second-order families take w0 (or R, C) and
/// q (default 1/sqrt(2)); Custom takes an explicit pole-zero set.
struct FilterSpec {
  FilterFamily family = FilterFamily::FirstOrderHP;
  std::optional<double> r_ohms;
  std::optional<double> c_farads;
  std::optional<double> w0;
  std::optional<double> q;
  std::optional<PoleZeroSet> custom_pz;
};

struct FamilyInfo {
  FilterFamily family;
  std::string name;      // enum-style name, e.g. "FirstOrderHP"
  std::string cli_name;  // short name, e.g. "hp1"
  std::vector<std::string> required;
};

/// Canonical unity-gain template for the requested family.
/// Throws MissingParameter / InvalidComponentValue.
RationalTF make_filter(const FilterSpec& spec);

/// One descriptor per family, stable order (FirstOrderHP first).
const std::vector<FamilyInfo>& list_families();

/// Accepts either the descriptor name or the short CLI name.
FilterFamily family_from_name(const std::string& name);

const FamilyInfo& family_info(FilterFamily family);

}  // namespace pzx
