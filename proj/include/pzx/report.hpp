#pragma once

#include <optional>
#include <string>

#include "pzx/extract.hpp"
#include "pzx/filter_zoo.hpp"
#include "pzx/transfer_function.hpp"

namespace pzx {

/// Name strings used in the JSON report and on the CLI.
const char* path_name(ExtractionPath path);
const char* model_name(ModelKind kind);

/// Full extraction report as a JSON document: keys `tf` (num/den coefficient
/// arrays, ascending), `poles`/`zeros` (arrays of {re, im}), `gain`, `fit`
/// (model paths only), `path`, `warnings`, and `comparison` when one is
/// supplied. Numbers carry 17 significant digits.
std::string report_to_json(const ExtractionReport& report,
                           const ComparisonReport* comparison = nullptr);

/// Just the comparison object (cmd_compare's whole output).
std::string comparison_to_json(const ComparisonReport& comparison);

/// Ground-truth document: {poles, zeros, gain}.
std::string pz_to_json(const PoleZeroSet& pz);

/// Reads {poles, zeros, gain} from any document that carries those keys at
/// the top level — truth files and extraction reports alike.
PoleZeroSet pz_from_json(const std::string& text);

/// FilterSpec from a JSON config document; keys `family`, `R`, `C`, `w0`,
/// `q`, `custom_pz` (a nested {poles, zeros, gain} object).
FilterSpec filter_spec_from_json(const std::string& text);

}  // namespace pzx
