#pragma once

#include <string>

#include "pzx/transfer_function.hpp"

namespace pzx {

/// Pole-zero scatter plot in the complex s-plane as a standalone SVG
/// document: poles as x markers, zeros as o markers, real/imaginary axes
/// through the origin, symmetric limits 1.2 * max(|pole|, |zero|, 1 rad/s).
/// Output is deterministic byte-for-byte for identical input.
std::string render_pz_svg(const PoleZeroSet& pz);

}  // namespace pzx
