#pragma once

#include <string>

#include "ekd/diagram.hpp"

namespace ekd {

// Renders the diagram from its layout hints: strands with the under-strand
// broken at each crossing (derived from the quadrant signs), face area
// labels, and corner sign markers. Throws std::invalid_argument when layout
// hints are missing.
std::string render_svg(const Diagram& d);

}  // namespace ekd
