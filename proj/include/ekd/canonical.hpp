#pragma once

#include <compare>
#include <string>
#include <vector>

#include "ekd/diagram.hpp"

namespace ekd {

struct CanonicalForm {
  std::string bytes;
  auto operator<=>(const CanonicalForm&) const = default;
};

struct CanonicalResult {
  CanonicalForm form;
  // Original face ids in canonical order, one entry per assembly achieving
  // the minimum (distinct automorphism-compatible correspondences).
  std::vector<std::vector<int>> face_orders;
};

// Relabeling-invariant encoding of the oriented map together with signs and
// areas; equality decides Definition 3.6 equivalence.
CanonicalForm canonical_form(const Diagram& d);

// Same with areas replaced by positional placeholders: the combinatorial
// type used by the move search to match diagrams up to area redistribution.
CanonicalResult canonical_shape(const Diagram& d);

CanonicalResult canonicalize(const Diagram& d, bool include_areas);

bool are_equivalent(const Diagram& a, const Diagram& b);

}  // namespace ekd
