#pragma once

#include <vector>

#include "ekd/diagram.hpp"

namespace ekd {

enum class Family { Unknot, Eight, EDiagram, Chain, Trefoil };

// Area/sign parameters per family:
//   Unknot:  areas = {A}
//   Eight:   signs = {s}, areas = {A}          both lobes get area A
//   EDiagram: signs = {s}, areas = {X} or {X, f}  marked lobe X, far lobe f
//            (default f = 4); middle lobe X + f by exactness
//   Chain:   signs = {s1,s2,s3}, areas = {A1,A2,A3}; fourth lobe A1-A2+A3
//   Trefoil: signs = {s}, areas = {l1,l2,l3,c}  three lobes and the center
struct FamilySpec {
  Family family = Family::Unknot;
  std::vector<int> signs;
  std::vector<Rational> areas;
};

// Builds the family diagram with deterministic labels and layout hints.
// Throws std::invalid_argument on infeasible parameters.
Diagram build(const FamilySpec& spec);

Diagram build_unknot(const Rational& area);
Diagram build_eight(int sign, const Rational& area);
// General open chain of `n` lobes (n-1 crossings): lobe windings alternate
// +1,-1,...; signs[k] is the sign of the lobe quadrants at crossing k.
Diagram build_chain(const std::vector<int>& signs, const std::vector<Rational>& lobe_areas);
Diagram build_e_diagram(int sign, const Rational& marked, const Rational& far_lobe);
Diagram build_trefoil(int sign, const std::array<Rational, 3>& lobes, const Rational& center);

// The diagrams exercised throughout the test suites.
std::vector<std::pair<std::string, Diagram>> corpus();

}  // namespace ekd
