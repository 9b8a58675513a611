#pragma once

#include <map>
#include <vector>

#include "ekd/diagram.hpp"

namespace ekd {

using WindingAssignment = std::map<int, int>;  // face id -> winding

// Alexander numbering: winding(outer) = 0, +1 crossing an arc right-to-left.
WindingAssignment winding_numbers(const Diagram& d);

// Sum of winding(F) * area(F) over bounded faces.
Rational total_signed_area(const Diagram& d);

// |total_signed_area|, written a(K).
Rational knot_area(const Diagram& d);

bool is_exact(const Diagram& d);

// Signed crossing count under the blackboard framing; over/under is derived
// from the quadrant signs (walking anticlockwise around a +1 quadrant, the
// incoming boundary strand is the over strand).
int writhe(const Diagram& d);

// Whitney turning number of one component. Other components are smoothed
// away first; the base point sits on the component's own unbounded region.
int rotation_number(const Diagram& d, int component);
std::vector<int> rotation_numbers(const Diagram& d);

struct EulerReading {
  int chi = 0;
  bool feasible = false;        // exists g >= 0 with chi = 2 - 2g - b, b = c1+c2
  int genus = -1;               // witness when feasible
  std::vector<std::pair<int, int>> gb_witnesses;  // (g,b) with b >= c1+c2, small list
};

struct EulerReport {
  int writhe_lower = 0, writhe_upper = 0;
  EulerReading plus;   // chi = wr(lower) - wr(upper)
  EulerReading minus;  // chi = wr(upper) - wr(lower)
  bool feasible_either = false;
  bool cylinder = false;  // chi == 0 under both readings and two knots
};

EulerReport forced_euler_characteristic(const Diagram& lower, const Diagram& upper);

struct LegendrianCrossingCheck {
  int crossing = -1;
  int wedge_quadrant = -1;     // quadrant of the checked loop wedge
  int sigma = 0;               // diagram sign there
  Rational loop_area;          // signed area of the loop, anticlockwise around the corner
  bool ok = false;
};

struct LegendrianReport {
  bool representable = false;
  bool exact = false;
  Rational total;
  std::vector<LegendrianCrossingCheck> crossings;
};

// Single-component criterion; throws std::invalid_argument on links.
LegendrianReport legendrian_representable(const Diagram& d);

// The sub-diagram of one component with all foreign crossings smoothed away.
Diagram extract_component(const Diagram& d, int component);

}  // namespace ekd
