#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ekd/rational.hpp"

namespace ekd {

// A crossing holds its four darts in counterclockwise cyclic order.
// Quadrant k is the sector between the darts at slots k and k+1 (mod 4);
// its sign is sign0 * (-1)^k, so adjacent quadrants automatically alternate.
struct Crossing {
  int id = -1;
  std::array<int, 4> darts{{-1, -1, -1, -1}};
  int sign0 = +1;
};

// Directed arc between crossings, tail -> head along the component
// orientation. The tail dart points along the arc, the head dart back.
struct Arc {
  int id = -1;
  int tail = -1;
  int head = -1;
  int component = -1;
};

// A crossing-free closed component. `positive` means the curve runs
// counterclockwise as drawn, i.e. winding(inside) = winding(outside) + 1.
struct Circle {
  int id = -1;
  int component = -1;
  int inside_face = -1;
  int outside_face = -1;
  bool positive = true;
};

// A complementary region. `cycles` are its dart boundary walks (orbits of the
// face permutation, counterclockwise with the face on the left). Faces of
// disconnected diagrams can own several cycles; circle boundaries are
// recorded on the Circle side. The outer face has no area.
struct Face {
  int id = -1;
  std::vector<std::vector<int>> cycles;
  std::optional<Rational> area;
};

struct Layout {
  std::map<int, std::pair<Rational, Rational>> crossings;
  std::map<int, std::vector<std::pair<Rational, Rational>>> arcs;  // interior waypoints tail->head
  std::map<int, std::array<Rational, 3>> circles;                  // cx, cy, r
  std::map<int, std::pair<Rational, Rational>> faces;              // label anchors
};

struct Diagram {
  std::vector<int> components;
  std::vector<Crossing> crossings;
  std::vector<Arc> arcs;
  std::vector<Circle> circles;
  std::vector<Face> faces;
  int outer_face = -1;
  std::optional<Layout> layout;
};

// Dart-level view of a structurally sound diagram. Construction throws
// std::invalid_argument on broken references; run validate() first when the
// input is untrusted.
class Index {
 public:
  explicit Index(const Diagram& d);

  const Diagram& diagram() const { return *d_; }

  bool has_dart(int dart) const { return where_.count(dart) != 0; }
  int crossing_of(int dart) const { return where_.at(dart).first; }
  int slot_of(int dart) const { return where_.at(dart).second; }
  int dart_at(int crossing, int slot) const;

  int arc_of(int dart) const { return arc_of_.at(dart); }
  bool is_tail(int dart) const { return is_tail_.at(dart); }
  // Other end of the dart's arc.
  int theta(int dart) const;
  // Next dart counterclockwise around the crossing.
  int rho(int dart) const;
  // Face permutation: orbits walk face boundaries counterclockwise with the
  // face on the left. successor(d) = rho^{-1}(theta(d)).
  int face_successor(int dart) const;

  int face_of_dart(int dart) const { return face_of_dart_.at(dart); }
  // Face occupying quadrant k of a crossing (the face whose cycle contains
  // the dart at slot k).
  int quadrant_face(int crossing, int quadrant) const;
  int quadrant_sign(int crossing, int quadrant) const;

  const Crossing& crossing(int id) const { return d_->crossings.at(crossing_index_.at(id)); }
  const Arc& arc(int id) const { return d_->arcs.at(arc_index_.at(id)); }
  const Face& face(int id) const { return d_->faces.at(face_index_.at(id)); }
  const Circle& circle(int id) const { return d_->circles.at(circle_index_.at(id)); }
  bool has_face(int id) const { return face_index_.count(id) != 0; }

  // Left/right faces of an arc seen along tail->head.
  int left_face(const Arc& a) const { return face_of_dart(a.tail); }
  int right_face(const Arc& a) const { return face_of_dart(a.head); }

  std::vector<int> darts() const;

  // Connected pieces of the 4-valent graph (crossing ids grouped); circles
  // count as their own pieces for Euler purposes.
  std::vector<std::vector<int>> crossing_pieces() const;

 private:
  const Diagram* d_;
  std::map<int, std::pair<int, int>> where_;  // dart -> (crossing id, slot)
  std::map<int, int> arc_of_;                 // dart -> arc id
  std::map<int, bool> is_tail_;
  std::map<int, int> face_of_dart_;
  std::map<int, int> crossing_index_, arc_index_, face_index_, circle_index_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
  std::string joined() const;
};

// Orbits of the face permutation over a bare crossing/arc skeleton.
std::vector<std::vector<int>> face_orbits(const std::vector<Crossing>& crossings,
                                          const std::vector<Arc>& arcs);

// Checks every structural and semantic invariant: referential integrity,
// slot bijections, strand pairing, component closure, face cycles = orbits of
// the face permutation, sign alternation (for documents carrying full sign
// vectors), positivity of bounded areas, single outer face, generalized Euler
// count, and winding cocycle consistency/reachability.
ValidationReport validate(const Diagram& d);

// Throws std::invalid_argument with the report text when invalid.
void ensure_valid(const Diagram& d);

}  // namespace ekd
