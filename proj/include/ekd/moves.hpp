#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ekd/canonical.hpp"
#include "ekd/diagram.hpp"

namespace ekd {

enum class MoveKind { R0, R1Plus, R1Minus, R2Insert, R2Remove, R3, H1, H2, Birth, Death };

const char* move_name(MoveKind k);
std::optional<MoveKind> move_from_name(const std::string& name);

// Whether the local pattern was transcribed from figure-only content.
bool move_is_figure_transcription(MoveKind k);

// One applied move. applicable_moves() returns templates with the area
// parameters (delta, epsilons, split areas) unbound; apply_move() checks the
// area conditions 1-5 and rejects by name.
struct MoveInstance {
  MoveKind kind = MoveKind::R0;
  int arc = -1;        // R1+: kink arc; R2/H: first strand; unused otherwise
  int arc2 = -1;       // R2 insert / H: second strand
  int face = -1;       // R1+: poked face; R2 insert / H: common face;
                       // R2 remove: bigon; R3: triangle; Birth: host face
  int crossing = -1;   // R1-: kink crossing; Death: the 8 component's crossing
  int side = 0;        // R1+: +1 pokes left(arc), -1 right(arc)
  int over = 0;        // R2 insert: +1 finger strand over, -1 under
  Rational delta;      // created lobe/bigon area (R1+, R2 insert, Birth)
  Rational split_first;  // R2 insert / H: area of the first created piece
  Rational split_second;
  std::map<int, Rational> epsilons;  // surviving bounded face -> area change
};

class MoveError : public std::invalid_argument {
 public:
  MoveError(const std::string& condition, const std::string& detail)
      : std::invalid_argument(condition + ": " + detail), condition_(condition) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// Every dart-level site whose local pattern matches; deterministic order.
std::vector<MoveInstance> applicable_moves(const Diagram& d);

// Applies one instance; throws MoveError naming the violated condition.
// Postconditions: the result validates and the total signed area is
// preserved exactly.
Diagram apply_move(const Diagram& d, const MoveInstance& inst);

struct MoveTrace {
  CanonicalForm start;
  CanonicalForm end;
  std::vector<MoveInstance> steps;
  int depth() const { return static_cast<int>(steps.size()); }
};

enum class SearchOutcome { Found, NotFound, BudgetExhausted };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::NotFound;
  std::optional<MoveTrace> trace;
  long expansions = 0;
};

// Breadth-first search for a witness trace from `from` to `to` over canonical
// forms. R0 steps are solved exactly against the goal whenever the
// combinatorial type matches; NotFound is not a non-existence claim.
SearchResult search_undercut(const Diagram& from, const Diagram& to, int max_depth,
                             long budget = 20000);

Diagram replay(const Diagram& start, const std::vector<MoveInstance>& steps);

std::string trace_to_json(const MoveTrace& t, bool pretty = true);
std::vector<MoveInstance> steps_from_json(const std::string& bytes);

}  // namespace ekd
