#include "ekd/canonical.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ekd {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

struct PieceCode {
  std::string code;
  // crossing id -> (index, anchor slot), for every root achieving the code
  std::vector<std::map<int, std::pair<int, int>>> labelings;
};

// Deterministic rooted traversal of one 4-valent piece. Crossings are
// numbered in discovery order; each gets an anchor slot (the slot first
// entered through), and every dart is keyed by (index, slot - anchor).
PieceCode piece_code(const Index& ix, const std::vector<int>& crossings) {
  PieceCode best;
  for (int root_crossing : crossings) {
    for (int root_slot = 0; root_slot < 4; ++root_slot) {
      std::map<int, std::pair<int, int>> label;  // crossing -> (index, anchor)
      std::vector<int> order;                    // crossing ids by index
      label[root_crossing] = {0, root_slot};
      order.push_back(root_crossing);
      std::ostringstream code;
      for (std::size_t i = 0; i < order.size(); ++i) {
        auto [idx, anchor] = label.at(order[i]);
        const Crossing& c = ix.crossing(order[i]);
        int sigma_rel = anchor % 2 == 0 ? c.sign0 : -c.sign0;
        code << (sigma_rel > 0 ? '+' : '-');
        for (int off = 0; off < 4; ++off) {
          int d = ix.dart_at(order[i], anchor + off);
          int e = ix.theta(d);
          int fc = ix.crossing_of(e);
          if (!label.count(fc)) {
            label[fc] = {static_cast<int>(order.size()), ix.slot_of(e)};
            order.push_back(fc);
          }
          auto [fidx, fanchor] = label.at(fc);
          code << fidx << '.' << mod4(ix.slot_of(e) - fanchor) << (ix.is_tail(d) ? 't' : 'h')
               << ';';
        }
      }
      std::string s = code.str();
      if (best.code.empty() || s < best.code) {
        best.code = s;
        best.labelings = {label};
      } else if (s == best.code) {
        best.labelings.push_back(label);
      }
    }
  }
  return best;
}

struct Assembly {
  // dart -> canonical key "(crossing index, slot offset)"
  std::map<int, std::pair<int, int>> dart_key;
};

std::string face_cycle_key(const std::vector<int>& cycle, const Assembly& asm_) {
  // Minimal rotation of the cycle written with canonical dart keys.
  std::vector<std::string> keys;
  for (int d : cycle) {
    auto [ci, off] = asm_.dart_key.at(d);
    keys.push_back(std::to_string(ci) + "." + std::to_string(off));
  }
  std::string bests;
  for (std::size_t r = 0; r < keys.size(); ++r) {
    std::string s;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      s += keys[(r + i) % keys.size()];
      s += ',';
    }
    if (bests.empty() || s < bests) bests = s;
  }
  return bests;
}

// Signature of the circle-nesting subtree below a face (for ordering faces
// that have no dart boundary).
std::string nest_signature(const Diagram& d, int face,
                           const std::map<int, std::vector<int>>& circles_in) {
  std::string s;
  const Face* f = nullptr;
  for (const Face& ff : d.faces)
    if (ff.id == face) f = &ff;
  s += f && f->area ? to_string(*f->area) : std::string("*");
  auto it = circles_in.find(face);
  if (it != circles_in.end()) {
    std::vector<std::string> subs;
    for (int cid : it->second)
      for (const Circle& c : d.circles)
        if (c.id == cid)
          subs.push_back((c.positive ? "+" : "-") + nest_signature(d, c.inside_face, circles_in));
    std::sort(subs.begin(), subs.end());
    s += "[";
    for (const auto& sub : subs) s += sub + " ";
    s += "]";
  }
  return s;
}

}  // namespace

CanonicalResult canonicalize(const Diagram& d, bool include_areas) {
  ensure_valid(d);
  Index ix(d);

  auto pieces = ix.crossing_pieces();
  std::vector<PieceCode> codes;
  for (const auto& piece : pieces) codes.push_back(piece_code(ix, piece));

  // Order pieces by code; equal codes may appear in any order, so expand the
  // tie groups into explicit permutations.
  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < codes.size(); ++i)
    groups[codes[i].code].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> piece_orders{{}};
  for (auto& [code, idxs] : groups) {
    std::vector<std::vector<int>> perms;
    std::vector<int> v = idxs;
    do {
      perms.push_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    std::vector<std::vector<int>> grown;
    for (const auto& base : piece_orders)
      for (const auto& p : perms) {
        auto x = base;
        x.insert(x.end(), p.begin(), p.end());
        grown.push_back(x);
      }
    piece_orders = std::move(grown);
  }

  std::map<int, std::vector<int>> circles_in;  // face -> circle ids immediately inside
  for (const Circle& c : d.circles) circles_in[c.outside_face].push_back(c.id);

  CanonicalResult result;
  std::string best;

  for (const auto& piece_order : piece_orders) {
    // Cartesian product over each piece's minimal labelings.
    std::vector<std::size_t> pick(piece_order.size(), 0);
    for (;;) {
      Assembly asm_;
      int base = 0;
      std::ostringstream mapcode;
      for (std::size_t pi = 0; pi < piece_order.size(); ++pi) {
        const PieceCode& pc = codes[piece_order[pi]];
        mapcode << pc.code << '/';
        const auto& label = pc.labelings[pick[pi]];
        for (const auto& [cid, idx_anchor] : label) {
          for (int s = 0; s < 4; ++s) {
            int dart = ix.dart_at(cid, s);
            asm_.dart_key[dart] = {base + idx_anchor.first, mod4(s - idx_anchor.second)};
          }
        }
        base += static_cast<int>(label.size());
      }

      // Canonical face order: dart-bearing faces by their cycle keys, then
      // boundaryless faces by nesting signature.
      struct FaceEntry {
        std::string key;
        int id;
      };
      std::vector<FaceEntry> entries;
      for (const Face& f : d.faces) {
        FaceEntry e;
        e.id = f.id;
        if (f.cycles.empty()) {
          e.key = "z#" + nest_signature(d, f.id, circles_in);
        } else {
          std::vector<std::string> cyc;
          for (const auto& c : f.cycles) cyc.push_back(face_cycle_key(c, asm_));
          std::sort(cyc.begin(), cyc.end());
          e.key = "f#";
          for (const auto& c : cyc) e.key += c + "|";
        }
        entries.push_back(e);
      }
      std::sort(entries.begin(), entries.end(), [](const FaceEntry& a, const FaceEntry& b) {
        return a.key < b.key || (a.key == b.key && a.id < b.id);
      });
      std::map<int, int> face_pos;
      std::vector<int> face_order;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        face_pos[entries[i].id] = static_cast<int>(i);
        face_order.push_back(entries[i].id);
      }

      std::ostringstream enc;
      enc << "M:" << mapcode.str() << "F:";
      for (const FaceEntry& e : entries) {
        const Face* f = nullptr;
        for (const Face& ff : d.faces)
          if (ff.id == e.id) f = &ff;
        enc << e.key << '=';
        if (!f->area)
          enc << '*';
        else if (include_areas)
          enc << to_string(*f->area);
        else
          enc << 'A' << face_pos.at(e.id);
        enc << ';';
      }
      enc << "C:";
      std::vector<std::string> circ;
      for (const Circle& c : d.circles)
        circ.push_back((c.positive ? "+" : "-") + std::to_string(face_pos.at(c.inside_face)) +
                       ">" + std::to_string(face_pos.at(c.outside_face)));
      std::sort(circ.begin(), circ.end());
      for (const auto& s : circ) enc << s << ';';
      enc << "O:" << face_pos.at(d.outer_face);

      std::string s = enc.str();
      if (best.empty() || s < best) {
        best = s;
        result.face_orders = {face_order};
      } else if (s == best) {
        if (std::find(result.face_orders.begin(), result.face_orders.end(), face_order) ==
            result.face_orders.end())
          result.face_orders.push_back(face_order);
      }

      // advance the labeling picker
      std::size_t j = 0;
      while (j < pick.size()) {
        if (++pick[j] < codes[piece_order[j]].labelings.size()) break;
        pick[j++] = 0;
      }
      if (j == pick.size()) break;
    }
  }

  result.form.bytes = best;
  return result;
}

CanonicalForm canonical_form(const Diagram& d) { return canonicalize(d, true).form; }

CanonicalResult canonical_shape(const Diagram& d) { return canonicalize(d, false); }

bool are_equivalent(const Diagram& a, const Diagram& b) {
  return canonical_form(a) == canonical_form(b);
}

}  // namespace ekd
