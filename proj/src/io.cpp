#include "ekd/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ekd {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const json& field(const json& obj, const char* key, const std::string& at) {
  if (!obj.is_object()) throw ParseError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(at + "/" + key, "missing field");
  return *it;
}

int as_int(const json& v, const std::string& at) {
  if (!v.is_number_integer()) throw ParseError(at, "expected an integer");
  return v.get<int>();
}

Rational as_rational(const json& v, const std::string& at) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) throw ParseError(at, "expected a rational as \"p/q\" string");
  auto r = parse_rational(v.get<std::string>());
  if (!r) throw ParseError(at, "malformed rational '" + v.get<std::string>() + "'");
  return *r;
}

std::pair<Rational, Rational> as_point(const json& v, const std::string& at) {
  if (!v.is_array() || v.size() != 2) throw ParseError(at, "expected [x, y]");
  return {as_rational(v[0], at + "/0"), as_rational(v[1], at + "/1")};
}

ordered point_json(const std::pair<Rational, Rational>& p) {
  return ordered::array({to_string(p.first), to_string(p.second)});
}

}  // namespace

Diagram decode(const std::string& bytes, std::vector<std::string>* sign_errors) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "document must be an object");
  const json& fmt = field(doc, "format", "");
  if (!fmt.is_string() || fmt.get<std::string>() != "ekd-v1")
    throw ParseError("/format", "expected \"ekd-v1\"");

  Diagram d;
  const json& comps = field(doc, "components", "");
  if (!comps.is_array()) throw ParseError("/components", "expected an array");
  for (std::size_t i = 0; i < comps.size(); ++i)
    d.components.push_back(as_int(comps[i], "/components/" + std::to_string(i)));

  const json& crossings = field(doc, "crossings", "");
  if (!crossings.is_array()) throw ParseError("/crossings", "expected an array");
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    std::string at = "/crossings/" + std::to_string(i);
    const json& c = crossings[i];
    Crossing cr;
    cr.id = as_int(field(c, "id", at), at + "/id");
    const json& darts = field(c, "darts", at);
    if (!darts.is_array() || darts.size() != 4)
      throw ParseError(at + "/darts", "expected four dart ids in counterclockwise order");
    for (int s = 0; s < 4; ++s) cr.darts[s] = as_int(darts[s], at + "/darts/" + std::to_string(s));
    if (c.contains("quadrant_signs")) {
      const json& qs = c["quadrant_signs"];
      if (!qs.is_array() || qs.size() != 4) throw ParseError(at + "/quadrant_signs", "expected 4 signs");
      std::array<int, 4> v{};
      for (int s = 0; s < 4; ++s) v[s] = as_int(qs[s], at + "/quadrant_signs/" + std::to_string(s));
      cr.sign0 = v[0];
      bool alternates = true;
      for (int s = 0; s < 4; ++s) alternates = alternates && v[s] == (s % 2 == 0 ? v[0] : -v[0]);
      if (!alternates) {
        std::string msg = "sign alternation violated at crossing " + std::to_string(cr.id);
        if (sign_errors)
          sign_errors->push_back(msg);
        else
          throw ParseError(at + "/quadrant_signs", msg);
      }
    } else {
      cr.sign0 = as_int(field(c, "quadrant_sign_0", at), at + "/quadrant_sign_0");
    }
    d.crossings.push_back(cr);
  }

  const json& arcs = field(doc, "arcs", "");
  if (!arcs.is_array()) throw ParseError("/arcs", "expected an array");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    std::string at = "/arcs/" + std::to_string(i);
    const json& a = arcs[i];
    Arc arc;
    arc.id = as_int(field(a, "id", at), at + "/id");
    arc.tail = as_int(field(a, "tail", at), at + "/tail");
    arc.head = as_int(field(a, "head", at), at + "/head");
    arc.component = as_int(field(a, "component", at), at + "/component");
    d.arcs.push_back(arc);
  }

  if (doc.contains("circles")) {
    const json& circles = doc["circles"];
    if (!circles.is_array()) throw ParseError("/circles", "expected an array");
    for (std::size_t i = 0; i < circles.size(); ++i) {
      std::string at = "/circles/" + std::to_string(i);
      const json& c = circles[i];
      Circle circ;
      circ.id = as_int(field(c, "id", at), at + "/id");
      circ.component = as_int(field(c, "component", at), at + "/component");
      circ.inside_face = as_int(field(c, "inside_face", at), at + "/inside_face");
      circ.outside_face = as_int(field(c, "outside_face", at), at + "/outside_face");
      const json& pos = field(c, "positive", at);
      if (!pos.is_boolean()) throw ParseError(at + "/positive", "expected a boolean");
      circ.positive = pos.get<bool>();
      d.circles.push_back(circ);
    }
  }

  const json& faces = field(doc, "faces", "");
  if (!faces.is_array()) throw ParseError("/faces", "expected an array");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    std::string at = "/faces/" + std::to_string(i);
    const json& f = faces[i];
    Face face;
    face.id = as_int(field(f, "id", at), at + "/id");
    const json& boundary = field(f, "boundary", at);
    if (!boundary.is_array()) throw ParseError(at + "/boundary", "expected an array of dart cycles");
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      const json& cyc = boundary[k];
      std::string cat = at + "/boundary/" + std::to_string(k);
      if (!cyc.is_array()) throw ParseError(cat, "expected a dart cycle");
      std::vector<int> cycle;
      for (std::size_t j = 0; j < cyc.size(); ++j)
        cycle.push_back(as_int(cyc[j], cat + "/" + std::to_string(j)));
      face.cycles.push_back(cycle);
    }
    const json& area = field(f, "area", at);
    if (!area.is_null()) face.area = as_rational(area, at + "/area");
    d.faces.push_back(face);
  }

  d.outer_face = as_int(field(doc, "outer_face", ""), "/outer_face");

  if (doc.contains("layout") && !doc["layout"].is_null()) {
    const json& lay = doc["layout"];
    if (!lay.is_object()) throw ParseError("/layout", "expected an object");
    Layout layout;
    if (lay.contains("crossings"))
      for (auto it = lay["crossings"].begin(); it != lay["crossings"].end(); ++it)
        layout.crossings[std::stoi(it.key())] =
            as_point(it.value(), "/layout/crossings/" + it.key());
    if (lay.contains("arcs"))
      for (auto it = lay["arcs"].begin(); it != lay["arcs"].end(); ++it) {
        std::vector<std::pair<Rational, Rational>> pts;
        const json& v = it.value();
        if (!v.is_array()) throw ParseError("/layout/arcs/" + it.key(), "expected waypoint list");
        for (std::size_t j = 0; j < v.size(); ++j)
          pts.push_back(as_point(v[j], "/layout/arcs/" + it.key() + "/" + std::to_string(j)));
        layout.arcs[std::stoi(it.key())] = pts;
      }
    if (lay.contains("circles"))
      for (auto it = lay["circles"].begin(); it != lay["circles"].end(); ++it) {
        const json& v = it.value();
        std::string at = "/layout/circles/" + it.key();
        if (!v.is_array() || v.size() != 3) throw ParseError(at, "expected [cx, cy, r]");
        layout.circles[std::stoi(it.key())] = {as_rational(v[0], at), as_rational(v[1], at),
                                               as_rational(v[2], at)};
      }
    if (lay.contains("faces"))
      for (auto it = lay["faces"].begin(); it != lay["faces"].end(); ++it)
        layout.faces[std::stoi(it.key())] = as_point(it.value(), "/layout/faces/" + it.key());
    d.layout = layout;
  }
  return d;
}

Diagram parse(const std::string& bytes) {
  Diagram d = decode(bytes);
  ensure_valid(d);
  return d;
}

std::string serialize(const Diagram& d) {
  ordered doc;
  doc["format"] = "ekd-v1";
  doc["components"] = d.components;
  doc["crossings"] = ordered::array();
  for (const Crossing& c : d.crossings) {
    ordered o;
    o["id"] = c.id;
    o["darts"] = c.darts;
    o["quadrant_sign_0"] = c.sign0;
    doc["crossings"].push_back(o);
  }
  doc["arcs"] = ordered::array();
  for (const Arc& a : d.arcs) {
    ordered o;
    o["id"] = a.id;
    o["tail"] = a.tail;
    o["head"] = a.head;
    o["component"] = a.component;
    doc["arcs"].push_back(o);
  }
  if (!d.circles.empty()) {
    doc["circles"] = ordered::array();
    for (const Circle& c : d.circles) {
      ordered o;
      o["id"] = c.id;
      o["component"] = c.component;
      o["inside_face"] = c.inside_face;
      o["outside_face"] = c.outside_face;
      o["positive"] = c.positive;
      doc["circles"].push_back(o);
    }
  }
  doc["faces"] = ordered::array();
  for (const Face& f : d.faces) {
    ordered o;
    o["id"] = f.id;
    o["boundary"] = f.cycles;
    if (f.area)
      o["area"] = to_string(*f.area);
    else
      o["area"] = nullptr;
    doc["faces"].push_back(o);
  }
  doc["outer_face"] = d.outer_face;
  if (d.layout) {
    ordered lay;
    lay["crossings"] = ordered::object();
    for (const auto& [id, p] : d.layout->crossings)
      lay["crossings"][std::to_string(id)] = point_json(p);
    lay["arcs"] = ordered::object();
    for (const auto& [id, pts] : d.layout->arcs) {
      ordered arr = ordered::array();
      for (const auto& p : pts) arr.push_back(point_json(p));
      lay["arcs"][std::to_string(id)] = arr;
    }
    if (!d.layout->circles.empty()) {
      lay["circles"] = ordered::object();
      for (const auto& [id, g] : d.layout->circles)
        lay["circles"][std::to_string(id)] =
            ordered::array({to_string(g[0]), to_string(g[1]), to_string(g[2])});
    }
    lay["faces"] = ordered::object();
    for (const auto& [id, p] : d.layout->faces) lay["faces"][std::to_string(id)] = point_json(p);
    doc["layout"] = lay;
  }
  return doc.dump(2) + "\n";
}

Diagram load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void save_file(const Diagram& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("", "cannot write file: " + path);
  out << serialize(d);
}

}  // namespace ekd
