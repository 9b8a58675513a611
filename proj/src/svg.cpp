#include "ekd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ekd {

namespace {

struct Pt {
  double x = 0, y = 0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);
  return buf;
}

double dist(Pt a, Pt b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Drop `gap` length from one end of a polyline.
void trim(std::vector<Pt>& pts, bool at_front, double gap) {
  if (pts.size() < 2) return;
  while (gap > 0 && pts.size() >= 2) {
    Pt& a = at_front ? pts[0] : pts[pts.size() - 1];
    Pt& b = at_front ? pts[1] : pts[pts.size() - 2];
    double d = dist(a, b);
    if (d > gap) {
      double t = gap / d;
      a.x += (b.x - a.x) * t;
      a.y += (b.y - a.y) * t;
      return;
    }
    gap -= d;
    if (at_front)
      pts.erase(pts.begin());
    else
      pts.pop_back();
  }
}

}  // namespace

std::string render_svg(const Diagram& d) {
  ensure_valid(d);
  bool empty = d.crossings.empty() && d.circles.empty();
  if (!empty && !d.layout)
    throw std::invalid_argument(
        "diagram has no layout hints; build it with a family builder or add a layout");
  Index ix(d);
  const double S = 60.0;  // px per layout unit, y flipped

  auto lift = [&](const std::pair<Rational, Rational>& p) {
    return Pt{to_double(p.first) * S, -to_double(p.second) * S};
  };

  std::vector<Pt> everything;
  std::map<int, Pt> cpos;
  if (d.layout) {
    for (const auto& [id, p] : d.layout->crossings) {
      cpos[id] = lift(p);
      everything.push_back(cpos[id]);
    }
    for (const auto& [id, pts] : d.layout->arcs)
      for (const auto& p : pts) everything.push_back(lift(p));
    for (const auto& [id, g] : d.layout->circles) {
      double cx = to_double(g[0]) * S, cy = -to_double(g[1]) * S, r = to_double(g[2]) * S;
      everything.push_back({cx - r, cy - r});
      everything.push_back({cx + r, cy + r});
    }
  }
  double minx = -S, miny = -S, maxx = S, maxy = S;
  for (const Pt& p : everything) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
  const double margin = 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(minx - margin) << " "
      << num(miny - margin) << " " << num(maxx - minx + 2 * margin) << " "
      << num(maxy - miny + 2 * margin) << "\">\n";
  svg << "<g fill=\"none\" stroke=\"#222\" stroke-width=\"2.5\" "
         "stroke-linecap=\"round\">\n";

  // An arc end is broken when its dart sits on the under strand: the even
  // passage is over exactly when sign0 = -1.
  auto is_under_end = [&](int dart) {
    int c = ix.crossing_of(dart);
    int parity = ix.slot_of(dart) % 2;
    int over_parity = ix.crossing(c).sign0 == -1 ? 0 : 1;
    return parity != over_parity;
  };

  std::map<int, std::vector<Pt>> arc_paths;
  for (const Arc& a : d.arcs) {
    std::vector<Pt> pts;
    pts.push_back(cpos.at(ix.crossing_of(a.tail)));
    if (d.layout) {
      auto it = d.layout->arcs.find(a.id);
      if (it != d.layout->arcs.end())
        for (const auto& p : it->second) pts.push_back(lift(p));
    }
    pts.push_back(cpos.at(ix.crossing_of(a.head)));
    arc_paths[a.id] = pts;
    if (is_under_end(a.tail)) trim(pts, true, 0.14 * S);
    if (is_under_end(a.head)) trim(pts, false, 0.14 * S);
    svg << "<polyline points=\"";
    for (const Pt& p : pts) svg << num(p.x) << "," << num(p.y) << " ";
    svg << "\"/>\n";
    // arrowhead at the midpoint for the orientation
    if (pts.size() >= 2) {
      const Pt& m0 = pts[pts.size() / 2 - 1];
      const Pt& m1 = pts[pts.size() / 2];
      double ang = std::atan2(m1.y - m0.y, m1.x - m0.x);
      Pt mid{(m0.x + m1.x) / 2, (m0.y + m1.y) / 2};
      for (double s : {0.5, -0.5})
        svg << "<line x1=\"" << num(mid.x) << "\" y1=\"" << num(mid.y) << "\" x2=\""
            << num(mid.x - 8 * std::cos(ang + s)) << "\" y2=\""
            << num(mid.y - 8 * std::sin(ang + s)) << "\"/>\n";
    }
  }
  if (d.layout)
    for (const auto& [id, g] : d.layout->circles)
      svg << "<circle cx=\"" << num(to_double(g[0]) * S) << "\" cy=\""
          << num(-to_double(g[1]) * S) << "\" r=\"" << num(to_double(g[2]) * S) << "\"/>\n";
  svg << "</g>\n";

  // Corner signs at each crossing, placed between consecutive dart rays.
  svg << "<g font-family=\"monospace\" font-size=\"13\" fill=\"#b33\" "
         "text-anchor=\"middle\">\n";
  for (const Crossing& c : d.crossings) {
    Pt q = cpos.at(c.id);
    std::array<double, 4> ray{};
    for (int s = 0; s < 4; ++s) {
      int dart = c.darts[s];
      const auto& pts = arc_paths.at(ix.arc_of(dart));
      Pt toward = ix.is_tail(dart) ? pts[1] : pts[pts.size() - 2];
      ray[s] = std::atan2(toward.y - q.y, toward.x - q.x);
    }
    for (int k = 0; k < 4; ++k) {
      double a0 = ray[k], a1 = ray[(k + 1) % 4];
      while (a1 >= a0) a1 -= 2 * M_PI;  // svg y is flipped: ccw becomes decreasing
      double mid = a0 + (a1 - a0) / 2;
      svg << "<text x=\"" << num(q.x + 0.3 * S * std::cos(mid)) << "\" y=\""
          << num(q.y + 0.3 * S * std::sin(mid) + 4) << "\">"
          << (ix.quadrant_sign(c.id, k) > 0 ? "+" : "-") << "</text>\n";
    }
  }
  svg << "</g>\n";

  // Face area labels.
  svg << "<g font-family=\"monospace\" font-size=\"14\" fill=\"#226\" "
         "text-anchor=\"middle\">\n";
  if (d.layout)
    for (const auto& [id, p] : d.layout->faces) {
      if (!ix.has_face(id) || !ix.face(id).area) continue;
      Pt at = lift(p);
      svg << "<text x=\"" << num(at.x) << "\" y=\"" << num(at.y + 5) << "\">"
          << to_string(*ix.face(id).area) << "</text>\n";
    }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace ekd
