#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ekd/canonical.hpp"
#include "ekd/disks.hpp"
#include "ekd/families.hpp"
#include "ekd/invariants.hpp"
#include "ekd/io.hpp"
#include "ekd/moves.hpp"
#include "ekd/obstruct.hpp"
#include "ekd/svg.hpp"

namespace {

using namespace ekd;

constexpr int kExitOk = 0, kExitUsage = 2, kExitInput = 3, kExitBudget = 4;

int parse_sign(const std::string& s) {
  if (s == "+" || s == "p" || s == "+1") return +1;
  if (s == "-" || s == "m" || s == "-1") return -1;
  throw std::invalid_argument("sign must be one of +, -, p, m");
}

Rational parse_area(const std::string& s) {
  auto r = parse_rational(s);
  if (!r || *r <= 0) throw std::invalid_argument("expected a positive rational, got '" + s + "'");
  return *r;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

int cmd_validate(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot open " << file << "\n";
    return kExitInput;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::vector<std::string> sign_errors;
  Diagram d;
  try {
    d = decode(ss.str(), &sign_errors);
  } catch (const ParseError& e) {
    std::cout << "schema error at " << (e.pointer().empty() ? "/" : e.pointer()) << ": "
              << e.what() << "\n";
    return kExitInput;
  }
  ValidationReport rep = validate(d);
  for (const std::string& e : sign_errors) rep.errors.insert(rep.errors.begin(), e);
  if (rep.ok()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  for (const std::string& e : rep.errors) std::cout << "invalid: " << e << "\n";
  return kExitInput;
}

int cmd_info(const std::string& file) {
  Diagram d = load_file(file);
  std::cout << "components: " << d.components.size() << ", crossings: " << d.crossings.size()
            << ", arcs: " << d.arcs.size() << ", faces: " << d.faces.size() << "\n";
  WindingAssignment w = winding_numbers(d);
  std::cout << "faces (id: area, winding):\n";
  for (const Face& f : d.faces) {
    std::cout << "  " << f.id << ": " << (f.area ? to_string(*f.area) : "outer") << ", "
              << w.at(f.id) << "\n";
  }
  std::cout << "total signed area: " << to_string(total_signed_area(d)) << "\n";
  std::cout << "knot area a(K): " << to_string(knot_area(d)) << "\n";
  std::cout << "exact: " << (is_exact(d) ? "yes" : "no") << "\n";
  std::cout << "writhe: " << writhe(d) << "\n";
  std::cout << "rotation number(s):";
  for (int r : rotation_numbers(d)) std::cout << " " << r;
  std::cout << "\n";
  if (d.components.size() == 1) {
    LegendrianReport rep = legendrian_representable(d);
    std::cout << "legendrian representative: " << (rep.representable ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_disks(const std::string& file, const std::string& pair_file, bool big_only) {
  auto print_disk = [](const BoundDisk& disk, const DiskAnalysis& an) {
    std::cout << "  [" << side_name(disk.side) << "] faces {";
    bool first = true;
    for (int f : disk.faces) {
      if (!first) std::cout << ",";
      std::cout << f;
      first = false;
    }
    std::cout << "} area " << to_string(disk.area) << ", corners";
    if (disk.corners.empty()) std::cout << " none";
    for (const CornerIncidence& c : disk.corners)
      std::cout << " (" << c.crossing << (c.sign > 0 ? ",+" : ",-") << (c.convex ? "" : ",concave")
                << ")";
    std::cout << (disk.aligned ? ", aligned" : ", not aligned");
    if (an.maslov_normal)
      std::cout << ", mu2 " << *an.maslov_normal << ", dim " << *an.expected_dim;
    std::cout << "\n";
  };
  if (pair_file.empty()) {
    if (big_only) throw std::invalid_argument("--big needs --pair");
    Diagram d = load_file(file);
    std::cout << "as the lower diagram:\n";
    for (const BoundDisk& disk : enumerate_disks(d, {}, Side::Lower))
      print_disk(disk, disk_analysis(d, disk, Side::Lower));
    std::cout << "as the upper diagram:\n";
    for (const BoundDisk& disk : enumerate_disks(d, {}, Side::Upper))
      print_disk(disk, disk_analysis(d, disk, Side::Upper));
    return kExitOk;
  }
  DiagramPair pair{load_file(file), load_file(pair_file)};
  std::vector<BoundDisk> disks = big_only ? big_disks(pair) : pair_disks(pair);
  for (const BoundDisk& disk : disks) {
    const Diagram& host = disk.side == Side::Lower ? pair.lower : pair.upper;
    print_disk(disk, disk_analysis(host, disk, disk.side));
  }
  return kExitOk;
}

int cmd_obstruct(const std::string& lower_file, const std::string& upper_file,
                 const std::string& policy_str, const std::string& euler_sign, bool json) {
  DiagramPair pair{load_file(lower_file), load_file(upper_file)};
  EqualityPolicy policy = policy_str == "conservative" ? EqualityPolicy::Conservative
                                                       : EqualityPolicy::CylinderSharp;
  int convention = euler_sign == "-" ? -1 : +1;
  Verdict v = check_obstruction(pair, policy, convention);
  if (json) {
    std::cout << verdict_to_json(v);
  } else {
    std::cout << (v.result == VerdictResult::Obstructed ? "OBSTRUCTED" : "NO_OBSTRUCTION_FOUND")
              << "\n";
    for (const std::string& r : v.reasons) std::cout << "  " << r << "\n";
    for (const std::string& c : v.caveats) std::cout << "  caveat: " << c << "\n";
  }
  return kExitOk;
}

int cmd_search(const std::string& from_file, const std::string& to_file, int max_depth,
               long budget, const std::string& out_path) {
  Diagram from = load_file(from_file), to = load_file(to_file);
  SearchResult res = search_undercut(from, to, max_depth, budget);
  switch (res.outcome) {
    case SearchOutcome::Found: {
      std::string text = trace_to_json(*res.trace);
      write_output(text, out_path);
      std::cerr << "found a trace of depth " << res.trace->depth() << "\n";
      return kExitOk;
    }
    case SearchOutcome::NotFound:
      std::cout << "NOT_FOUND (no witness within depth " << max_depth
                << "; this is not a non-existence claim)\n";
      return kExitOk;
    case SearchOutcome::BudgetExhausted:
      std::cout << "BUDGET_EXHAUSTED after " << res.expansions << " expansions\n";
      return kExitBudget;
  }
  return kExitOk;
}

int cmd_replay(const std::string& trace_file, const std::string& start_file,
               const std::string& out_path) {
  std::ifstream in(trace_file);
  if (!in) {
    std::cerr << "cannot open " << trace_file << "\n";
    return kExitInput;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  Diagram start = load_file(start_file);
  Diagram end = replay(start, steps_from_json(ss.str()));
  write_output(serialize(end), out_path);
  return kExitOk;
}

int cmd_equiv(const std::string& a_file, const std::string& b_file) {
  Diagram a = load_file(a_file), b = load_file(b_file);
  bool eq = are_equivalent(a, b);
  std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
  return kExitOk;
}

int cmd_build(const std::string& family, const std::vector<std::string>& args,
              const std::string& out_path) {
  FamilySpec spec;
  std::size_t i = 0;
  auto need = [&](const char* what) -> const std::string& {
    if (i >= args.size()) throw std::invalid_argument(std::string("missing argument: ") + what);
    return args[i++];
  };
  if (family == "unknot") {
    spec.family = Family::Unknot;
    spec.areas = {parse_area(need("area"))};
  } else if (family == "eight") {
    spec.family = Family::Eight;
    spec.signs = {parse_sign(need("sign"))};
    spec.areas = {parse_area(need("area"))};
  } else if (family == "e" || family == "ediagram") {
    spec.family = Family::EDiagram;
    spec.signs = {parse_sign(need("sign"))};
    spec.areas.push_back(parse_area(need("marked area")));
    if (i < args.size()) spec.areas.push_back(parse_area(need("far lobe area")));
  } else if (family == "chain") {
    spec.family = Family::Chain;
    const std::string& signs = need("signs (e.g. -++ or mpp)");
    for (char ch : signs) spec.signs.push_back(parse_sign(std::string(1, ch)));
    for (int k = 0; k < 3; ++k) spec.areas.push_back(parse_area(need("area")));
  } else if (family == "trefoil") {
    spec.family = Family::Trefoil;
    spec.signs = {parse_sign(need("sign"))};
    for (int k = 0; k < 4; ++k) spec.areas.push_back(parse_area(need("area (l1 l2 l3 center)")));
  } else {
    throw std::invalid_argument("unknown family '" + family +
                                "' (unknot, eight, e, chain, trefoil)");
  }
  if (i != args.size()) throw std::invalid_argument("too many arguments for family " + family);
  write_output(serialize(build(spec)), out_path);
  return kExitOk;
}

int cmd_render(const std::string& file, const std::string& out_path) {
  Diagram d = load_file(file);
  write_output(render_svg(d), out_path);
  return kExitOk;
}

int cmd_corollaries() {
  std::vector<Rational> grid = {Rational(1, 2), 1, Rational(3, 2), 2, Rational(5, 2)};
  int failures = 0;
  auto check = [&](const std::string& name, const DiagramPair& pair, bool expect_obstructed) {
    Verdict v = check_obstruction(pair, EqualityPolicy::CylinderSharp);
    bool obstructed = v.result == VerdictResult::Obstructed;
    bool ok = obstructed == expect_obstructed;
    if (!ok) failures++;
    std::cout << name << " -> " << (obstructed ? "OBSTRUCTED" : "NO_OBSTRUCTION_FOUND")
              << " (expected " << (expect_obstructed ? "OBSTRUCTED" : "NO_OBSTRUCTION_FOUND")
              << ") " << (ok ? "ok" : "MISMATCH") << "\n";
  };
  auto trefoil = [](int sign, const Rational& x) {
    Rational lobe = (Rational(15) - 2 * x) / 3;
    return build_trefoil(sign, {lobe, lobe, lobe}, x);
  };
  for (const Rational& a : grid)
    for (const Rational& b : grid) {
      check("eight growth (8+): 8+(" + to_string(a) + ") < 8+(" + to_string(b) + ")",
            {build_eight(+1, a), build_eight(+1, b)}, a >= b);
      check("eight shrink (8-): 8-(" + to_string(a) + ") < 8-(" + to_string(b) + ")",
            {build_eight(-1, a), build_eight(-1, b)}, a <= b);
      check("exact chain shrink (E-): E-(" + to_string(a) + ") < E-(" + to_string(b) + ")",
            {build_e_diagram(-1, a, 4), build_e_diagram(-1, b, 4)}, a <= b);
      check("exact chain growth (E+): E+(" + to_string(a) + ") < E+(" + to_string(b) + ")",
            {build_e_diagram(+1, a, 4), build_e_diagram(+1, b, 4)}, a >= b);
      check("trefoil shrink (T-): T-(" + to_string(a) + ") < T-(" + to_string(b) + ")",
            {trefoil(-1, a), trefoil(-1, b)}, a <= b);
      check("trefoil growth (T+): T+(" + to_string(a) + ") < T+(" + to_string(b) + ")",
            {trefoil(+1, a), trefoil(+1, b)}, a >= b);
    }
  for (int b = 1; b <= 3; ++b)
    check("chain area condition: 8+(" + std::to_string(b) + ") < C-++(4,3,2)",
          {build_eight(+1, b), build({Family::Chain, {-1, 1, 1}, {4, 3, 2}})}, b >= 2);
  Diagram c = build({Family::Chain, {+1, -1, +1}, {1, 2, 2}});
  check("unrelated pair: 8+(1) < C+-+(1,2,2)", {build_eight(+1, 1), c}, true);
  check("unrelated pair: C+-+(1,2,2) < 8+(1)", {c, build_eight(+1, 1)}, true);
  std::cout << (failures == 0 ? "all corollary checks passed"
                              : std::to_string(failures) + " mismatches")
            << "\n";
  return failures == 0 ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enriched knot diagrams: invariants, disk obstructions, and moves"};
  app.require_subcommand(1);

  std::string file, file2, out_path, policy = "cylinder-sharp", euler_sign = "+";
  std::string family;
  std::vector<std::string> family_args;
  bool json = false, big_only = false;
  int max_depth = 3;
  long budget = 20000;

  auto* v = app.add_subcommand("validate", "check a diagram file");
  v->add_option("file", file)->required();

  auto* info = app.add_subcommand("info", "areas, writhe, rotation, exactness, Legendrian test");
  info->add_option("file", file)->required();

  auto* disks = app.add_subcommand("disks", "enumerate disks bound by a diagram or a pair");
  disks->add_option("file", file)->required();
  disks->add_option("--pair", file2, "treat FILE as lower and this as upper");
  disks->add_flag("--big", big_only, "only big disks (requires --pair)");

  auto* obstruct = app.add_subcommand("obstruct", "decide the cobordism obstruction for a pair");
  obstruct->add_option("lower", file)->required();
  obstruct->add_option("upper", file2)->required();
  obstruct->add_option("--policy", policy)
      ->check(CLI::IsMember({"conservative", "cylinder-sharp"}));
  obstruct->add_option("--euler-sign", euler_sign)->check(CLI::IsMember({"+", "-"}));
  obstruct->add_flag("--json", json);

  auto* search = app.add_subcommand("search", "search for a witness trace of moves");
  search->add_option("lower", file)->required();
  search->add_option("upper", file2)->required();
  search->add_option("--max-depth", max_depth);
  search->add_option("--budget", budget);
  search->add_option("-o,--out", out_path);

  auto* replay_cmd = app.add_subcommand("replay", "replay a move trace from a start diagram");
  replay_cmd->add_option("trace", file)->required();
  replay_cmd->add_option("start", file2)->required();
  replay_cmd->add_option("-o,--out", out_path);

  auto* equiv = app.add_subcommand("equiv", "decide diagram equivalence");
  equiv->add_option("a", file)->required();
  equiv->add_option("b", file2)->required();

  auto* build_cmd = app.add_subcommand("build", "emit a family diagram");
  build_cmd->add_option("family", family)->required();
  build_cmd->add_option("args", family_args, "sign and area parameters");
  build_cmd->add_option("-o,--out", out_path);

  auto* render = app.add_subcommand("render", "render a diagram to SVG");
  render->add_option("file", file)->required();
  render->add_option("-o,--out", out_path);

  app.add_subcommand("corollaries", "run the built-in growth/shrink regression table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (v->parsed()) return cmd_validate(file);
    if (info->parsed()) return cmd_info(file);
    if (disks->parsed()) return cmd_disks(file, file2, big_only);
    if (obstruct->parsed()) return cmd_obstruct(file, file2, policy, euler_sign, json);
    if (search->parsed()) return cmd_search(file, file2, max_depth, budget, out_path);
    if (replay_cmd->parsed()) return cmd_replay(file, file2, out_path);
    if (equiv->parsed()) return cmd_equiv(file, file2);
    if (build_cmd->parsed()) return cmd_build(family, family_args, out_path);
    if (render->parsed()) return cmd_render(file, out_path);
    return cmd_corollaries();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInput;
  }
}
