#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fo2e/countermodel.hpp"
#include "fo2e/distinguish.hpp"
#include "fo2e/eval.hpp"
#include "fo2e/guarded.hpp"
#include "fo2e/intended.hpp"
#include "fo2e/interpolant.hpp"
#include "fo2e/parser.hpp"
#include "fo2e/printer.hpp"
#include "fo2e/reduction.hpp"
#include "fo2e/structure_io.hpp"
#include "fo2e/witness.hpp"

// Exit codes: 0 the semantic check passed, 1 it ran and failed, 2 usage or
// input errors. Every subcommand prints one JSON document on stdout;
// diagnostics go to stderr.

namespace {

using nlohmann::json;
using namespace fo2e;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mode parse_mode(const std::string& logic) {
  if (logic == "fo2") return Mode::fo2;
  if (logic == "gf2") return Mode::gf2;
  throw InputError("--logic must be fo2 or gf2");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula read_formula(const std::string& text, const std::string& path, Mode mode) {
  if (text.empty() == path.empty())
    throw InputError("give the formula either inline or as a file, not both");
  return parse_formula(path.empty() ? text : slurp(path), mode);
}

json sig_to_json(const Signature& s) {
  return {{"unary", s.unary}, {"binary", s.binary}, {"constants", s.constants}};
}

Signature sig_from_json(const json& j) {
  if (!j.is_object()) throw InputError("signature must be a JSON object");
  Signature s;
  auto read = [&](const char* key, std::set<std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw InputError(std::string("signature '") + key + "' must be an array");
    for (const auto& e : j[key]) {
      if (!e.is_string()) throw InputError("signature names must be strings");
      out.insert(e.get<std::string>());
    }
  };
  read("unary", s.unary);
  read("binary", s.binary);
  read("constants", s.constants);
  return s;
}

Signature load_signature(const std::string& path) {
  json j;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return sig_from_json(j);
}

int resolve_point(const Structure& s, const std::string& id) {
  auto it = s.index.find(id);
  if (it == s.index.end()) throw InputError("no element named '" + id + "'");
  return it->second;
}

std::vector<int> resolve_points(const Structure& s, const std::vector<std::string>& ids) {
  std::vector<int> out;
  for (const auto& id : ids) out.push_back(resolve_point(s, id));
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write '" + p.string() + "'");
  out << text;
}

// ---- subcommand payloads ----

struct ParseArgs {
  std::string formula, file, logic = "fo2";
  bool check_guarded_flag = false;
};

int run_parse(const ParseArgs& a) {
  Formula f;
  try {
    f = read_formula(a.formula, a.file, parse_mode(a.logic));
  } catch (const ParseError& e) {
    emit({{"ok", false}, {"error", e.what()}});
    return 1;
  }
  json out{{"ok", true}, {"logic", a.logic}, {"formula", to_string(f.root)}};
  out["free_vars"] = free_vars(f.root);
  out["signature"] = sig_to_json(signature_of(f.root));
  const GuardCheck g = check_guarded(f.root);
  out["guarded"] = {{"ok", g.ok}};
  if (!g.ok) {
    out["guarded"]["reason"] = g.reason;
    out["guarded"]["offender"] = to_string(g.offender);
  }
  emit(out);
  return a.check_guarded_flag && !g.ok ? 1 : 0;
}

struct McArgs {
  std::string structure, formula, file, logic = "fo2";
  std::vector<std::string> points;
  bool close = false;
};

int run_mc(const McArgs& a) {
  const Structure s = load_structure_file(a.structure, a.close);
  const Formula f = read_formula(a.formula, a.file, parse_mode(a.logic));
  const auto fv = free_vars(f.root);
  if (fv.size() != a.points.size())
    throw InputError("formula has " + std::to_string(fv.size()) + " free variable(s) but " +
                     std::to_string(a.points.size()) + " --point value(s) were given");
  const bool value = evaluate(s, f.root, resolve_points(s, a.points));
  emit({{"value", value}, {"points", a.points}, {"formula", to_string(f.root)}});
  return value ? 0 : 1;
}

struct BisimArgs {
  std::string left, right, rho, logic = "fo2";
  std::vector<std::string> left_points, right_points;
  int rounds = -1;
  bool close = false;
};

int run_bisim(const BisimArgs& a) {
  const Structure A = load_structure_file(a.left, a.close);
  const Structure B = load_structure_file(a.right, a.close);
  const Signature rho = load_signature(a.rho);
  const Mode mode = parse_mode(a.logic);

  if (a.left_points.empty() && a.right_points.empty()) {
    if (a.rounds >= 0) throw InputError("--rounds needs --left-point/--right-point");
    const BisimResult r = greatest_bisim(A, B, rho, mode);
    json out{{"exists", r.exists}};
    if (!r.reason.empty()) out["reason"] = r.reason;
    auto arr = json::array();
    for (const auto& [i, j] : r.pairs) arr.push_back({A.ids[i], B.ids[j]});
    out["pairs"] = std::move(arr);
    emit(out);
    return r.exists ? 0 : 1;
  }
  const auto ta = resolve_points(A, a.left_points);
  const auto tb = resolve_points(B, a.right_points);
  if (a.rounds >= 0) {
    const bool eq = bounded_game(A, ta, B, tb, rho, mode, a.rounds);
    emit({{"rounds", a.rounds}, {"equivalent", eq}});
    return eq ? 0 : 1;
  }
  const bool bis = pointed_bisimilar(A, ta, B, tb, rho, mode);
  emit({{"bisimilar", bis}});
  return bis ? 0 : 1;
}

struct DistinguishArgs {
  std::string left, right, rho, logic = "fo2";
  std::string left_point, right_point;
  bool close = false;
};

int run_distinguish(const DistinguishArgs& a) {
  const Structure A = load_structure_file(a.left, a.close);
  const Structure B = load_structure_file(a.right, a.close);
  const Signature rho = load_signature(a.rho);
  const Mode mode = parse_mode(a.logic);
  const int pa = resolve_point(A, a.left_point);
  const int pb = resolve_point(B, a.right_point);
  const DistinguishResult r = distinguishing_formula(A, pa, B, pb, rho, mode);
  if (r.bisimilar) {
    emit({{"bisimilar", true}});
    return 1;
  }
  emit({{"bisimilar", false},
        {"chi", to_string(r.chi)},
        {"holds_left", evaluate(A, r.chi, {pa})},
        {"holds_right", evaluate(B, r.chi, {pb})}});
  return 0;
}

struct ReduceArgs {
  std::string pcp, out_dir;
};

int run_reduce(const ReduceArgs& a) {
  const PcpInstance p = load_pcp_file(a.pcp);
  const Reduction red(p);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);

  write_text(dir / "phi.fo2", to_string(red.phi().root) + "\n");
  write_text(dir / "psi.fo2", to_string(red.psi().root) + "\n");
  write_text(dir / "neg_psi.fo2", to_string(red.neg_psi().root) + "\n");
  write_text(dir / "phi_guarded.fo2", to_string(red.phi_guarded().root) + "\n");
  write_text(dir / "rho.json", sig_to_json(red.rho()).dump(2) + "\n");

  json conjuncts = json::array();
  for (const auto& c : red.neg_psi_conjuncts())
    conjuncts.push_back({{"group", c.group}, {"name", c.name}});
  emit({{"out", a.out_dir},
        {"files", {"phi.fo2", "psi.fo2", "neg_psi.fo2", "phi_guarded.fo2", "rho.json"}},
        {"rho", sig_to_json(red.rho())},
        {"neg_psi_conjuncts", conjuncts}});
  return 0;
}

struct WitnessArgs {
  std::string cert;
};

int run_witness(const WitnessArgs& a) {
  const WitnessReport r = check_witness_file(a.cert);
  json clauses = json::array();
  for (const auto& c : r.clauses)
    clauses.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  emit({{"verdict", r.accepted ? "accept" : "reject"}, {"clauses", clauses}});
  return r.accepted ? 0 : 1;
}

struct InterpArgs {
  std::string phi, phi_file, psi, psi_file, rho, logic = "fo2";
  InterpolantOpts opts;
};

int run_interp(const InterpArgs& a) {
  const Mode mode = parse_mode(a.logic);
  const Formula phi = read_formula(a.phi, a.phi_file, mode);
  const Formula psi = read_formula(a.psi, a.psi_file, mode);
  const Signature rho = a.rho.empty()
                            ? intersect(signature_of(phi.root), signature_of(psi.root))
                            : load_signature(a.rho);
  const InterpolantResult r = interpolant_search(phi, psi, rho, a.opts);
  json out{{"status", to_string(r.status)},
           {"rho", sig_to_json(rho)},
           {"detail", r.detail},
           {"candidates_tried", r.candidates_tried}};
  if (r.interpolant) out["interpolant"] = to_string(r.interpolant);
  emit(out);
  return r.status == InterpolantStatus::found_exact ||
                 r.status == InterpolantStatus::found_bounded
             ? 0
             : 1;
}

struct CounterArgs {
  std::string formula, file, logic = "fo2";
  int max_size = 3;
  long long budget = 5'000'000;
};

int run_countermodel(const CounterArgs& a) {
  const Formula f = read_formula(a.formula, a.file, parse_mode(a.logic));
  const CountermodelResult r = countermodel_search(f, a.max_size, a.budget);
  json out{{"found", r.found}, {"complete", r.complete}, {"nodes", r.nodes}};
  if (r.found) {
    out["model"] = structure_to_json(r.model);
    auto pts = json::array();
    for (const int i : r.point) pts.push_back(r.model.ids[i]);
    out["points"] = std::move(pts);
  }
  emit(out);
  return r.found ? 0 : 1;
}

struct IntendedArgs {
  std::string pcp, solution, out_dir;
  TruncationParams params;
  int rounds = 4;
  bool skip_games = false;
};

int run_intended(const IntendedArgs& a) {
  const PcpInstance p = load_pcp_file(a.pcp);
  const PcpSolution sol = load_solution_file(a.solution, p);
  const Pointed A = build_intended_A(p, sol, a.params);
  const Pointed B = build_intended_B(p, sol, a.params);
  const IntendedReport rep = verify_built(p, A, B, a.params, a.rounds, !a.skip_games);

  json out = rep.to_json();
  out["params"] = {{"s_depth", a.params.s_depth},
                   {"r_window", a.params.r_window},
                   {"interior_radius", a.params.interior_radius},
                   {"rounds", a.rounds}};
  out["left_point"] = A.s.ids[A.point];
  out["right_point"] = B.s.ids[B.point];

  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  save_structure_file(A.s, (dir / "A.json").string());
  save_structure_file(B.s, (dir / "B.json").string());
  write_text(dir / "report.json", out.dump(2) + "\n");
  emit(out);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for two-variable logic with two equivalence relations"};
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "parse a formula, print its canonical form");
  parse->add_option("--formula", pa.formula, "formula text");
  parse->add_option("--file", pa.file, "file with the formula");
  parse->add_option("--logic", pa.logic, "fo2 or gf2 (default fo2)");
  parse->add_flag("--check-guarded", pa.check_guarded_flag, "fail unless the formula is guarded");

  McArgs mc;
  auto* mcc = app.add_subcommand("mc", "evaluate a formula in a finite structure");
  mcc->add_option("--structure", mc.structure, "structure JSON file")->required();
  mcc->add_option("--formula", mc.formula, "formula text");
  mcc->add_option("--file", mc.file, "file with the formula");
  mcc->add_option("--logic", mc.logic, "fo2 or gf2 (default fo2)");
  mcc->add_option("--point", mc.points,
                  "element id per free variable, bound in variable name order");
  mcc->add_flag("--close-equivalences", mc.close, "close E1/E2 before validating");

  BisimArgs ba;
  auto* bis = app.add_subcommand("bisim", "greatest bisimulation or a pointed/bounded check");
  bis->add_option("--left", ba.left, "left structure JSON")->required();
  bis->add_option("--right", ba.right, "right structure JSON")->required();
  bis->add_option("--rho", ba.rho, "shared signature JSON")->required();
  bis->add_option("--logic", ba.logic, "fo2 or gf2 (default fo2)");
  bis->add_option("--left-point", ba.left_points, "left tuple, 1 or 2 element ids");
  bis->add_option("--right-point", ba.right_points, "right tuple, 1 or 2 element ids");
  bis->add_option("--rounds", ba.rounds, "bounded game round count (needs points)");
  bis->add_flag("--close-equivalences", ba.close, "close E1/E2 before validating");

  DistinguishArgs da;
  auto* dist = app.add_subcommand("distinguish", "emit a formula separating two pointed structures");
  dist->add_option("--left", da.left, "left structure JSON")->required();
  dist->add_option("--right", da.right, "right structure JSON")->required();
  dist->add_option("--rho", da.rho, "shared signature JSON")->required();
  dist->add_option("--logic", da.logic, "fo2 or gf2 (default fo2)");
  dist->add_option("--left-point", da.left_point, "left element id")->required();
  dist->add_option("--right-point", da.right_point, "right element id")->required();
  dist->add_flag("--close-equivalences", da.close, "close E1/E2 before validating");

  ReduceArgs ra;
  auto* red = app.add_subcommand("reduce", "compile a word-matching instance to a formula pair");
  red->add_option("--pcp", ra.pcp, "instance JSON file")->required();
  red->add_option("--out", ra.out_dir, "output directory")->required();

  WitnessArgs wa;
  auto* wit = app.add_subcommand("witness", "check an inseparability certificate");
  wit->add_option("--cert", wa.cert, "certificate JSON file")->required();

  InterpArgs ia;
  auto* interp = app.add_subcommand("interp-search", "look for an interpolant between two formulas");
  interp->add_option("--phi", ia.phi, "left formula text");
  interp->add_option("--phi-file", ia.phi_file, "file with the left formula");
  interp->add_option("--psi", ia.psi, "right formula text");
  interp->add_option("--psi-file", ia.psi_file, "file with the right formula");
  interp->add_option("--rho", ia.rho, "signature JSON (default: the shared signature)");
  interp->add_option("--logic", ia.logic, "fo2 or gf2 (default fo2)");
  interp->add_option("--max-size", ia.opts.max_candidate_size, "largest candidate node count");
  interp->add_option("--max-candidates", ia.opts.max_candidates, "candidate cap");
  interp->add_option("--countermodel-bound", ia.opts.countermodel_bound,
                     "domain bound for candidate screening");
  interp->add_option("--countermodel-budget", ia.opts.countermodel_budget,
                     "node budget per screening search");

  CounterArgs ca;
  auto* cm = app.add_subcommand("countermodel", "search for a finite model of a formula");
  cm->add_option("--formula", ca.formula, "formula text");
  cm->add_option("--file", ca.file, "file with the formula");
  cm->add_option("--logic", ca.logic, "fo2 or gf2 (default fo2)");
  cm->add_option("--max-size", ca.max_size, "largest domain size to try (default 3)");
  cm->add_option("--budget", ca.budget, "backtracking node budget");

  IntendedArgs ta;
  auto* intd = app.add_subcommand("intended", "build and verify the truncated canonical models");
  intd->add_option("--pcp", ta.pcp, "instance JSON file")->required();
  intd->add_option("--solution", ta.solution, "candidate solution JSON file")->required();
  intd->add_option("--s-depth", ta.params.s_depth, "chain truncation depth (default 12)");
  intd->add_option("--r-window", ta.params.r_window, "cycle window, even (default 2)");
  intd->add_option("--interior", ta.params.interior_radius, "interior radius (default 4)");
  intd->add_option("--rounds", ta.rounds, "bounded game rounds (default 4)");
  intd->add_option("--out", ta.out_dir, "output directory")->required();
  intd->add_flag("--skip-games", ta.skip_games, "verify conjuncts only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) return run_parse(pa);
    if (mcc->parsed()) return run_mc(mc);
    if (bis->parsed()) return run_bisim(ba);
    if (dist->parsed()) return run_distinguish(da);
    if (red->parsed()) return run_reduce(ra);
    if (wit->parsed()) return run_witness(wa);
    if (interp->parsed()) return run_interp(ia);
    if (cm->parsed()) return run_countermodel(ca);
    if (intd->parsed()) return run_intended(ta);
  } catch (const std::exception& e) {
    std::cerr << "fo2e: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
