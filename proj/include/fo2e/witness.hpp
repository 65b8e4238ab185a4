#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fo2e/bisim.hpp"
#include "fo2e/eval.hpp"
#include "fo2e/parser.hpp"
#include "fo2e/signature.hpp"
#include "fo2e/structure_io.hpp"

// No-interpolant witnesses. A certificate names two pointed structures and a
// relation beta between them; it is accepted when the left structure models
// phi at its points, the right one models ~psi, and beta is a bisimulation
// over the shared signature of phi and psi containing the point pairs. An
// accepted certificate rules out any interpolant for the pair.

namespace fo2e {

struct WitnessClause {
  std::string name;
  bool ok;
  std::string detail;
};

struct WitnessReport {
  bool accepted = false;
  std::vector<WitnessClause> clauses;

  const WitnessClause* find(const std::string& name) const {
    for (const auto& c : clauses)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Re-verifies the bisimulation conditions pair by pair, straight from the
// definition. Returns an empty string when beta passes, otherwise a detail
// naming the first failing condition.
inline std::string check_bisim_certificate(const Structure& A, const Structure& B,
                                           const Signature& rho, Mode logic,
                                           const std::vector<std::pair<int, int>>& beta,
                                           const std::vector<int>& pa,
                                           const std::vector<int>& pb) {
  auto in_beta = [&](int a, int b) {
    for (const auto& [x, y] : beta)
      if (x == a && y == b) return true;
    return false;
  };
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!in_beta(pa[i], pb[i]))
      return "point pair (" + A.ids[pa[i]] + "," + B.ids[pb[i]] + ") is not in beta";
  if (pa.size() == 2 && !partial_iso(A, B, rho, {{pa[0], pb[0]}, {pa[1], pb[1]}}))
    return "point tuple is not a partial isomorphism";
  for (int a = 0; a < A.n(); ++a) {
    bool covered = false;
    for (const auto& [x, y] : beta) covered = covered || x == a;
    if (!covered) return "globality: left element '" + A.ids[a] + "' has no partner in beta";
  }
  for (int b = 0; b < B.n(); ++b) {
    bool covered = false;
    for (const auto& [x, y] : beta) covered = covered || y == b;
    if (!covered) return "globality: right element '" + B.ids[b] + "' has no partner in beta";
  }
  if (logic == Mode::gf2)
    for (const auto& c : rho.constants) {
      if (!A.constants.count(c) || !B.constants.count(c))
        return "constants: '" + c + "' is not interpreted on both sides";
      if (!in_beta(A.constants.at(c), B.constants.at(c)))
        return "constants: pair for '" + c + "' is missing from beta";
    }
  auto moves = [&](const Structure& S, int s) {
    std::vector<int> out;
    for (int t = 0; t < S.n(); ++t) {
      bool ok = logic == Mode::fo2 || t == s;
      for (const auto& r : rho.binary) ok = ok || S.bin(r, s, t);
      if (ok) out.push_back(t);
    }
    return out;
  };
  for (const auto& [a, b] : beta) {
    if (!partial_iso(A, B, rho, {{a, b}}))
      return "pair (" + A.ids[a] + "," + B.ids[b] + ") is not a partial isomorphism";
    for (int a2 : moves(A, a)) {
      bool answered = false;
      for (const auto& [x, b2] : beta)
        answered = answered || (x == a2 && partial_iso(A, B, rho, {{a, b}, {a2, b2}}));
      if (!answered)
        return "forth: pair (" + A.ids[a] + "," + B.ids[b] + ") has no response to '" +
               A.ids[a2] + "'";
    }
    for (int b2 : moves(B, b)) {
      bool answered = false;
      for (const auto& [a2, y] : beta)
        answered = answered || (y == b2 && partial_iso(A, B, rho, {{a, b}, {a2, b2}}));
      if (!answered)
        return "back: pair (" + A.ids[a] + "," + B.ids[b] + ") has no response to '" + B.ids[b2] +
               "'";
    }
  }
  return "";
}

inline WitnessReport check_witness(const nlohmann::json& j, const std::string& base_dir) {
  WitnessReport rep;
  auto fail = [&](const std::string& name, const std::string& detail) {
    rep.clauses.push_back({name, false, detail});
    return rep;
  };
  auto pass = [&](const std::string& name, const std::string& detail) {
    rep.clauses.push_back({name, true, detail});
  };

  Formula phi{nullptr, Mode::fo2}, psi{nullptr, Mode::fo2};
  Structure A = Structure::make({"?"}), B = Structure::make({"?"});
  std::vector<int> pa, pb;
  std::vector<std::pair<int, int>> beta;
  Mode logic = Mode::fo2;
  try {
    if (!j.is_object()) throw StructureError("certificate must be a JSON object");
    for (const char* key : {"phi", "psi", "A", "B", "pointsA", "pointsB", "beta", "logic"})
      if (!j.contains(key)) throw StructureError(std::string("missing key '") + key + "'");
    for (const auto& [key, val] : j.items()) {
      (void)val;
      if (key != "phi" && key != "psi" && key != "A" && key != "B" && key != "pointsA" &&
          key != "pointsB" && key != "beta" && key != "logic")
        throw StructureError("unknown key '" + key + "'");
    }
    const std::string l = j["logic"].get<std::string>();
    if (l != "fo2" && l != "gf2") throw StructureError("logic must be fo2 or gf2");
    logic = l == "fo2" ? Mode::fo2 : Mode::gf2;
    phi = parse_formula(j["phi"].get<std::string>(), logic);
    psi = parse_formula(j["psi"].get<std::string>(), logic);
    const auto base = std::filesystem::path(base_dir);
    A = load_structure_file((base / j["A"].get<std::string>()).string());
    B = load_structure_file((base / j["B"].get<std::string>()).string());
    auto resolve = [&](const nlohmann::json& arr, const Structure& S, const char* where) {
      if (!arr.is_array()) throw StructureError(std::string(where) + " must be an array");
      std::vector<int> out;
      for (const auto& e : arr) {
        const std::string id = e.get<std::string>();
        if (!S.index.count(id))
          throw StructureError(std::string(where) + ": unknown element '" + id + "'");
        out.push_back(S.index.at(id));
      }
      return out;
    };
    pa = resolve(j["pointsA"], A, "pointsA");
    pb = resolve(j["pointsB"], B, "pointsB");
    if (pa.size() != pb.size() || pa.empty() || pa.size() > 2)
      throw StructureError("pointsA and pointsB must have equal length 1 or 2");
    if (!j["beta"].is_array()) throw StructureError("beta must be an array of pairs");
    for (const auto& e : j["beta"]) {
      if (!e.is_array() || e.size() != 2) throw StructureError("beta entries must be [a,b] pairs");
      const std::string ida = e[0].get<std::string>(), idb = e[1].get<std::string>();
      if (!A.index.count(ida)) throw StructureError("beta: unknown left element '" + ida + "'");
      if (!B.index.count(idb)) throw StructureError("beta: unknown right element '" + idb + "'");
      beta.emplace_back(A.index.at(ida), B.index.at(idb));
    }
  } catch (const std::exception& e) {
    return fail("certificate-wellformed", e.what());
  }
  pass("certificate-wellformed", "parsed; |A|=" + std::to_string(A.n()) +
                                     " |B|=" + std::to_string(B.n()) +
                                     " |beta|=" + std::to_string(beta.size()));

  // the points bind the formula's sorted free variables in order; surplus
  // coordinates take part only in the bisimilarity clause
  auto eval_at_points = [](const Structure& S, const FormulaRef& f, const std::vector<int>& pts) {
    const auto fv = free_vars(f);
    if (fv.size() > pts.size())
      throw EvalError("formula needs " + std::to_string(fv.size()) +
                      " point(s) but the certificate names " + std::to_string(pts.size()));
    return evaluate(S, f, std::vector<int>(pts.begin(), pts.begin() + fv.size()));
  };
  try {
    if (!eval_at_points(A, phi.root, pa))
      return fail("A-models-phi", "phi is false at the given points");
  } catch (const std::exception& e) {
    return fail("A-models-phi", e.what());
  }
  pass("A-models-phi", "");

  try {
    if (!eval_at_points(B, neg(psi.root), pb))
      return fail("B-models-neg-psi", "~psi is false at the given points");
  } catch (const std::exception& e) {
    return fail("B-models-neg-psi", e.what());
  }
  pass("B-models-neg-psi", "");

  const Signature rho = intersect(signature_of(phi.root), signature_of(psi.root));
  std::string err;
  try {
    err = check_bisim_certificate(A, B, rho, logic, beta, pa, pb);
  } catch (const std::exception& e) {
    err = e.what();
  }
  if (!err.empty()) return fail("rho-bisimilarity", err);
  pass("rho-bisimilarity", "beta verified against the shared signature");

  rep.accepted = true;
  return rep;
}

inline WitnessReport check_witness_file(const std::string& path) {
  std::ifstream in(path);
  WitnessReport rep;
  if (!in) {
    rep.clauses.push_back({"certificate-wellformed", false, "cannot open '" + path + "'"});
    return rep;
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    rep.clauses.push_back({"certificate-wellformed", false, e.what()});
    return rep;
  }
  return check_witness(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace fo2e
