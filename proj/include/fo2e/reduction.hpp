#pragma once

#include <string>
#include <vector>

#include "fo2e/formula.hpp"
#include "fo2e/pcp.hpp"
#include "fo2e/signature.hpp"

// Formula pair (phi, psi) attached to a word-matching instance. An
// interpolant over the shared signature exists exactly when the instance has
// no infinite solution, which is what the workbench probes with bounded
// searches and hand-built witnesses.
//
// phi forces an R-cycle X0 -> X1 -> X2 -> X0 with a unique X0 point and an
// S-successor carrying the alphabet into the shared signature. neg_psi grows
// two marked S-chains (a v-chain and a w-chain) from any R-triangle and uses
// the two equivalence relations alternately to force both chains to spell the
// same omega-word, block by block.

namespace fo2e {

struct NamedConjunct {
  std::string group;  // generation, disjointness, coordination or uniqueness
  std::string name;
  FormulaRef f;
};

class Reduction {
 public:
  explicit Reduction(PcpInstance pcp) : pcp_(std::move(pcp)) {}

  const PcpInstance& pcp() const { return pcp_; }

  // shared signature: the two chain relations plus the alphabet, no constants
  Signature rho() const {
    Signature s;
    s.binary = {"R", "S"};
    for (const auto& l : pcp_.alphabet) s.unary.insert(l);
    return s;
  }

  Formula phi() const {
    const Term x = var("x"), y = var("y");
    std::vector<FormulaRef> cs;
    cs.push_back(atom("X0", x));
    cs.push_back(exists("y", land(atom("R", x, y), atom("X1", y))));
    cs.push_back(forall("x", implies(atom("X1", x),
                                     exists("y", land(atom("R", x, y), atom("X2", y))))));
    cs.push_back(forall("x", implies(atom("X2", x),
                                     exists("y", land(atom("R", x, y), atom("X0", y))))));
    cs.push_back(forall("x", forall("y", implies(land(atom("X0", x), atom("X0", y)), eq(x, y)))));
    cs.push_back(alphabet_probe());
    return {land_all(cs), Mode::fo2};
  }

  // same cycle expressed through two fresh constants, guarded throughout
  Formula phi_guarded() const {
    const Term x = var("x");
    std::vector<FormulaRef> cs;
    cs.push_back(atom("R", x, cnst("c1")));
    cs.push_back(atom("R", cnst("c1"), cnst("c2")));
    cs.push_back(atom("R", cnst("c2"), x));
    cs.push_back(alphabet_probe());
    return {land_all(cs), Mode::gf2};
  }

  std::vector<NamedConjunct> neg_psi_conjuncts() const {
    std::vector<NamedConjunct> out;
    const Term x = var("x"), y = var("y");
    auto add = [&](const char* group, std::string name, FormulaRef f) {
      out.push_back({group, std::move(name), std::move(f)});
    };

    // generation: the point starts a v-block, chains stay typed, and the
    // R-triangle reached in two steps starts a w-block
    add("generation", "point-starts-v-block", land(atom("Zv1", x), atom("Zv", x)));
    for (const char* z : {"Zv", "Zw"})
      add("generation", std::string("s-keeps-") + z,
          forall("x", forall("y", implies(land(atom(z, x), atom("S", x, y)), atom(z, y)))));
    for (int i = 1; i <= 2; ++i) {
      std::vector<FormulaRef> alts;
      for (int j = 1; j <= k(); ++j) alts.push_back(nu(j, i, "x"));
      add("generation", "v-block-" + std::to_string(i) + "-expands",
          forall("x", implies(atom(zv(i), x), lor_all(alts))));
    }
    for (int i = 1; i <= 2; ++i) {
      std::vector<FormulaRef> alts;
      for (int j = 1; j <= k(); ++j) alts.push_back(omega(j, i, "x"));
      add("generation", "w-block-" + std::to_string(i) + "-expands",
          forall("x", implies(atom(zw(i), x), lor_all(alts))));
    }
    add("generation", "r-successors-are-y1", forall("y", implies(atom("R", x, y), atom("Y1", y))));
    add("generation", "y1-steps-to-y2",
        forall("x", forall("y", implies(land(atom("Y1", x), atom("R", x, y)), atom("Y2", y)))));
    add("generation", "y2-starts-w-block",
        forall("x", forall("y", implies(land(atom("Y2", x), atom("R", x, y)),
                                        land(atom("Zw1", y), atom("Zw", y))))));

    // disjointness within each label family
    auto disjoint = [&](const std::string& p, const std::string& q) {
      add("disjointness", "disjoint(" + p + "," + q + ")",
          forall("x", implies(atom(p, x), neg(atom(q, x)))));
    };
    for (std::size_t i = 0; i < pcp_.alphabet.size(); ++i)
      for (std::size_t j = i + 1; j < pcp_.alphabet.size(); ++j)
        disjoint(pcp_.alphabet[i], pcp_.alphabet[j]);
    const auto fam = marker_family();
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j) disjoint(fam[i], fam[j]);
    disjoint("Zv1", "Zv2");
    disjoint("Zw1", "Zw2");
    disjoint("Zv", "Zw");

    // coordination between the relations and the two chains
    add("coordination", "r-within-e1", forall("x", forall("y", implies(atom("R", x, y), atom("E1", x, y)))));
    for (int j = 1; j <= k(); ++j)
      for (int i = 1; i <= 2; ++i)
        add("coordination", "transfer(" + std::to_string(j) + "," + std::to_string(i) + ")",
            forall("x", implies(land(atom(zv(i), x), nu(j, i, "x")),
                                forall("y", implies(land(atom(e(i), x, y), atom(zw(i), y)),
                                                    omega(j, i, "y"))))));
    for (int i = 1; i <= 2; ++i)
      add("coordination", "zip(" + std::to_string(i) + ")",
          forall("x", forall("y", implies(land(land(atom(e(i), x, y), atom(zv(comp(i)), x)),
                                               atom(zw(comp(i)), y)),
                                          atom(e(comp(i)), x, y)))));

    // uniqueness: each position marker meets each equivalence class once
    for (const auto& p : fam)
      for (int i = 1; i <= 2; ++i)
        add("uniqueness", "unique(" + p + "," + std::to_string(i) + ")",
            forall("x", forall("y", implies(land(land(atom(p, x), atom(p, y)), atom(e(i), x, y)),
                                            eq(x, y)))));
    return out;
  }

  Formula neg_psi() const {
    std::vector<FormulaRef> fs;
    for (const auto& c : neg_psi_conjuncts()) fs.push_back(c.f);
    return {land_all(fs), Mode::fo2};
  }

  Formula psi() const { return {neg(neg_psi().root), Mode::fo2}; }

  // Pv{j}_{l} for all pairs j and levels l, then Pw{j}_{l}; this fixed order
  // also drives the disjointness and uniqueness schemas
  std::vector<std::string> marker_family() const {
    std::vector<std::string> out;
    for (bool w_side : {false, true})
      for (int j = 1; j <= k(); ++j) {
        const std::string& word = w_side ? pcp_.pairs[j - 1].w : pcp_.pairs[j - 1].v;
        for (int l = 1; l <= static_cast<int>(word.size()); ++l) out.push_back(marker(w_side, j, l));
      }
    return out;
  }

  static std::string marker(bool w_side, int j, int l) {
    return std::string(w_side ? "Pw" : "Pv") + std::to_string(j) + "_" + std::to_string(l);
  }

  // spells word j of the v side from the subject variable: a strict chain
  // (each step exists) and a broad chain (every S-successor conforms), both
  // stepping through E_i and ending at the start of a block of the other
  // parity
  FormulaRef nu(int j, int i, const std::string& subject) const {
    return chain(false, j, i, subject);
  }
  FormulaRef omega(int j, int i, const std::string& subject) const {
    return chain(true, j, i, subject);
  }

 private:
  PcpInstance pcp_;

  int k() const { return static_cast<int>(pcp_.pairs.size()); }
  static int comp(int i) { return 3 - i; }
  static std::string e(int i) { return "E" + std::to_string(i); }
  static std::string zv(int i) { return "Zv" + std::to_string(i); }
  static std::string zw(int i) { return "Zw" + std::to_string(i); }
  static std::string other(const std::string& v) { return v == "x" ? "y" : "x"; }

  FormulaRef alphabet_probe() const {
    const Term x = var("x"), y = var("y");
    std::vector<FormulaRef> fs;
    fs.push_back(atom("S", x, y));
    for (const auto& l : pcp_.alphabet) fs.push_back(implies(atom(l, y), atom(l, y)));
    return exists("y", land_all(fs));
  }

  FormulaRef chain(bool w_side, int j, int i, const std::string& subject) const {
    const std::string& word = w_side ? pcp_.pairs[j - 1].w : pcp_.pairs[j - 1].v;
    const std::string terminal = (w_side ? zw(comp(i)) : zv(comp(i)));
    return land(chain_level(word, w_side, j, i, terminal, 1, subject, false),
                chain_level(word, w_side, j, i, terminal, 1, subject, true));
  }

  // level l places letter l of the word on the next chain point; the strict
  // form asserts a successor exists, the broad form constrains them all
  FormulaRef chain_level(const std::string& word, bool w_side, int j, int i,
                         const std::string& terminal, int l, const std::string& cur,
                         bool broad) const {
    const std::string nxt = other(cur);
    const Term c = var(cur), n = var(nxt);
    std::vector<FormulaRef> fs;
    if (!broad) fs.push_back(atom("S", c, n));
    fs.push_back(atom(e(i), c, n));
    fs.push_back(atom(std::string(1, word[l - 1]), n));
    fs.push_back(atom(marker(w_side, j, l), n));
    if (l == static_cast<int>(word.size()))
      fs.push_back(atom(terminal, n));
    else
      fs.push_back(chain_level(word, w_side, j, i, terminal, l + 1, nxt, broad));
    if (broad) return forall(nxt, implies(atom("S", c, n), land_all(fs)));
    return exists(nxt, land_all(fs));
  }
};

}  // namespace fo2e
