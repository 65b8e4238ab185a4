#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fo2e/bisim.hpp"
#include "fo2e/eval.hpp"
#include "fo2e/formula.hpp"
#include "fo2e/printer.hpp"

// Builds, for a non-bisimilar pair of points, a formula over the shared
// signature that holds at the left point and fails at the right one. The
// construction follows the refinement trace: a pair eliminated in round r
// yields a formula of quantifier depth at most r. Pairs that survive locally
// but lack a global bisimulation are separated by a sentence.

namespace fo2e {

struct DistinguishResult {
  bool bisimilar = false;
  FormulaRef chi;  // set when !bisimilar
};

// Sentences have no free variable to plug the point into.
inline bool eval_at(const Structure& S, const FormulaRef& f, int i) {
  return free_vars(f).empty() ? evaluate(S, f, {}) : evaluate(S, f, {i});
}

namespace detail {

class Distinguisher {
 public:
  explicit Distinguisher(const GameTable& g)
      : g_(g), A_(g.left()), B_(g.right()), rho_(g.rho()), gf_(g.logic() == Mode::gf2) {}

  // Formula with free variable `s`, true at A,a and false at B,b
  // (from_right swaps which side satisfies it).
  FormulaRef dist(int a, int b, const std::string& s, bool from_right) {
    const auto key = std::make_tuple(a, b, s == "x", from_right);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const int e = g_.elim(a, b);
    if (e < 0) throw BisimError("internal: asked to distinguish a surviving pair");
    FormulaRef out = e == 0 ? atomic_dist(a, b, s, from_right) : move_dist(a, b, s, from_right);
    memo_.emplace(key, out);
    return out;
  }

 private:
  using Parts = std::vector<FormulaRef>;

  static void add_part(Parts& parts, std::set<std::string>& seen, FormulaRef f) {
    if (seen.insert(to_string(f)).second) parts.push_back(std::move(f));
  }

  FormulaRef atomic_dist(int a, int b, const std::string& s, bool from_right) {
    auto lit = [&](FormulaRef at, bool left_true) {
      const bool source_true = from_right ? !left_true : left_true;
      return source_true ? at : neg(at);
    };
    for (const auto& u : rho_.unary)
      if (A_.un(u, a) != B_.un(u, b)) return lit(atom(u, var(s)), A_.un(u, a));
    for (const auto& r : rho_.binary)
      if (A_.bin(r, a, a) != B_.bin(r, b, b)) return lit(atom(r, var(s), var(s)), A_.bin(r, a, a));
    for (const auto& c : rho_.constants) {
      const int ca = A_.constants.at(c), cb = B_.constants.at(c);
      if ((a == ca) != (b == cb)) return lit(eq(var(s), cnst(c)), a == ca);
      for (const auto& r : rho_.binary) {
        if (A_.bin(r, a, ca) != B_.bin(r, b, cb))
          return lit(atom(r, var(s), cnst(c)), A_.bin(r, a, ca));
        if (A_.bin(r, ca, a) != B_.bin(r, cb, b))
          return lit(atom(r, cnst(c), var(s)), A_.bin(r, ca, a));
      }
    }
    // disagreements among the constants themselves (point-independent)
    for (const auto& c : rho_.constants) {
      const int ca = A_.constants.at(c), cb = B_.constants.at(c);
      for (const auto& u : rho_.unary)
        if (A_.un(u, ca) != B_.un(u, cb)) return lit(atom(u, cnst(c)), A_.un(u, ca));
      for (const auto& d : rho_.constants) {
        const int da = A_.constants.at(d), db = B_.constants.at(d);
        if ((ca == da) != (cb == db)) return lit(eq(cnst(c), cnst(d)), ca == da);
        for (const auto& r : rho_.binary)
          if (A_.bin(r, ca, da) != B_.bin(r, cb, db))
            return lit(atom(r, cnst(c), cnst(d)), A_.bin(r, ca, da));
      }
    }
    throw BisimError("internal: singleton mismatch without an atomic witness");
  }

  // Description of the pair (src, moved) inside S over variables (s, t),
  // omitting the s-side atoms. For a pair (u, u2) in the other structure
  // with (src, u) agreeing on singletons, it holds exactly when
  // (src, moved) -> (u, u2) is a partial isomorphism.
  Parts pair_type(const Structure& S, int src, int moved, const std::string& s,
                  const std::string& t, std::set<std::string>& seen) const {
    Parts parts;
    if (gf_) {
      for (const auto& r : rho_.binary)
        if (S.bin(r, src, moved)) {
          add_part(parts, seen, atom(r, var(s), var(t)));
          break;
        }
    }
    add_part(parts, seen, neg(eq(var(s), var(t))));
    for (const auto& r : rho_.binary) {
      FormulaRef f = atom(r, var(s), var(t));
      add_part(parts, seen, S.bin(r, src, moved) ? f : neg(f));
      FormulaRef g = atom(r, var(t), var(s));
      add_part(parts, seen, S.bin(r, moved, src) ? g : neg(g));
    }
    for (const auto& u : rho_.unary) {
      FormulaRef f = atom(u, var(t));
      add_part(parts, seen, S.un(u, moved) ? f : neg(f));
    }
    for (const auto& r : rho_.binary) {
      FormulaRef f = atom(r, var(t), var(t));
      add_part(parts, seen, S.bin(r, moved, moved) ? f : neg(f));
    }
    for (const auto& c : rho_.constants) {
      const int ci = S.constants.at(c);
      FormulaRef f = eq(var(t), cnst(c));
      add_part(parts, seen, moved == ci ? f : neg(f));
      for (const auto& r : rho_.binary) {
        FormulaRef g = atom(r, var(t), cnst(c));
        add_part(parts, seen, S.bin(r, moved, ci) ? g : neg(g));
        FormulaRef h = atom(r, cnst(c), var(t));
        add_part(parts, seen, S.bin(r, ci, moved) ? h : neg(h));
      }
    }
    return parts;
  }

  FormulaRef move_dist(int a, int b, const std::string& s, bool from_right) {
    const int e = g_.elim(a, b);
    const std::string t = s == "x" ? "y" : "x";
    auto alive = [&](int a2, int b2) {
      const int v = g_.elim(a2, b2);
      return v < 0 || v >= e;
    };

    for (int a2 : g_.movesA(a)) {
      bool matched = false;
      for (int b2 = 0; b2 < B_.n() && !matched; ++b2)
        matched = alive(a2, b2) && g_.link(a, a2, b, b2);
      if (matched) continue;
      std::set<std::string> seen;
      Parts parts = pair_type(A_, a, a2, s, t, seen);
      for (int b2 = 0; b2 < B_.n(); ++b2)
        if (g_.iso2(a, a2, b, b2)) add_part(parts, seen, dist(a2, b2, t, false));
      FormulaRef chi = exists(t, land_all(parts));
      return from_right ? neg(chi) : chi;
    }
    for (int b2 : g_.movesB(b)) {
      bool matched = false;
      for (int a2 = 0; a2 < A_.n() && !matched; ++a2)
        matched = alive(a2, b2) && g_.link(a, a2, b, b2);
      if (matched) continue;
      std::set<std::string> seen;
      Parts parts = pair_type(B_, b, b2, s, t, seen);
      for (int a2 = 0; a2 < A_.n(); ++a2)
        if (g_.iso2(a, a2, b, b2)) add_part(parts, seen, dist(a2, b2, t, true));
      FormulaRef xi = exists(t, land_all(parts));
      return from_right ? xi : neg(xi);
    }
    throw BisimError("internal: eliminated pair has no failing move");
  }

  const GameTable& g_;
  const Structure& A_;
  const Structure& B_;
  const Signature& rho_;
  const bool gf_;
  std::map<std::tuple<int, int, bool, bool>, FormulaRef> memo_;
};

}  // namespace detail

inline DistinguishResult distinguishing_formula(const Structure& A, int a, const Structure& B, int b,
                                                const Signature& rho, Mode logic) {
  GameTable g(A, B, rho, logic);
  const BisimResult great = greatest_from_table(g);
  if (great.exists && g.stable_pair(a, b)) return {true, nullptr};

  detail::Distinguisher d(g);
  if (g.elim(a, b) >= 0) return {false, d.dist(a, b, "x", false)};

  // The pair itself survives locally, so the failure is global: an element
  // with no partner, or an unrelated constant pair. A sentence separates the
  // structures; in gf2 the trivial equality serves as its guard.
  auto sentence = [&](std::vector<FormulaRef> parts) {
    if (logic == Mode::gf2) parts.insert(parts.begin(), eq(var("x"), var("x")));
    return exists("x", land_all(parts));
  };
  auto collect = [](std::set<std::string>& seen, std::vector<FormulaRef>& parts, FormulaRef f) {
    if (seen.insert(to_string(f)).second) parts.push_back(std::move(f));
  };
  for (int z = 0; z < A.n(); ++z) {
    bool paired = false;
    for (int b2 = 0; b2 < B.n() && !paired; ++b2) paired = g.stable_pair(z, b2);
    if (paired) continue;
    std::set<std::string> seen;
    std::vector<FormulaRef> parts;
    for (int b2 = 0; b2 < B.n(); ++b2) collect(seen, parts, d.dist(z, b2, "x", false));
    return {false, sentence(std::move(parts))};
  }
  for (int z = 0; z < B.n(); ++z) {
    bool paired = false;
    for (int a2 = 0; a2 < A.n() && !paired; ++a2) paired = g.stable_pair(a2, z);
    if (paired) continue;
    std::set<std::string> seen;
    std::vector<FormulaRef> parts;
    for (int a2 = 0; a2 < A.n(); ++a2) collect(seen, parts, d.dist(a2, z, "x", true));
    return {false, neg(sentence(std::move(parts)))};
  }
  for (const auto& c : rho.constants)
    if (!g.stable_pair(A.constants.at(c), B.constants.at(c))) {
      FormulaRef delta = d.dist(A.constants.at(c), B.constants.at(c), "x", false);
      return {false, exists("x", land(eq(var("x"), cnst(c)), delta))};
    }
  throw BisimError("internal: non-bisimilar pair without a distinguishing cause");
}

}  // namespace fo2e
