#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fo2e/signature.hpp"
#include "fo2e/structure.hpp"

// Bisimulations between finite structures, parametrised by a shared signature
// rho and a logic:
//   fo2  moves are unrestricted,
//   gf2  moves follow a rho-binary edge forward (or stay put), every rho
//        constant pair must be related, and partial isomorphisms implicitly
//        contain the rho-constant pairs.
// The greatest bisimulation is computed by simultaneous refinement from the
// singleton partial-isomorphism pairs; the per-round tables double as the
// bounded game.

namespace fo2e {

struct BisimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The map given by `m` extended with (c^A, c^B) for every constant in rho.
// Checks well-definedness, injectivity and preservation of rho atoms in both
// directions.
inline bool partial_iso(const Structure& A, const Structure& B, const Signature& rho,
                        std::vector<std::pair<int, int>> m) {
  for (const auto& c : rho.constants) {
    auto ia = A.constants.find(c), ib = B.constants.find(c);
    if (ia == A.constants.end())
      throw BisimError("constant '" + c + "' is not interpreted in the left structure");
    if (ib == B.constants.end())
      throw BisimError("constant '" + c + "' is not interpreted in the right structure");
    m.emplace_back(ia->second, ib->second);
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if ((m[i].first == m[j].first) != (m[i].second == m[j].second)) return false;
  for (const auto& [a, b] : m)
    for (const auto& u : rho.unary)
      if (A.un(u, a) != B.un(u, b)) return false;
  for (const auto& [a1, b1] : m)
    for (const auto& [a2, b2] : m)
      for (const auto& r : rho.binary)
        if (A.bin(r, a1, a2) != B.bin(r, b1, b2)) return false;
  return true;
}

class GameTable {
 public:
  GameTable(const Structure& A, const Structure& B, const Signature& rho, Mode logic,
            int max_rounds = -1)
      : A_(A), B_(B), rho_(rho), logic_(logic), nA_(A.n()), nB_(B.n()) {
    if (logic == Mode::fo2 && !rho.constants.empty())
      throw BisimError("fo2 shared signatures cannot contain constants");

    for (const auto& r : rho.binary) {
      auto ia = A.binary.find(r);
      auto ib = B.binary.find(r);
      binsA_.push_back(ia != A.binary.end() && !ia->second.empty() ? ia->second.data() : nullptr);
      binsB_.push_back(ib != B.binary.end() && !ib->second.empty() ? ib->second.data() : nullptr);
    }

    iso1_.assign(static_cast<std::size_t>(nA_) * nB_, 0);
    for (int a = 0; a < nA_; ++a)
      for (int b = 0; b < nB_; ++b)
        iso1_[idx(a, b)] = partial_iso(A, B, rho, {{a, b}});

    movesA_ = make_moves(A, nA_, binsA_);
    movesB_ = make_moves(B, nB_, binsB_);

    elim_.assign(static_cast<std::size_t>(nA_) * nB_, -1);
    std::vector<char> alive = iso1_;
    for (int a = 0; a < nA_; ++a)
      for (int b = 0; b < nB_; ++b)
        if (!alive[idx(a, b)]) elim_[idx(a, b)] = 0;

    for (int round = 1; max_rounds < 0 || round <= max_rounds; ++round) {
      std::vector<std::pair<int, int>> removed;
      for (int a = 0; a < nA_; ++a)
        for (int b = 0; b < nB_; ++b)
          if (alive[idx(a, b)] && !pair_ok(a, b, alive)) removed.emplace_back(a, b);
      if (removed.empty()) {
        stable_ = true;
        break;
      }
      for (const auto& [a, b] : removed) {
        alive[idx(a, b)] = 0;
        elim_[idx(a, b)] = round;
      }
      rounds_run_ = round;
    }
  }

  // Cross conditions of the two-element map {a->b, a2->b2}.
  bool link(int a, int a2, int b, int b2) const {
    if ((a == a2) != (b == b2)) return false;
    for (std::size_t r = 0; r < binsA_.size(); ++r) {
      const char* ma = binsA_[r];
      const char* mb = binsB_[r];
      const bool f1 = ma && ma[static_cast<std::size_t>(a) * nA_ + a2];
      const bool f2 = mb && mb[static_cast<std::size_t>(b) * nB_ + b2];
      if (f1 != f2) return false;
      const bool g1 = ma && ma[static_cast<std::size_t>(a2) * nA_ + a];
      const bool g2 = mb && mb[static_cast<std::size_t>(b2) * nB_ + b];
      if (g1 != g2) return false;
    }
    return true;
  }

  bool iso1(int a, int b) const { return iso1_[idx(a, b)]; }
  bool iso2(int a, int a2, int b, int b2) const {
    return iso1_[idx(a, b)] && iso1_[idx(a2, b2)] && link(a, a2, b, b2);
  }

  // -1: never eliminated within the computed rounds; 0: no singleton
  // isomorphism; r>0: eliminated in refinement round r.
  int elim(int a, int b) const { return elim_[idx(a, b)]; }
  bool game(int k, int a, int b) const {
    const int e = elim_[idx(a, b)];
    return e < 0 || e > k;
  }
  bool stable_pair(int a, int b) const { return elim_[idx(a, b)] < 0; }
  bool stable_reached() const { return stable_; }
  int rounds_run() const { return rounds_run_; }

  const std::vector<int>& movesA(int a) const { return movesA_[a]; }
  const std::vector<int>& movesB(int b) const { return movesB_[b]; }

  const Structure& left() const { return A_; }
  const Structure& right() const { return B_; }
  const Signature& rho() const { return rho_; }
  Mode logic() const { return logic_; }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * nB_ + b; }

  std::vector<std::vector<int>> make_moves(const Structure& S, int n,
                                           const std::vector<const char*>& bins) const {
    std::vector<std::vector<int>> moves(n);
    for (int i = 0; i < n; ++i) {
      if (logic_ == Mode::fo2) {
        moves[i].resize(n);
        for (int j = 0; j < n; ++j) moves[i][j] = j;
        continue;
      }
      for (int j = 0; j < n; ++j) {
        bool reach = i == j;
        for (const char* m : bins)
          if (m && m[static_cast<std::size_t>(i) * n + j]) reach = true;
        if (reach) moves[i].push_back(j);
      }
    }
    (void)S;
    return moves;
  }

  bool pair_ok(int a, int b, const std::vector<char>& alive) const {
    for (int a2 : movesA_[a]) {
      bool found = false;
      for (int b2 = 0; b2 < nB_ && !found; ++b2)
        found = alive[idx(a2, b2)] && link(a, a2, b, b2);
      if (!found) return false;
    }
    for (int b2 : movesB_[b]) {
      bool found = false;
      for (int a2 = 0; a2 < nA_ && !found; ++a2)
        found = alive[idx(a2, b2)] && link(a, a2, b, b2);
      if (!found) return false;
    }
    return true;
  }

  const Structure& A_;
  const Structure& B_;
  Signature rho_;
  Mode logic_;
  int nA_, nB_;
  std::vector<const char*> binsA_, binsB_;
  std::vector<char> iso1_;
  std::vector<int> elim_;
  std::vector<std::vector<int>> movesA_, movesB_;
  bool stable_ = false;
  int rounds_run_ = 0;
};

struct BisimResult {
  bool exists = false;
  std::vector<std::pair<int, int>> pairs;  // the greatest bisimulation, lexicographic
  std::string reason;                      // why none exists
};

inline BisimResult greatest_from_table(const GameTable& g) {
  const Structure& A = g.left();
  const Structure& B = g.right();
  BisimResult out;
  // constants before globality: partial isomorphisms pin each constant to its
  // counterpart, so an unstable constant pair also strands the element, and
  // the constant-specific reason is the useful one
  if (g.logic() == Mode::gf2) {
    for (const auto& c : g.rho().constants)
      if (!g.stable_pair(g.left().constants.at(c), g.right().constants.at(c))) {
        out.reason = "constant '" + c + "' pair is not in the stable relation";
        return out;
      }
  }
  for (int a = 0; a < A.n(); ++a) {
    bool covered = false;
    for (int b = 0; b < B.n() && !covered; ++b) covered = g.stable_pair(a, b);
    if (!covered) {
      out.reason = "left element '" + A.ids[a] + "' has no partner";
      return out;
    }
  }
  for (int b = 0; b < B.n(); ++b) {
    bool covered = false;
    for (int a = 0; a < A.n() && !covered; ++a) covered = g.stable_pair(a, b);
    if (!covered) {
      out.reason = "right element '" + B.ids[b] + "' has no partner";
      return out;
    }
  }
  out.exists = true;
  for (int a = 0; a < A.n(); ++a)
    for (int b = 0; b < B.n(); ++b)
      if (g.stable_pair(a, b)) out.pairs.emplace_back(a, b);
  return out;
}

inline BisimResult greatest_bisim(const Structure& A, const Structure& B, const Signature& rho,
                                  Mode logic) {
  GameTable g(A, B, rho, logic);
  return greatest_from_table(g);
}

inline void check_tuples(const std::vector<int>& ta, const std::vector<int>& tb) {
  if (ta.size() != tb.size() || ta.size() > 2)
    throw BisimError("point tuples must have equal length at most 2");
}

inline std::vector<std::pair<int, int>> zip_tuples(const std::vector<int>& ta,
                                                   const std::vector<int>& tb) {
  std::vector<std::pair<int, int>> m;
  for (std::size_t i = 0; i < ta.size(); ++i) m.emplace_back(ta[i], tb[i]);
  return m;
}

inline bool pointed_bisimilar(const Structure& A, const std::vector<int>& ta, const Structure& B,
                              const std::vector<int>& tb, const Signature& rho, Mode logic) {
  check_tuples(ta, tb);
  GameTable g(A, B, rho, logic);
  BisimResult r = greatest_from_table(g);
  if (!r.exists) return false;
  if (!partial_iso(A, B, rho, zip_tuples(ta, tb))) return false;
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (!g.stable_pair(ta[i], tb[i])) return false;
  return true;
}

// k rounds of the local game. Globality and the gf2 constant seeding are
// conditions on a full bisimulation, not on a k-round play, so they are not
// consulted here; k=0 coincides with the tuple partial-isomorphism check.
inline bool bounded_game(const Structure& A, const std::vector<int>& ta, const Structure& B,
                         const std::vector<int>& tb, const Signature& rho, Mode logic, int k) {
  check_tuples(ta, tb);
  if (k < 0) throw BisimError("round count must be non-negative");
  if (!partial_iso(A, B, rho, zip_tuples(ta, tb))) return false;
  GameTable g(A, B, rho, logic, k);
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (!g.game(k, ta[i], tb[i])) return false;
  return true;
}

}  // namespace fo2e
