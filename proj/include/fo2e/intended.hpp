#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fo2e/bisim.hpp"
#include "fo2e/eval.hpp"
#include "fo2e/pcp.hpp"
#include "fo2e/reduction.hpp"
#include "fo2e/structure.hpp"

// Finite truncations of the canonical models behind the reduction, plus a
// verification harness. The left model is two disjoint copies of a labeled
// 3-point R-cycle, each with an S-chain spelling the common solution word.
// The right model folds the two-sided infinite R-chain into a closed cycle of
// length 3*r_window so every cycle point keeps R-neighbours, and hangs one
// fully marked v-chain at b0 and one w-chain at b3. Universal conjuncts are
// only asserted at points far enough from the clipped chain ends; the cutoff
// uses Gaifman distance over all binary relations, E1/E2 included.

namespace fo2e {

struct IntendedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationParams {
  int s_depth = 12;
  int r_window = 2;  // R-cycle length is 3*r_window; must be even
  int interior_radius = 4;
};

struct Pointed {
  Structure s;
  int point = 0;
};

namespace detail {

inline std::string pad_pos(int l, int depth) {
  std::string s = std::to_string(l);
  const std::size_t width = std::to_string(depth).size();
  return std::string(width - s.size(), '0') + s;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// block t of either chain runs through E1 when t is odd, E2 when t is even
inline int block_parity(int t) { return t % 2 == 1 ? 1 : 2; }

}  // namespace detail

inline void validate_truncation(const PcpInstance& p, const PcpSolution& sol,
                                const TruncationParams& t) {
  int longest = 0;
  for (const auto& pr : p.pairs)
    longest = std::max(longest, static_cast<int>(std::max(pr.v.size(), pr.w.size())));
  if (t.s_depth < longest)
    throw IntendedError("s_depth must be at least the longest word (" + std::to_string(longest) +
                        ")");
  if (t.r_window < 2 || t.r_window % 2 != 0)
    throw IntendedError("r_window must be even and at least 2");
  if (t.interior_radius < 0 || t.interior_radius > t.s_depth)
    throw IntendedError("interior_radius must lie between 0 and s_depth");
  if (!solution_agrees(p, sol, t.s_depth))
    throw IntendedError("the two sides of the solution disagree within s_depth");
}

inline Pointed build_intended_A(const PcpInstance& p, const PcpSolution& sol,
                                const TruncationParams& t) {
  validate_truncation(p, sol, t);
  const auto letters = spell(p, sol, false, t.s_depth);
  std::vector<std::string> ids;
  for (int copy = 0; copy < 2; ++copy) {
    const std::string pre = "p" + std::to_string(copy) + "_";
    for (int c = 0; c < 3; ++c) ids.push_back(pre + "c" + std::to_string(c));
    for (int l = 1; l <= t.s_depth; ++l) ids.push_back(pre + "s" + detail::pad_pos(l, t.s_depth));
  }
  Structure s = Structure::make(std::move(ids));
  for (int copy = 0; copy < 2; ++copy) {
    const std::string pre = "p" + std::to_string(copy) + "_";
    auto at = [&](const std::string& suffix) { return s.index.at(pre + suffix); };
    for (int c = 0; c < 3; ++c) s.set_bin("R", at("c" + std::to_string(c)), at("c" + std::to_string((c + 1) % 3)));
    int prev = at("c0");
    for (int l = 1; l <= t.s_depth; ++l) {
      const int cur = at("s" + detail::pad_pos(l, t.s_depth));
      s.set_bin("S", prev, cur);
      s.set_un(std::string(1, letters[l - 1].letter), cur);
      prev = cur;
    }
  }
  for (int c = 0; c < 3; ++c)
    s.set_un("X" + std::to_string(c), s.index.at("p0_c" + std::to_string(c)));
  const int a0 = s.index.at("p0_c0");
  return {std::move(s), a0};
}

inline Pointed build_intended_B(const PcpInstance& p, const PcpSolution& sol,
                                const TruncationParams& t) {
  validate_truncation(p, sol, t);
  const int cycle = 3 * t.r_window;
  std::vector<std::string> ids;
  for (int i = 0; i < cycle; ++i) ids.push_back("b" + std::to_string(i));
  for (int l = 1; l <= t.s_depth; ++l) ids.push_back("v0_" + detail::pad_pos(l, t.s_depth));
  for (int l = 1; l <= t.s_depth; ++l) ids.push_back("w3_" + detail::pad_pos(l, t.s_depth));
  Structure s = Structure::make(std::move(ids));
  const int n = s.n();

  auto bi = [&](int i) { return s.index.at("b" + std::to_string(i)); };
  for (int i = 0; i < cycle; ++i) s.set_bin("R", bi(i), bi((i + 1) % cycle));
  s.set_un("Y1", bi(1));
  s.set_un("Y2", bi(2));

  detail::UnionFind e1(n), e2(n);
  for (int i = 1; i < cycle; ++i) e1.unite(bi(0), bi(i));

  // per-chain boundary points of each parity, roots included, for the closure
  std::vector<int> zv[3], zw[3];
  for (const bool w_side : {false, true}) {
    const auto letters = spell(p, sol, w_side, t.s_depth);
    const int root = w_side ? bi(3) : bi(0);
    const std::string pre = w_side ? "w3_" : "v0_";
    const std::string zu = w_side ? "Zw" : "Zv";
    s.set_un(zu, root);
    s.set_un(zu + "1", root);
    (w_side ? zw : zv)[1].push_back(root);
    int prev = root;
    for (int l = 1; l <= t.s_depth; ++l) {
      const int cur = s.index.at(pre + detail::pad_pos(l, t.s_depth));
      const auto& bl = letters[l - 1];
      s.set_bin("S", prev, cur);
      s.set_un(std::string(1, bl.letter), cur);
      s.set_un(Reduction::marker(w_side, bl.pair_index, bl.level), cur);
      s.set_un(zu, cur);
      (detail::block_parity(bl.block) == 1 ? e1 : e2).unite(prev, cur);
      if (bl.block_end) {
        const int next_parity = detail::block_parity(bl.block + 1);
        s.set_un(zu + std::to_string(next_parity), cur);
        (w_side ? zw : zv)[next_parity].push_back(cur);
      }
      prev = cur;
    }
  }

  // forced closure of the cross-chain coordination: whenever a v-boundary and
  // a w-boundary of parity 3-i share an E_i class, they must also share the
  // other class; iterate to fixpoint
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i <= 2; ++i) {
      const int o = 3 - i;
      detail::UnionFind& same = i == 1 ? e1 : e2;
      detail::UnionFind& other = i == 1 ? e2 : e1;
      for (const int x : zv[o])
        for (const int y : zw[o])
          if (same.find(x) == same.find(y) && other.unite(x, y)) changed = true;
    }
  }

  for (const bool second : {false, true}) {
    detail::UnionFind& uf = second ? e2 : e1;
    auto& m = s.binary[second ? "E2" : "E1"];
    m.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (uf.find(i) == uf.find(j)) m[static_cast<std::size_t>(i) * n + j] = 1;
  }
  const int root = bi(0);
  return {std::move(s), root};
}

struct ConjunctCheck {
  std::string group, name;
  long long checked = 0, failed = 0, skipped = 0;
  std::vector<std::string> failures;  // first few failing instantiations
};

struct IntendedReport {
  bool phi_at_point = false;
  std::vector<ConjunctCheck> conjuncts;
  std::vector<std::pair<int, bool>> games;  // round bound -> verdict
  std::vector<std::string> interior, clipped;
  std::vector<std::string> notes;

  bool conjuncts_pass() const {
    return std::all_of(conjuncts.begin(), conjuncts.end(),
                       [](const ConjunctCheck& c) { return c.failed == 0; });
  }
  bool games_pass() const {
    return std::all_of(games.begin(), games.end(), [](const auto& g) { return g.second; });
  }
  bool all_pass() const { return phi_at_point && conjuncts_pass() && games_pass(); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["sections"]["phi-at-point"] = phi_at_point;
    j["sections"]["interior-conjuncts"] = conjuncts_pass();
    j["sections"]["bounded-games"] = games_pass();
    j["all_pass"] = all_pass();
    j["conjuncts"] = nlohmann::json::array();
    for (const auto& c : conjuncts)
      j["conjuncts"].push_back({{"group", c.group},
                                {"name", c.name},
                                {"checked", c.checked},
                                {"failed", c.failed},
                                {"skipped", c.skipped},
                                {"failures", c.failures}});
    j["games"] = nlohmann::json::array();
    for (const auto& [k, ok] : games) j["games"].push_back({{"rounds", k}, {"pass", ok}});
    j["interior"] = interior;
    j["clipped"] = clipped;
    j["notes"] = notes;
    return j;
  }
};

// Gaifman distance from the clipped chain ends, edges taken from every binary
// relation of the structure
inline std::vector<int> frontier_distance(const Structure& s, const std::vector<int>& frontier) {
  const int n = s.n();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [name, m] : s.binary) {
    (void)name;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && m[static_cast<std::size_t>(i) * n + j]) {
          adj[i].push_back(j);  // co-occurrence is undirected
          adj[j].push_back(i);
        }
  }
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  for (const int f : frontier) {
    dist[f] = 0;
    queue.push_back(f);
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (const int j : adj[i])
      if (dist[j] == -1) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
  }
  return dist;
}

inline IntendedReport verify_built(const PcpInstance& p, const Pointed& A, const Pointed& B,
                                   const TruncationParams& t, int max_rounds,
                                   bool run_games = true) {
  const Reduction red(p);
  IntendedReport rep;
  rep.phi_at_point = evaluate(A.s, red.phi().root, {A.point});

  std::vector<int> frontier;
  frontier.push_back(B.s.index.at("v0_" + detail::pad_pos(t.s_depth, t.s_depth)));
  frontier.push_back(B.s.index.at("w3_" + detail::pad_pos(t.s_depth, t.s_depth)));
  const auto dist = frontier_distance(B.s, frontier);
  std::vector<int> interior;
  for (int i = 0; i < B.s.n(); ++i) {
    const bool in = dist[i] == -1 || dist[i] > t.interior_radius;
    (in ? rep.interior : rep.clipped).push_back(B.s.ids[i]);
    if (in) interior.push_back(i);
  }

  for (const auto& nc : red.neg_psi_conjuncts()) {
    std::vector<std::string> prefix;
    FormulaRef matrix = nc.f;
    while (matrix->kind == Kind::Forall) {
      prefix.push_back(matrix->qvar);
      matrix = matrix->lhs;
    }
    const auto fv = free_vars(matrix);
    // prefix variables range over the interior; a variable left free by the
    // prefix is the evaluation point itself
    auto quantified = [&](const std::string& v) {
      return std::find(prefix.begin(), prefix.end(), v) != prefix.end();
    };
    auto values = [&](const std::string& v) -> std::vector<int> {
      if (quantified(v)) return interior;
      if (fv.count(v)) return {B.point};
      return {-1};
    };
    const auto xs = values("x"), ys = values("y");
    ConjunctCheck cc{nc.group, nc.name, 0, 0, 0, {}};
    const long long fullx = quantified("x") ? B.s.n() : 1;
    const long long fully = quantified("y") ? B.s.n() : 1;
    cc.skipped = fullx * fully -
                 static_cast<long long>(xs.size()) * static_cast<long long>(ys.size());
    for (const int vx : xs)
      for (const int vy : ys) {
        std::vector<int> pt;
        if (fv.count("x")) pt.push_back(vx);
        if (fv.count("y")) pt.push_back(vy);
        if (evaluate(B.s, matrix, pt)) {
          ++cc.checked;
        } else {
          ++cc.failed;
          if (cc.failures.size() < 5) {
            std::string where;
            if (fv.count("x")) where += "x=" + B.s.ids[vx];
            if (fv.count("y")) where += std::string(where.empty() ? "" : ", ") + "y=" + B.s.ids[vy];
            cc.failures.push_back(where.empty() ? "(closed)" : where);
          }
        }
      }
    rep.conjuncts.push_back(std::move(cc));
  }

  if (run_games)
    for (int k = 1; k <= max_rounds; ++k)
      rep.games.emplace_back(
          k, bounded_game(A.s, {A.point}, B.s, {B.point}, red.rho(), Mode::fo2, k));

  rep.notes.push_back(
      "interior metric: Gaifman distance over all binary relations, E1/E2 included; frontier = "
      "the last point of each S-chain");
  rep.notes.push_back(
      "convention: the right model folds the two-sided R-chain into a closed cycle of length "
      "3*r_window; only b0 carries a v-chain and only b3 a w-chain");
  rep.notes.push_back(
      "convention: cycle points other than b0..b3 carry no Y or Z labels and sit in the shared "
      "E1 class with singleton E2 classes");
  return rep;
}

inline IntendedReport verify_intended(const PcpInstance& p, const PcpSolution& sol,
                                      const TruncationParams& t, int max_rounds,
                                      bool run_games = true) {
  const Pointed A = build_intended_A(p, sol, t);
  const Pointed B = build_intended_B(p, sol, t);
  return verify_built(p, A, B, t, max_rounds, run_games);
}

}  // namespace fo2e
