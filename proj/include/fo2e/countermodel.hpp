#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fo2e/eval.hpp"
#include "fo2e/formula.hpp"
#include "fo2e/signature.hpp"
#include "fo2e/structure.hpp"

// Bounded model search. Domains are enumerated up to a size cap, the two
// equivalence relations range over set partitions, and the remaining atoms
// are filled in by backtracking with three-valued evaluation, so a branch
// dies as soon as some conjunct is false under every completion. A negative
// result with complete=true is exhaustive for the given bound.

namespace fo2e {

struct CountermodelResult {
  bool found = false;
  bool complete = true;    // search space fully covered (or a model found)
  long long nodes = 0;     // backtracking nodes visited
  Structure model = Structure::make({"e0"});
  std::vector<int> point;  // values for the free variables, sorted by name
};

namespace detail {

// restricted growth strings: every set partition of {0..n-1} exactly once
inline std::vector<std::vector<int>> enum_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cls(n, 0);
  auto rec = [&](auto&& self, int i, int maxc) -> void {
    if (i == n) {
      out.push_back(cls);
      return;
    }
    for (int c = 0; c <= maxc + 1; ++c) {
      cls[i] = c;
      self(self, i + 1, std::max(maxc, c));
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(rec, 1, 0);  // cls[0] stays 0
  return out;
}

class ModelSearch {
 public:
  ModelSearch(const FormulaRef& f, long long budget) : budget_(budget) {
    conjuncts_ = flatten_and(f);
    for (const auto& c : conjuncts_) {
      const Signature s = signature_of(c);
      std::set<std::string> preds = s.unary;
      preds.insert(s.binary.begin(), s.binary.end());
      preds_.push_back(std::move(preds));
      collect_signature(c, sig_);
    }
  }

  const Signature& sig() const { return sig_; }
  long long nodes() const { return nodes_; }
  bool budget_hit() const { return budget_hit_; }

  // fills in the open atoms of s; cls1/cls2 are the fixed partitions
  bool run(Structure& s, const std::vector<int>& cls1, const std::vector<int>& cls2, int xi,
           int yi) {
    n_ = s.n();
    s_ = &s;
    cls_[0] = &cls1;
    cls_[1] = &cls2;
    xi_ = xi;
    yi_ = yi;
    unary_.clear();
    binary_.clear();
    for (const auto& p : sig_.unary) unary_[p].assign(n_, -1);
    for (const auto& r : sig_.binary) binary_[r].assign(static_cast<std::size_t>(n_) * n_, -1);
    status_.assign(conjuncts_.size(), -1);
    for (std::size_t c = 0; c < conjuncts_.size(); ++c) {
      status_[c] = static_cast<signed char>(tri(conjuncts_[c], xi_, yi_));
      if (status_[c] == 0) return false;
    }
    return descend();
  }

 private:
  struct Slot {
    std::vector<signed char>* store;
    int index;
    const std::string* pred;
  };

  std::vector<FormulaRef> conjuncts_;
  std::vector<std::set<std::string>> preds_;
  Signature sig_;
  long long budget_, nodes_ = 0;
  bool budget_hit_ = false;

  Structure* s_ = nullptr;
  const std::vector<int>* cls_[2] = {nullptr, nullptr};
  int n_ = 0, xi_ = -1, yi_ = -1;
  std::map<std::string, std::vector<signed char>> unary_, binary_;
  std::vector<signed char> status_;

  int term_index(const Term& t, int xi, int yi) const {
    if (t.is_var) return t.name == "x" ? xi : yi;
    return s_->constants.at(t.name);
  }

  int tri(const FormulaRef& f, int xi, int yi) const {
    switch (f->kind) {
      case Kind::True: return 1;
      case Kind::False: return 0;
      case Kind::Atom: {
        if (f->args.size() == 1) return unary_.at(f->pred)[term_index(f->args[0], xi, yi)];
        const int i = term_index(f->args[0], xi, yi), j = term_index(f->args[1], xi, yi);
        if (f->pred == "E1" || f->pred == "E2") {
          const std::vector<int>& cls = *cls_[f->pred[1] - '1'];
          return cls[i] == cls[j];
        }
        return binary_.at(f->pred)[static_cast<std::size_t>(i) * n_ + j];
      }
      case Kind::Equal:
        return term_index(f->args[0], xi, yi) == term_index(f->args[1], xi, yi);
      case Kind::Not: {
        const int v = tri(f->lhs, xi, yi);
        return v < 0 ? v : 1 - v;
      }
      case Kind::And: {
        const int l = tri(f->lhs, xi, yi);
        if (l == 0) return 0;
        const int r = tri(f->rhs, xi, yi);
        return r == 0 ? 0 : std::min(l, r);
      }
      case Kind::Or: {
        const int l = tri(f->lhs, xi, yi);
        if (l == 1) return 1;
        const int r = tri(f->rhs, xi, yi);
        return r == 1 ? 1 : std::min(l, r);
      }
      case Kind::Implies: {
        const int l = tri(f->lhs, xi, yi);
        if (l == 0) return 1;
        const int r = tri(f->rhs, xi, yi);
        if (r == 1) return 1;
        return l == 1 && r == 0 ? 0 : -1;
      }
      case Kind::Forall:
      case Kind::Exists: {
        const bool ex = f->kind == Kind::Exists;
        const int hit = ex ? 1 : 0;
        bool open = false;
        for (int e = 0; e < n_; ++e) {
          const int v = f->qvar == "x" ? tri(f->lhs, e, yi) : tri(f->lhs, xi, e);
          if (v == hit) return hit;
          if (v < 0) open = true;
        }
        return open ? -1 : 1 - hit;
      }
    }
    return -1;
  }

  // recompute the conjuncts whose predicates include `touched`; false on a
  // definite conflict. tri values only sharpen as atoms get assigned, so a
  // conjunct at 1 never needs another look.
  bool refresh(const std::string& touched, std::vector<std::pair<int, signed char>>& undo) {
    for (std::size_t c = 0; c < conjuncts_.size(); ++c) {
      if (status_[c] == 1 || !preds_[c].count(touched)) continue;
      const signed char v = static_cast<signed char>(tri(conjuncts_[c], xi_, yi_));
      if (v != status_[c]) {
        undo.push_back({static_cast<int>(c), status_[c]});
        status_[c] = v;
      }
      if (v == 0) return false;
    }
    return true;
  }

  // first unassigned atom among the predicates of conjunct c; an undecided
  // conjunct always has one, since equality and E1/E2 leaves are fixed
  Slot pick(std::size_t c) const {
    for (const auto& p : preds_[c]) {
      auto u = unary_.find(p);
      const std::vector<signed char>* vals;
      const std::string* name;
      if (u != unary_.end()) {
        vals = &u->second;
        name = &u->first;
      } else {
        auto b = binary_.find(p);
        vals = &b->second;
        name = &b->first;
      }
      for (std::size_t i = 0; i < vals->size(); ++i)
        if ((*vals)[i] == -1)
          return {const_cast<std::vector<signed char>*>(vals), static_cast<int>(i), name};
    }
    throw EvalError("internal error: undecided conjunct without open atoms");
  }

  void commit() {
    for (const auto& [p, vals] : unary_)
      for (int i = 0; i < n_; ++i)
        if (vals[i] == 1) s_->set_un(p, i);
    for (const auto& [r, vals] : binary_)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (vals[static_cast<std::size_t>(i) * n_ + j] == 1) s_->set_bin(r, i, j);
    for (int e = 0; e < 2; ++e) {
      auto& m = s_->binary[e == 0 ? "E1" : "E2"];
      m.assign(static_cast<std::size_t>(n_) * n_, 0);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          m[static_cast<std::size_t>(i) * n_ + j] = (*cls_[e])[i] == (*cls_[e])[j];
    }
  }

  // branch only on atoms that can still decide some conjunct, so settled
  // parts of the structure never multiply the tree
  bool descend() {
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return false;
    }
    std::size_t c = 0;
    while (c < status_.size() && status_[c] != -1) ++c;
    if (c == status_.size()) {
      commit();  // open atoms no longer matter; they stay false
      return true;
    }
    const Slot slot = pick(c);
    for (const signed char bit : {1, 0}) {
      (*slot.store)[slot.index] = bit;
      std::vector<std::pair<int, signed char>> undo;
      if (refresh(*slot.pred, undo) && descend()) return true;
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) status_[it->first] = it->second;
      if (budget_hit_) break;
    }
    (*slot.store)[slot.index] = -1;
    return false;
  }
};

}  // namespace detail

inline CountermodelResult countermodel_search(const Formula& f, int max_size,
                                              long long budget = 20'000'000) {
  const auto fv = free_vars(f.root);
  for (const auto& v : fv)
    if (v != "x" && v != "y") throw EvalError("unexpected free variable '" + v + "'");
  const bool two = fv.size() == 2;

  CountermodelResult out;
  detail::ModelSearch search(f.root, budget);
  for (int n = 1; n <= max_size && !out.found; ++n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i));
    const auto parts = detail::enum_partitions(n);
    const auto& consts = search.sig().constants;
    std::vector<int> cidx(consts.size(), 0);
    bool more_consts = true;
    while (more_consts && !out.found) {
      for (const auto& p1 : parts) {
        for (const auto& p2 : parts) {
          // the first free variable sits at element 0 up to renaming; a
          // second one must range over the whole domain
          for (int yi = two ? 0 : -1; yi <= (two ? n - 1 : -1) && !out.found; ++yi) {
            Structure s = Structure::make(ids);
            int ci = 0;
            for (const auto& c : consts) s.constants[c] = cidx[ci++];
            int vx = -1, vy = -1;
            if (two) {
              vx = 0;
              vy = yi;
            } else if (fv.count("x")) {
              vx = 0;
            } else if (fv.count("y")) {
              vy = 0;
            }
            if (search.run(s, p1, p2, vx, vy)) {
              out.found = true;
              out.model = s;
              if (two)
                out.point = {0, yi};
              else if (!fv.empty())
                out.point = {0};
            }
          }
          if (out.found) break;
        }
        if (out.found) break;
      }
      more_consts = false;  // advance the constant odometer
      for (std::size_t i = 0; i < cidx.size(); ++i) {
        if (++cidx[i] < n) {
          more_consts = true;
          break;
        }
        cidx[i] = 0;
      }
    }
  }
  out.nodes = search.nodes();
  if (search.budget_hit()) out.complete = false;
  if (out.found && !evaluate(out.model, f.root, out.point))
    throw EvalError("internal error: searched model fails exact evaluation");
  return out;
}

}  // namespace fo2e
