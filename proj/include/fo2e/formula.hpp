#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

// AST for two-variable first-order formulas over a relational signature with
// the distinguished equivalence predicates E1, E2. Variables are always "x"
// and "y"; anything else in term position is a constant (gf2 mode only).

namespace fo2e {

enum class Mode { fo2, gf2 };

enum class Kind { True, False, Atom, Equal, Not, And, Or, Implies, Forall, Exists };

struct Term {
  bool is_var = true;
  std::string name;

  friend bool operator==(const Term&, const Term&) = default;
};

inline Term var(std::string n) { return Term{true, std::move(n)}; }
inline Term cnst(std::string n) { return Term{false, std::move(n)}; }

struct Node;
using FormulaRef = std::shared_ptr<const Node>;

// Atom: pred/args (1 or 2 terms).  Equal: args (2 terms).
// Not/Forall/Exists: lhs (+ qvar).  And/Or/Implies: lhs, rhs.
struct Node {
  Kind kind;
  std::string pred;
  std::vector<Term> args;
  FormulaRef lhs, rhs;
  std::string qvar;
};

struct Formula {
  FormulaRef root;
  Mode mode = Mode::fo2;
};

inline FormulaRef top() {
  static const FormulaRef t = std::make_shared<Node>(Node{Kind::True, {}, {}, nullptr, nullptr, {}});
  return t;
}

inline FormulaRef bottom() {
  static const FormulaRef f = std::make_shared<Node>(Node{Kind::False, {}, {}, nullptr, nullptr, {}});
  return f;
}

inline FormulaRef atom(std::string pred, std::vector<Term> args) {
  return std::make_shared<Node>(Node{Kind::Atom, std::move(pred), std::move(args), nullptr, nullptr, {}});
}

inline FormulaRef atom(std::string pred, Term t) { return atom(std::move(pred), std::vector<Term>{std::move(t)}); }

inline FormulaRef atom(std::string pred, Term t1, Term t2) {
  return atom(std::move(pred), std::vector<Term>{std::move(t1), std::move(t2)});
}

inline FormulaRef eq(Term t1, Term t2) {
  return std::make_shared<Node>(Node{Kind::Equal, {}, {std::move(t1), std::move(t2)}, nullptr, nullptr, {}});
}

inline FormulaRef neg(FormulaRef f) {
  return std::make_shared<Node>(Node{Kind::Not, {}, {}, std::move(f), nullptr, {}});
}

inline FormulaRef land(FormulaRef l, FormulaRef r) {
  return std::make_shared<Node>(Node{Kind::And, {}, {}, std::move(l), std::move(r), {}});
}

inline FormulaRef lor(FormulaRef l, FormulaRef r) {
  return std::make_shared<Node>(Node{Kind::Or, {}, {}, std::move(l), std::move(r), {}});
}

inline FormulaRef implies(FormulaRef l, FormulaRef r) {
  return std::make_shared<Node>(Node{Kind::Implies, {}, {}, std::move(l), std::move(r), {}});
}

inline FormulaRef forall(std::string v, FormulaRef f) {
  return std::make_shared<Node>(Node{Kind::Forall, {}, {}, std::move(f), nullptr, std::move(v)});
}

inline FormulaRef exists(std::string v, FormulaRef f) {
  return std::make_shared<Node>(Node{Kind::Exists, {}, {}, std::move(f), nullptr, std::move(v)});
}

// Left fold; empty input yields true.
inline FormulaRef land_all(const std::vector<FormulaRef>& fs) {
  if (fs.empty()) return top();
  FormulaRef acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

inline FormulaRef lor_all(const std::vector<FormulaRef>& fs) {
  if (fs.empty()) return bottom();
  FormulaRef acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

inline bool equal_formulas(const FormulaRef& a, const FormulaRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->pred != b->pred || a->args != b->args || a->qvar != b->qvar) return false;
  return equal_formulas(a->lhs, b->lhs) && equal_formulas(a->rhs, b->rhs);
}

inline void collect_free_vars(const FormulaRef& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!f) return;
  for (const Term& t : f->args)
    if (t.is_var && !bound.count(t.name)) out.insert(t.name);
  if (f->kind == Kind::Forall || f->kind == Kind::Exists) {
    const bool was_bound = bound.count(f->qvar) > 0;
    bound.insert(f->qvar);
    collect_free_vars(f->lhs, bound, out);
    if (!was_bound) bound.erase(f->qvar);
    return;
  }
  collect_free_vars(f->lhs, bound, out);
  collect_free_vars(f->rhs, bound, out);
}

inline std::set<std::string> free_vars(const FormulaRef& f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

// Conjuncts of the &-spine in left-to-right order; a non-And node is its own
// single conjunct.
inline void flatten_and(const FormulaRef& f, std::vector<FormulaRef>& out) {
  if (f && f->kind == Kind::And) {
    flatten_and(f->lhs, out);
    flatten_and(f->rhs, out);
  } else {
    out.push_back(f);
  }
}

inline std::vector<FormulaRef> flatten_and(const FormulaRef& f) {
  std::vector<FormulaRef> out;
  flatten_and(f, out);
  return out;
}

inline int node_count(const FormulaRef& f) {
  if (!f) return 0;
  return 1 + node_count(f->lhs) + node_count(f->rhs);
}

inline int quantifier_depth(const FormulaRef& f) {
  if (!f) return 0;
  const int sub = std::max(quantifier_depth(f->lhs), quantifier_depth(f->rhs));
  return (f->kind == Kind::Forall || f->kind == Kind::Exists) ? sub + 1 : sub;
}

}  // namespace fo2e
