#pragma once

#include <algorithm>
#include <set>
#include <string>

#include "fo2e/formula.hpp"
#include "fo2e/printer.hpp"

// Syntactic guardedness in the one-variable-at-a-time form used here:
//   exists v . (alpha & phi)   alpha an atom (relational or equality,
//   forall v . (alpha -> phi)  constants allowed) whose variables cover
//                              free(body) together with v.
// An existential body that is itself an atom containing v is self-guarding.
// Quantifier-free formulas are guarded.

namespace fo2e {

struct GuardCheck {
  bool ok = true;
  FormulaRef offender;
  std::string reason;
};

namespace detail {

inline bool is_atomic(const FormulaRef& f) { return f->kind == Kind::Atom || f->kind == Kind::Equal; }

inline bool guard_covers(const FormulaRef& alpha, const FormulaRef& body, const std::string& v) {
  std::set<std::string> need = free_vars(body);
  need.insert(v);
  std::set<std::string> have;
  for (const Term& t : alpha->args)
    if (t.is_var) have.insert(t.name);
  return std::includes(have.begin(), have.end(), need.begin(), need.end());
}

inline void check_guarded_rec(const FormulaRef& f, GuardCheck& out) {
  if (!f || !out.ok) return;
  switch (f->kind) {
    case Kind::Exists: {
      const FormulaRef& body = f->lhs;
      if (is_atomic(body)) {
        if (!guard_covers(body, body, f->qvar)) {
          out = {false, f, "guard does not mention the quantified variable"};
        }
        return;
      }
      auto cs = flatten_and(body);
      if (cs.size() < 2 || !is_atomic(cs[0])) {
        out = {false, f, "existential body must be an atom or a conjunction headed by an atomic guard"};
        return;
      }
      if (!guard_covers(cs[0], body, f->qvar)) {
        out = {false, f, "guard " + to_string(cs[0]) + " does not cover the free variables of the body"};
        return;
      }
      for (std::size_t i = 1; i < cs.size(); ++i) check_guarded_rec(cs[i], out);
      return;
    }
    case Kind::Forall: {
      const FormulaRef& body = f->lhs;
      if (body->kind != Kind::Implies || !is_atomic(body->lhs)) {
        out = {false, f, "universal body must be an implication with an atomic guard"};
        return;
      }
      if (!guard_covers(body->lhs, body, f->qvar)) {
        out = {false, f, "guard " + to_string(body->lhs) + " does not cover the free variables of the body"};
        return;
      }
      check_guarded_rec(body->rhs, out);
      return;
    }
    default:
      check_guarded_rec(f->lhs, out);
      check_guarded_rec(f->rhs, out);
      return;
  }
}

}  // namespace detail

inline GuardCheck check_guarded(const FormulaRef& f) {
  GuardCheck out;
  detail::check_guarded_rec(f, out);
  return out;
}

}  // namespace fo2e
