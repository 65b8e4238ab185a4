#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fo2e/formula.hpp"
#include "fo2e/signature.hpp"
#include "fo2e/structure.hpp"

// Model checking on finite structures. Results are memoized per
// (subformula node, x binding, y binding), so shared subtrees of a large
// formula are evaluated once per binding no matter how often they occur.

namespace fo2e {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Evaluator {
 public:
  explicit Evaluator(const Structure& s) : s_(s) {}

  // xi/yi are element indices, -1 = unbound.
  bool eval(const FormulaRef& f, int xi = -1, int yi = -1) { return eval_node(f.get(), xi, yi); }

 private:
  bool eval_node(const Node* f, int xi, int yi) {
    auto& table = memo_[f];
    const int stride = s_.n() + 1;
    if (table.empty()) table.assign(static_cast<std::size_t>(stride) * stride, -1);
    auto& slot = table[static_cast<std::size_t>(xi + 1) * stride + (yi + 1)];
    if (slot >= 0) return slot != 0;
    const bool v = compute(f, xi, yi);
    slot = v ? 1 : 0;
    return v;
  }

  bool compute(const Node* f, int xi, int yi) {
    switch (f->kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: {
        const int a = term_index(f->args[0], xi, yi);
        if (f->args.size() == 1) return s_.un(f->pred, a);
        return s_.bin(f->pred, a, term_index(f->args[1], xi, yi));
      }
      case Kind::Equal:
        return term_index(f->args[0], xi, yi) == term_index(f->args[1], xi, yi);
      case Kind::Not: return !eval_node(f->lhs.get(), xi, yi);
      case Kind::And: return eval_node(f->lhs.get(), xi, yi) && eval_node(f->rhs.get(), xi, yi);
      case Kind::Or: return eval_node(f->lhs.get(), xi, yi) || eval_node(f->rhs.get(), xi, yi);
      case Kind::Implies: return !eval_node(f->lhs.get(), xi, yi) || eval_node(f->rhs.get(), xi, yi);
      case Kind::Forall:
      case Kind::Exists: {
        const bool is_x = f->qvar == "x";
        for (int e = 0; e < s_.n(); ++e) {
          const bool v = eval_node(f->lhs.get(), is_x ? e : xi, is_x ? yi : e);
          if (f->kind == Kind::Exists && v) return true;
          if (f->kind == Kind::Forall && !v) return false;
        }
        return f->kind == Kind::Forall;
      }
    }
    return false;  // unreachable
  }

  int term_index(const Term& t, int xi, int yi) const {
    if (t.is_var) {
      const int i = t.name == "x" ? xi : yi;
      if (i < 0) throw EvalError("free variable '" + t.name + "' has no assigned element");
      return i;
    }
    auto it = s_.constants.find(t.name);
    if (it == s_.constants.end()) throw EvalError("constant '" + t.name + "' is not interpreted");
    return it->second;
  }

  const Structure& s_;
  std::unordered_map<const Node*, std::vector<signed char>> memo_;
};

// `point` assigns elements to the free variables in sorted order (x before y).
inline bool evaluate(const Structure& s, const FormulaRef& f, const std::vector<int>& point = {}) {
  const auto fv = free_vars(f);
  if (fv.size() != point.size())
    throw EvalError("formula has " + std::to_string(fv.size()) + " free variable(s) but " +
                    std::to_string(point.size()) + " element(s) were given");
  for (int i : point)
    if (i < 0 || i >= s.n()) throw EvalError("point index out of range");
  const Signature sig = signature_of(f);
  for (const auto& c : sig.constants)
    if (!s.constants.count(c)) throw EvalError("constant '" + c + "' is not interpreted");
  int xi = -1, yi = -1;
  int k = 0;
  for (const auto& v : fv) (v == "x" ? xi : yi) = point[k++];
  Evaluator ev(s);
  return ev.eval(f, xi, yi);
}

}  // namespace fo2e
