#pragma once

#include <algorithm>
#include <iterator>
#include <set>
#include <string>

#include "fo2e/formula.hpp"

// Signature of a formula: non-logical symbols only. E1, E2 and equality are
// part of the logic itself and never appear here, which is what makes the
// shared signature of the generated formula pairs come out free of them.

namespace fo2e {

struct Signature {
  std::set<std::string> unary, binary, constants;

  friend bool operator==(const Signature&, const Signature&) = default;

  bool subset_of(const Signature& o) const {
    auto inc = [](const std::set<std::string>& a, const std::set<std::string>& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    return inc(unary, o.unary) && inc(binary, o.binary) && inc(constants, o.constants);
  }

  bool empty() const { return unary.empty() && binary.empty() && constants.empty(); }
};

inline void collect_signature(const FormulaRef& f, Signature& out) {
  if (!f) return;
  if (f->kind == Kind::Atom) {
    if (f->pred != "E1" && f->pred != "E2")
      (f->args.size() == 1 ? out.unary : out.binary).insert(f->pred);
  }
  for (const Term& t : f->args)
    if (!t.is_var) out.constants.insert(t.name);
  collect_signature(f->lhs, out);
  collect_signature(f->rhs, out);
}

inline Signature signature_of(const FormulaRef& f) {
  Signature s;
  collect_signature(f, s);
  return s;
}

inline Signature intersect(const Signature& a, const Signature& b) {
  auto meet = [](const std::set<std::string>& l, const std::set<std::string>& r) {
    std::set<std::string> out;
    std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.begin()));
    return out;
  };
  return Signature{meet(a.unary, b.unary), meet(a.binary, b.binary), meet(a.constants, b.constants)};
}

inline Signature unite(const Signature& a, const Signature& b) {
  Signature out = a;
  out.unary.insert(b.unary.begin(), b.unary.end());
  out.binary.insert(b.binary.begin(), b.binary.end());
  out.constants.insert(b.constants.begin(), b.constants.end());
  return out;
}

}  // namespace fo2e
