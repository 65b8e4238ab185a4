#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "fo2e/formula.hpp"
#include "fo2e/printer.hpp"
#include "fo2e/signature.hpp"

// Candidate formulas over a signature, one free variable x, produced smallest
// first. Every candidate is canonicalized (negation normal form, flattened
// and sorted connectives, constant folding) and deduplicated by printed form,
// so the stream is deterministic and free of trivial variants. The space is
// a bounded slice of the logic, not all of it.

namespace fo2e {

namespace detail {

inline FormulaRef nnf(const FormulaRef& f, bool positive);

inline FormulaRef canonical(const FormulaRef& f);

// sorted, flattened n-ary connective with units and duals folded away
inline FormulaRef assemble(std::vector<FormulaRef> parts, bool conjunction) {
  const Kind spine = conjunction ? Kind::And : Kind::Or;
  std::vector<FormulaRef> flat;
  while (!parts.empty()) {
    FormulaRef p = std::move(parts.back());
    parts.pop_back();
    if (p->kind == spine) {
      parts.push_back(p->lhs);
      parts.push_back(p->rhs);
    } else {
      flat.push_back(std::move(p));
    }
  }
  parts = std::move(flat);
  std::vector<std::pair<std::string, FormulaRef>> keyed;
  for (auto& p : parts) keyed.emplace_back(to_string(p), std::move(p));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<FormulaRef> out;
  for (auto& [key, p] : keyed) {
    if (p->kind == (conjunction ? Kind::True : Kind::False)) continue;
    if (p->kind == (conjunction ? Kind::False : Kind::True)) return conjunction ? bottom() : top();
    out.push_back(std::move(p));
  }
  // complementary pair: p together with ~p decides the whole connective
  for (const auto& p : out) {
    const std::string want = to_string(p->kind == Kind::Not ? p->lhs : neg(p));
    for (const auto& q : out)
      if (to_string(q) == want) return conjunction ? bottom() : top();
  }
  if (out.empty()) return conjunction ? top() : bottom();
  if (out.size() == 1) return out[0];
  return conjunction ? land_all(out) : lor_all(out);
}

inline FormulaRef collect_nnf(const FormulaRef& f, bool positive, Kind split) {
  // gathers an And/Or spine under negation in one pass
  if (f->kind == split) {
    std::vector<FormulaRef> parts;
    auto walk = [&](auto&& self, const FormulaRef& g) -> void {
      if (g->kind == split) {
        self(self, g->lhs);
        self(self, g->rhs);
      } else {
        parts.push_back(nnf(g, positive));
      }
    };
    walk(walk, f);
    const bool conj = (split == Kind::And) == positive;
    return assemble(std::move(parts), conj);
  }
  return nullptr;
}

inline FormulaRef nnf(const FormulaRef& f, bool positive) {
  switch (f->kind) {
    case Kind::True: return positive ? top() : bottom();
    case Kind::False: return positive ? bottom() : top();
    case Kind::Atom: return positive ? f : neg(f);
    case Kind::Equal:
      if (f->args[0] == f->args[1]) return positive ? top() : bottom();
      return positive ? f : neg(f);
    case Kind::Not: return nnf(f->lhs, !positive);
    case Kind::And:
    case Kind::Or: return collect_nnf(f, positive, f->kind);
    case Kind::Implies:
      // positive: ~lhs | rhs; negative: lhs & ~rhs
      return assemble({nnf(f->lhs, !positive), nnf(f->rhs, positive)}, !positive);
    case Kind::Forall:
    case Kind::Exists: {
      const bool ex = (f->kind == Kind::Exists) == positive;
      FormulaRef body = nnf(f->lhs, positive);
      if (body->kind == Kind::True || body->kind == Kind::False) return body;
      if (!free_vars(body).count(f->qvar)) return body;  // vacuous binder
      return ex ? exists(f->qvar, body) : forall(f->qvar, body);
    }
  }
  return f;
}

inline FormulaRef canonical(const FormulaRef& f) { return nnf(f, true); }

}  // namespace detail

using detail::canonical;

// pieces the enumerator combines: literals over x plus singly quantified
// binary probes
inline std::vector<FormulaRef> candidate_pieces(const Signature& rho) {
  const Term x = var("x"), y = var("y");
  std::vector<FormulaRef> out = {top(), bottom()};
  std::vector<FormulaRef> lits;
  for (const auto& u : rho.unary) lits.push_back(atom(u, x));
  for (const auto& r : rho.binary) lits.push_back(atom(r, x, x));
  for (const auto& c : rho.constants) lits.push_back(eq(x, cnst(c)));
  for (const auto& r : rho.binary)
    for (const auto& c : rho.constants) {
      lits.push_back(atom(r, x, cnst(c)));
      lits.push_back(atom(r, cnst(c), x));
    }
  out.insert(out.end(), lits.begin(), lits.end());
  // one quantifier over a guard-shaped binary atom, with a literal payload
  std::vector<FormulaRef> payloads = {top()};
  for (const auto& u : rho.unary) {
    payloads.push_back(atom(u, y));
    payloads.push_back(neg(atom(u, y)));
  }
  for (const auto& r : rho.binary) {
    payloads.push_back(atom(r, y, x));
    payloads.push_back(neg(atom(r, y, x)));
  }
  for (const auto& r : rho.binary)
    for (const auto& p : payloads) {
      out.push_back(exists("y", land(atom(r, x, y), p)));
      out.push_back(forall("y", implies(atom(r, x, y), p)));
    }
  return out;
}

inline std::vector<FormulaRef> enumerate_candidates(const Signature& rho, int max_size,
                                                    std::size_t max_count) {
  std::map<std::string, FormulaRef> seen;
  std::vector<std::vector<FormulaRef>> by_size(max_size + 1);
  auto offer = [&](const FormulaRef& f) {
    if (seen.size() >= max_count) return;
    const FormulaRef c = canonical(f);
    const int s = node_count(c);
    if (s > max_size) return;
    const std::string p = to_string(c);
    if (!seen.emplace(p, c).second) return;
    by_size[s].push_back(c);
  };
  for (const auto& p : candidate_pieces(rho)) offer(p);
  for (int s = 2; s <= max_size; ++s) {
    for (std::size_t i = 0; i < by_size[s - 1].size(); ++i) offer(neg(by_size[s - 1][i]));
    for (int s1 = 1; s1 + 2 <= s; ++s1) {
      const int s2 = s - 1 - s1;
      if (s2 < s1) break;
      for (std::size_t i = 0; i < by_size[s1].size(); ++i)
        for (std::size_t j = 0; j < by_size[s2].size(); ++j) {
          offer(land(by_size[s1][i], by_size[s2][j]));
          offer(lor(by_size[s1][i], by_size[s2][j]));
        }
    }
  }
  std::vector<FormulaRef> out;
  for (const auto& bucket : by_size)
    for (const auto& f : bucket) out.push_back(f);
  return out;
}

}  // namespace fo2e
