#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fo2e/countermodel.hpp"
#include "fo2e/enumerate.hpp"
#include "fo2e/formula.hpp"
#include "fo2e/printer.hpp"
#include "fo2e/signature.hpp"

// Search for an interpolant: a formula over the given shared signature that
// follows from phi and entails psi. Two regimes:
//
//  - when phi and psi are quantifier-free, equality-free, single-variable
//    and the shared signature is unary-only, projection onto the shared
//    predicates decides existence outright (a negative answer transfers to
//    the full logic: any model can be adjusted outside the shared signature
//    without changing the candidate's value);
//  - otherwise candidates are enumerated smallest first and screened by
//    bounded countermodel search on both entailments, so "found" carries
//    bounded confidence only and "none" means none within the bounds.

namespace fo2e {

enum class InterpolantStatus { found_exact, found_bounded, none_exact, none_within_bounds };

inline const char* to_string(InterpolantStatus s) {
  switch (s) {
    case InterpolantStatus::found_exact: return "found (exact)";
    case InterpolantStatus::found_bounded: return "found (bounded-confidence)";
    case InterpolantStatus::none_exact: return "none (exact)";
    case InterpolantStatus::none_within_bounds: return "none_within_bounds";
  }
  return "?";
}

struct InterpolantOpts {
  int max_candidate_size = 9;
  std::size_t max_candidates = 4000;
  int countermodel_bound = 3;
  long long countermodel_budget = 2'000'000;
};

struct InterpolantResult {
  InterpolantStatus status = InterpolantStatus::none_within_bounds;
  FormulaRef interpolant;
  std::string detail;
  long long candidates_tried = 0;
};

namespace detail {

inline bool propositional(const FormulaRef& f) {
  if (!f) return true;
  switch (f->kind) {
    case Kind::Forall:
    case Kind::Exists:
    case Kind::Equal: return false;
    case Kind::Atom:
      return f->args.size() == 1 && f->args[0].is_var && f->args[0].name == "x";
    default: return propositional(f->lhs) && propositional(f->rhs);
  }
}

inline bool mask_eval(const FormulaRef& f, const std::map<std::string, int>& bit, uint32_t m) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return (m >> bit.at(f->pred)) & 1u;
    case Kind::Not: return !mask_eval(f->lhs, bit, m);
    case Kind::And: return mask_eval(f->lhs, bit, m) && mask_eval(f->rhs, bit, m);
    case Kind::Or: return mask_eval(f->lhs, bit, m) || mask_eval(f->rhs, bit, m);
    case Kind::Implies: return !mask_eval(f->lhs, bit, m) || mask_eval(f->rhs, bit, m);
    default: return false;
  }
}

}  // namespace detail

inline InterpolantResult interpolant_search(const Formula& phi, const Formula& psi,
                                            const Signature& rho,
                                            const InterpolantOpts& opts = {}) {
  InterpolantResult out;
  const bool exact_regime = detail::propositional(phi.root) && detail::propositional(psi.root) &&
                            rho.binary.empty() && rho.constants.empty();

  if (exact_regime) {
    Signature u = unite(signature_of(phi.root), signature_of(psi.root));
    u = unite(u, rho);
    std::map<std::string, int> bit;
    for (const auto& p : u.unary) bit.emplace(p, static_cast<int>(bit.size()));
    if (bit.size() <= 20) {
      const uint32_t total = 1u << bit.size();
      uint32_t shared_mask = 0;
      for (const auto& p : rho.unary) shared_mask |= 1u << bit.at(p);
      // reachable shared projections of the left formula
      std::vector<char> proj(total, 0);
      for (uint32_t m = 0; m < total; ++m)
        if (detail::mask_eval(phi.root, bit, m)) proj[m & shared_mask] = 1;
      for (uint32_t m = 0; m < total; ++m)
        if (proj[m & shared_mask] && !detail::mask_eval(psi.root, bit, m)) {
          std::string v;
          for (const auto& [p, b] : bit) v += p + "=" + ((m >> b) & 1u ? "1 " : "0 ");
          out.status = InterpolantStatus::none_exact;
          out.detail = "strongest shared consequence fails at valuation " + v;
          return out;
        }
      // an interpolant exists; prefer the smallest enumerated one
      for (const auto& c : enumerate_candidates(rho, opts.max_candidate_size,
                                                opts.max_candidates)) {
        ++out.candidates_tried;
        bool left = true, right = true;
        for (uint32_t m = 0; m < total && (left && right); ++m) {
          const bool cv = detail::mask_eval(c, bit, m);
          if (detail::mask_eval(phi.root, bit, m) && !cv) left = false;
          if (cv && !detail::mask_eval(psi.root, bit, m)) right = false;
        }
        if (left && right) {
          out.status = InterpolantStatus::found_exact;
          out.interpolant = c;
          out.detail = "verified by truth table over " + std::to_string(bit.size()) + " predicates";
          return out;
        }
      }
      // fall back to the projection itself in disjunctive normal form
      std::vector<FormulaRef> disjuncts;
      for (uint32_t m = 0; m < total; ++m) {
        if (((m & shared_mask) != m) || !proj[m]) continue;
        std::vector<FormulaRef> lits;
        for (const auto& p : rho.unary) {
          const FormulaRef a = atom(p, var("x"));
          lits.push_back((m >> bit.at(p)) & 1u ? a : neg(a));
        }
        disjuncts.push_back(land_all(lits));
      }
      out.status = InterpolantStatus::found_exact;
      out.interpolant = canonical(lor_all(disjuncts));
      out.detail = "projection of the left formula onto the shared predicates";
      return out;
    }
  }

  // bounded regime
  auto fv_ok = [&](const FormulaRef& c) {
    const auto fv = free_vars(c);
    const auto fp = free_vars(phi.root);
    const auto fq = free_vars(psi.root);
    for (const auto& v : fv)
      if (!fp.count(v) && !fq.count(v)) return false;
    return true;
  };
  bool all_complete = true;
  const Mode mode = phi.mode == Mode::gf2 || psi.mode == Mode::gf2 ? Mode::gf2 : Mode::fo2;
  for (const auto& c : enumerate_candidates(rho, opts.max_candidate_size, opts.max_candidates)) {
    if (!fv_ok(c)) continue;
    ++out.candidates_tried;
    const Formula left{land(phi.root, neg(c)), mode};
    const auto lr = countermodel_search(left, opts.countermodel_bound, opts.countermodel_budget);
    all_complete = all_complete && lr.complete;
    if (lr.found) continue;
    const Formula right{land(c, neg(psi.root)), mode};
    const auto rr = countermodel_search(right, opts.countermodel_bound, opts.countermodel_budget);
    all_complete = all_complete && rr.complete;
    if (rr.found) continue;
    out.status = InterpolantStatus::found_bounded;
    out.interpolant = c;
    out.detail = "no countermodel up to size " + std::to_string(opts.countermodel_bound) +
                 (lr.complete && rr.complete ? "" : " (search budget hit)");
    return out;
  }
  out.status = InterpolantStatus::none_within_bounds;
  out.detail = "tried " + std::to_string(out.candidates_tried) + " candidates up to size " +
               std::to_string(opts.max_candidate_size) +
               (all_complete ? "" : "; some countermodel searches hit their budget");
  return out;
}

}  // namespace fo2e
