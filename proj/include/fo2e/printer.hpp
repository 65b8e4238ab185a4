#pragma once

#include <string>

#include "fo2e/formula.hpp"

// Canonical text form. Binary connectives are always parenthesized, and a
// quantified formula is parenthesized wherever its maximal-scope body could
// otherwise swallow a following connective, so output re-parses to a
// structurally identical AST.

namespace fo2e {

inline void print_term(const Term& t, std::string& out) { out += t.name; }

inline void print_formula(const FormulaRef& f, std::string& out);

// position where an unparenthesized quantifier body would overrun its scope
inline void print_operand(const FormulaRef& f, std::string& out) {
  const bool wrap = f->kind == Kind::Forall || f->kind == Kind::Exists;
  if (wrap) out += '(';
  print_formula(f, out);
  if (wrap) out += ')';
}

inline void print_formula(const FormulaRef& f, std::string& out) {
  switch (f->kind) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Atom:
      out += f->pred;
      out += '(';
      print_term(f->args[0], out);
      if (f->args.size() == 2) {
        out += ',';
        print_term(f->args[1], out);
      }
      out += ')';
      return;
    case Kind::Equal:
      print_term(f->args[0], out);
      out += '=';
      print_term(f->args[1], out);
      return;
    case Kind::Not:
      out += '~';
      print_operand(f->lhs, out);
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies: {
      out += '(';
      print_operand(f->lhs, out);
      out += f->kind == Kind::And ? " & " : f->kind == Kind::Or ? " | " : " -> ";
      print_formula(f->rhs, out);
      out += ')';
      return;
    }
    case Kind::Forall:
    case Kind::Exists:
      out += f->kind == Kind::Forall ? "forall " : "exists ";
      out += f->qvar;
      out += " . ";
      print_formula(f->lhs, out);
      return;
  }
}

inline std::string to_string(const FormulaRef& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

}  // namespace fo2e
