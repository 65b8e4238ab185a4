#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fo2e/formula.hpp"

// Recursive-descent parser. Precedence, loosest first: -> (right assoc),
// |, &, then unary (~, quantifiers). A quantifier takes the maximal scope to
// its right, so "forall x . P(x) & Q(x)" binds the whole conjunction.
// "forall x,y . f" is sugar for nested quantifiers.
//
// Identifiers other than x and y in term position denote constants, which
// only gf2 mode admits. E1 and E2 are reserved binary predicates. Predicate
// arities are inferred from first use and must stay consistent.

namespace fo2e {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

namespace detail {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Eq, Amp, Pipe, Tilde, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        tok_.text += src_[pos_];
        bump();
      }
      tok_.kind = Tok::Ident;
      return;
    }
    if (c == '-') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        bump();
        bump();
        tok_.kind = Tok::Arrow;
        return;
      }
      throw ParseError(line_, col_, "expected '->' after '-'");
    }
    bump();
    switch (c) {
      case '(': tok_.kind = Tok::LParen; return;
      case ')': tok_.kind = Tok::RParen; return;
      case ',': tok_.kind = Tok::Comma; return;
      case '.': tok_.kind = Tok::Dot; return;
      case '=': tok_.kind = Tok::Eq; return;
      case '&': tok_.kind = Tok::Amp; return;
      case '|': tok_.kind = Tok::Pipe; return;
      case '~': tok_.kind = Tok::Tilde; return;
      default: throw ParseError(tok_.line, tok_.col, std::string("unexpected character '") + c + "'");
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

inline bool is_reserved(const std::string& s) {
  return s == "true" || s == "false" || s == "forall" || s == "exists";
}

class Parser {
 public:
  Parser(const std::string& src, Mode mode) : lex_(src), mode_(mode) {
    arity_["E1"] = 2;
    arity_["E2"] = 2;
  }

  FormulaRef parse() {
    FormulaRef f = formula();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError(t.line, t.col, "unexpected trailing input");
    return f;
  }

 private:
  FormulaRef formula() {
    FormulaRef l = disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.next();
      return implies(std::move(l), formula());
    }
    return l;
  }

  FormulaRef disj() {
    FormulaRef l = conj();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      l = lor(std::move(l), conj());
    }
    return l;
  }

  FormulaRef conj() {
    FormulaRef l = unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.next();
      l = land(std::move(l), unary());
    }
    return l;
  }

  FormulaRef unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Tilde) {
      lex_.next();
      return neg(unary());
    }
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      const bool uni = t.text == "forall";
      lex_.next();
      std::vector<std::string> vars;
      for (;;) {
        Token v = expect(Tok::Ident, "variable name");
        if (is_reserved(v.text)) throw ParseError(v.line, v.col, "'" + v.text + "' is reserved");
        if (v.text != "x" && v.text != "y")
          throw ParseError(v.line, v.col, "only variables x and y may be quantified, got '" + v.text + "'");
        vars.push_back(v.text);
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.next();
      }
      expect(Tok::Dot, "'.'");
      FormulaRef body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = uni ? forall(*it, body) : exists(*it, body);
      return body;
    }
    return primary();
  }

  FormulaRef primary() {
    Token t = lex_.next();
    if (t.kind == Tok::LParen) {
      FormulaRef f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) throw ParseError(t.line, t.col, "expected a formula");
    if (t.text == "true") return top();
    if (t.text == "false") return bottom();
    if (t.text == "forall" || t.text == "exists")
      throw ParseError(t.line, t.col, "'" + t.text + "' is reserved");
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      std::vector<Term> args;
      args.push_back(term());
      if (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        args.push_back(term());
      }
      if (lex_.peek().kind == Tok::Comma)
        throw ParseError(lex_.peek().line, lex_.peek().col, "atoms take at most two arguments");
      expect(Tok::RParen, "')'");
      note_predicate(t, static_cast<int>(args.size()));
      return atom(t.text, std::move(args));
    }
    if (lex_.peek().kind == Tok::Eq) {
      lex_.next();
      Term l = make_term(t);
      Term r = term();
      return eq(std::move(l), std::move(r));
    }
    throw ParseError(t.line, t.col, "expected '(' or '=' after identifier '" + t.text + "'");
  }

  Term term() {
    Token t = expect(Tok::Ident, "a term");
    return make_term(t);
  }

  Term make_term(const Token& t) {
    if (is_reserved(t.text)) throw ParseError(t.line, t.col, "'" + t.text + "' is reserved");
    if (t.text == "x" || t.text == "y") return var(t.text);
    if (mode_ == Mode::fo2)
      throw ParseError(t.line, t.col,
                       "constant '" + t.text + "' not allowed in fo2 mode (variables are x and y)");
    if (arity_.count(t.text))
      throw ParseError(t.line, t.col, "'" + t.text + "' is a predicate, not a constant");
    constants_.insert(t.text);
    return cnst(t.text);
  }

  void note_predicate(const Token& t, int arity) {
    if (constants_.count(t.text))
      throw ParseError(t.line, t.col, "'" + t.text + "' is a constant, not a predicate");
    auto [it, fresh] = arity_.emplace(t.text, arity);
    if (!fresh && it->second != arity)
      throw ParseError(t.line, t.col, "predicate '" + t.text + "' used with arity " + std::to_string(arity) +
                                          " but earlier with arity " + std::to_string(it->second));
  }

  Token expect(Tok kind, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != kind) throw ParseError(t.line, t.col, "expected " + what);
    return t;
  }

  Lexer lex_;
  Mode mode_;
  std::map<std::string, int> arity_;
  std::set<std::string> constants_;
};

}  // namespace detail

inline Formula parse_formula(const std::string& src, Mode mode) {
  detail::Parser p(src, mode);
  return Formula{p.parse(), mode};
}

}  // namespace fo2e
