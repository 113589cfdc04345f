#pragma once

#include <string>
#include <vector>

#include "terms.hpp"

namespace bracket {
namespace detail {

inline bool kind_from_name(const std::string& name, BracketGenKind& out) {
  using K = BracketGenKind;
  static const std::pair<const char*, K> table[] = {
      {"bubble_cup", K::BubbleCup}, {"bubble_cap", K::BubbleCap},
      {"entry_dl", K::EntryDL},     {"exit_dl", K::ExitDL},
      {"entry_ul", K::EntryUL},     {"exit_ul", K::ExitUL},
      {"cup_cross_l", K::CupCrossL},{"cap_r", K::CapR},
      {"cup_r", K::CupR},           {"entry_dr", K::EntryDR},
      {"exit_dr", K::ExitDR},       {"entry_ur", K::EntryUR},
      {"exit_ur", K::ExitUR},       {"cup_cross_r", K::CupCrossR},
      {"cap_l", K::CapL},           {"cup_l", K::CupL},
      {"eta", K::Eta},              {"eps", K::Eps},
  };
  for (auto& [n, k] : table)
    if (name == n) { out = k; return true; }
  return false;
}

struct TermParser {
  ObjLexer lx;
  explicit TermParser(const std::string& s) : lx(s) {}

  void expect(char c) {
    if (lx.peek() != c)
      throw ParseError(std::string("expected '") + c + "'", lx.line, lx.col);
    lx.advance();
  }

  // raw object text up to one of the stop characters at this level
  ObjectExpr brace_object(const std::string& stops) {
    std::string raw;
    int depth = 0;
    while (lx.pos < lx.src.size()) {
      char c = lx.src[lx.pos];
      if (depth == 0 && stops.find(c) != std::string::npos) break;
      if (c == '[' || c == '(') ++depth;
      if (c == ']' || c == ')') --depth;
      raw += c;
      lx.advance();
    }
    return parse_object(raw);
  }

  std::vector<ObjectExpr> brace_args() {
    expect('{');
    std::vector<ObjectExpr> args;
    for (;;) {
      args.push_back(brace_object(";}"));
      if (lx.peek() == ';') { lx.advance(); continue; }
      break;
    }
    expect('}');
    return args;
  }

  Term atom() {
    char c = lx.peek();
    if (c == '(') {
      lx.advance();
      Term t = expr();
      expect(')');
      return t;
    }
    if (c == '[') {
      lx.advance();
      Term t = expr();
      expect(']');
      return bracketed(t);
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
      throw ParseError("expected a term", lx.line, lx.col);
    std::string name = parse_ident(lx);
    if (name == "dual") {
      expect('(');
      Term t = expr();
      expect(')');
      return dual(t);
    }
    if (name == "id") {
      expect('{');
      ObjectExpr o = brace_object("}");
      expect('}');
      return id(o);
    }
    if (name == "sym") {
      expect('{');
      ObjectExpr l = brace_object(",");
      expect(',');
      ObjectExpr r = brace_object("}");
      expect('}');
      return sym(l, r);
    }
    if (name == "copy") {
      expect('{');
      ObjectExpr o = brace_object("}");
      expect('}');
      return copy_t(o);
    }
    if (name == "discard") {
      expect('{');
      ObjectExpr o = brace_object("}");
      expect('}');
      return discard_t(o);
    }
    BracketGenKind k;
    if (kind_from_name(name, k)) {
      std::vector<ObjectExpr> args;
      if (lx.peek() == '{') args = brace_args();
      return bgen(k, std::move(args));
    }
    return gen(name);
  }

  Term tensor_expr() {
    Term t = atom();
    while (lx.peek() == '*') {
      lx.advance();
      t = tens(t, atom());
    }
    return t;
  }

  Term expr() {
    Term t = tensor_expr();
    while (lx.peek() == ';') {
      lx.advance();
      t = comp(t, tensor_expr());
    }
    return t;
  }
};

}  // namespace detail

inline Term parse_term(const std::string& text) {
  detail::TermParser p(text);
  Term t = p.expr();
  if (!p.lx.eof())
    throw ParseError("trailing input", p.lx.line, p.lx.col);
  return t;
}

}  // namespace bracket
