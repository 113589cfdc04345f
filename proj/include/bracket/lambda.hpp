// Simply typed lambda calculus frontend: typing, an encoding into the
// cartesian closed calculus, and beta reduction as a syntactic oracle.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bracket/decompose.hpp"
#include "bracket/signature.hpp"
#include "bracket/terms.hpp"

namespace bracket {

// ---------------------------------------------------------------------------
// Types and terms

struct LTypeNode;
using LType = std::shared_ptr<const LTypeNode>;

struct LTypeNode {
  bool base = true;
  std::string sort;  // base
  LType a, b;        // arrow
};

inline LType lbase(std::string s) {
  auto n = std::make_shared<LTypeNode>();
  n->base = true;
  n->sort = std::move(s);
  return n;
}
inline LType larrow(LType x, LType y) {
  auto n = std::make_shared<LTypeNode>();
  n->base = false;
  n->a = std::move(x);
  n->b = std::move(y);
  return n;
}
inline bool ltype_eq(const LType& x, const LType& y) {
  if (x->base != y->base) return false;
  if (x->base) return x->sort == y->sort;
  return ltype_eq(x->a, y->a) && ltype_eq(x->b, y->b);
}
inline std::string print_ltype(const LType& t) {
  if (t->base) return t->sort;
  std::string l = t->a->base ? print_ltype(t->a) : "(" + print_ltype(t->a) + ")";
  return l + " -> " + print_ltype(t->b);
}

enum class LK { Var, Lam, App };

struct LTermNode;
using LTerm = std::shared_ptr<const LTermNode>;

struct LTermNode {
  LK tag;
  std::string name;  // Var / Lam binder
  LType ann;         // Lam binder annotation
  LTerm a, b;        // Lam body; App function/argument
};

inline LTerm lvar(std::string x) {
  auto n = std::make_shared<LTermNode>();
  n->tag = LK::Var;
  n->name = std::move(x);
  return n;
}
inline LTerm llam(std::string x, LType t, LTerm body) {
  auto n = std::make_shared<LTermNode>();
  n->tag = LK::Lam;
  n->name = std::move(x);
  n->ann = std::move(t);
  n->a = std::move(body);
  return n;
}
inline LTerm lapp(LTerm f, LTerm u) {
  auto n = std::make_shared<LTermNode>();
  n->tag = LK::App;
  n->a = std::move(f);
  n->b = std::move(u);
  return n;
}

inline std::string print_lterm(const LTerm& t) {
  switch (t->tag) {
    case LK::Var:
      return t->name;
    case LK::Lam:
      return "\\" + t->name + ":" + print_ltype(t->ann) + ". " +
             print_lterm(t->a);
    case LK::App: {
      std::string f = t->a->tag == LK::Lam ? "(" + print_lterm(t->a) + ")"
                                           : print_lterm(t->a);
      std::string u = t->b->tag == LK::Var ? print_lterm(t->b)
                                           : "(" + print_lterm(t->b) + ")";
      return f + " " + u;
    }
  }
  return "?";
}

struct Judgement {
  std::vector<std::pair<std::string, LType>> ctx;
  LTerm term;
  LType type;
};

inline std::string print_judgement(const Judgement& j) {
  std::string s = "ctx ";
  for (std::size_t i = 0; i < j.ctx.size(); ++i) {
    if (i) s += ", ";
    s += j.ctx[i].first + ":" + print_ltype(j.ctx[i].second);
  }
  if (!j.ctx.empty()) s += " ";
  s += "|- " + print_lterm(j.term) + " : " + print_ltype(j.type);
  return s;
}

// ---------------------------------------------------------------------------
// Typing: exactly the variable / abstraction / application rules

inline LType typecheck_lambda(
    const Signature& sig,
    const std::vector<std::pair<std::string, LType>>& ctx, const LTerm& t) {
  auto check_sorts = [&](auto&& self, const LType& ty) -> void {
    if (ty->base) {
      if (!sig.has_sort(ty->sort))
        throw TypeError("UnknownSort", "'" + ty->sort + "'");
      return;
    }
    self(self, ty->a);
    self(self, ty->b);
  };
  std::set<std::string> seen;
  for (const auto& [x, ty] : ctx) {
    if (!seen.insert(x).second)
      throw TypeError("ShadowedName", "'" + x + "' bound twice in context");
    check_sorts(check_sorts, ty);
  }
  switch (t->tag) {
    case LK::Var: {
      for (const auto& [x, ty] : ctx)
        if (x == t->name) return ty;
      throw TypeError("UnboundVariable", "'" + t->name + "'");
    }
    case LK::Lam: {
      check_sorts(check_sorts, t->ann);
      auto ext = ctx;
      ext.emplace_back(t->name, t->ann);
      LType body = typecheck_lambda(sig, ext, t->a);
      return larrow(t->ann, body);
    }
    case LK::App: {
      LType fn = typecheck_lambda(sig, ctx, t->a);
      LType arg = typecheck_lambda(sig, ctx, t->b);
      if (fn->base || !ltype_eq(fn->a, arg))
        throw TypeError("TypeMismatch",
                        "cannot apply " + print_ltype(fn) + " to " +
                            print_ltype(arg));
      return fn->b;
    }
  }
  throw TypeError("TypeMismatch", "malformed term");
}

inline LType typecheck_lambda(const Signature& sig, const Judgement& j) {
  LType ty = typecheck_lambda(sig, j.ctx, j.term);
  if (!ltype_eq(ty, j.type))
    throw TypeError("TypeMismatch", "judgement claims " + print_ltype(j.type) +
                                        " but term has " + print_ltype(ty));
  return ty;
}

// ---------------------------------------------------------------------------
// Encoding: arrows become brackets, contexts become tensors

inline ObjectExpr ltype_object(const LType& t) {
  if (t->base) return word({atom(t->sort)});
  ObjectExpr inner = tensor(dual_object(ltype_object(t->a)),
                            ltype_object(t->b));
  return word({bracket(std::move(inner))});
}

inline ObjectExpr context_object(
    const std::vector<std::pair<std::string, LType>>& ctx) {
  ObjectExpr o;
  for (const auto& [x, ty] : ctx) o = tensor(o, ltype_object(ty));
  return o;
}

namespace detail {

inline Term encode_rec(const Signature& sig,
                       const std::vector<std::pair<std::string, LType>>& ctx,
                       const LTerm& t) {
  switch (t->tag) {
    case LK::Var: {
      // keep the named wire, discard every other context entry
      Term out;
      bool found = false;
      for (const auto& [x, ty] : ctx) {
        ObjectExpr o = ltype_object(ty);
        Term leg = x == t->name ? id(o) : discard_t(o);
        if (x == t->name) found = true;
        out = out ? tens(out, leg) : leg;
      }
      if (!found) throw TypeError("UnboundVariable", "'" + t->name + "'");
      return out;
    }
    case LK::Lam: {
      auto ext = ctx;
      ext.emplace_back(t->name, t->ann);
      Term body = encode_rec(sig, ext, t->a);
      ObjectExpr G = context_object(ctx);
      ObjectExpr X = ltype_object(t->ann);
      // bend the bound wire: curry over X after bringing it to the left
      Term f = G.is_unit() ? body : comp(sym(X, G), body);
      return curry(f, X, G);
    }
    case LK::App: {
      LType fn = typecheck_lambda(sig, ctx, t->a);
      Term ev = encode_rec(sig, ctx, t->a);
      Term eu = encode_rec(sig, ctx, t->b);
      ObjectExpr X = ltype_object(fn->a), Y = ltype_object(fn->b);
      ObjectExpr G = context_object(ctx);
      Term pair = tens(eu, ev);
      Term applied = comp(std::move(pair), eval_(X, Y));
      if (G.is_unit()) return applied;
      return comp(copy_t(G), std::move(applied));
    }
  }
  throw TypeError("TypeMismatch", "malformed term");
}

}  // namespace detail

inline Term encode(const Signature& sig, const Judgement& j) {
  if (!sig.cartesian)
    throw TypeError("NonCartesianSignature",
                    "lambda encoding needs copy and discard");
  typecheck_lambda(sig, j);
  return detail::encode_rec(sig, j.ctx, j.term);
}

// ---------------------------------------------------------------------------
// Beta reduction (capture-avoiding substitution)

namespace detail {

inline void free_vars(const LTerm& t, std::set<std::string>& out) {
  switch (t->tag) {
    case LK::Var:
      out.insert(t->name);
      return;
    case LK::Lam: {
      std::set<std::string> inner;
      free_vars(t->a, inner);
      inner.erase(t->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case LK::App:
      free_vars(t->a, out);
      free_vars(t->b, out);
      return;
  }
}

inline LTerm lsubst(const LTerm& t, const std::string& x, const LTerm& v) {
  switch (t->tag) {
    case LK::Var:
      return t->name == x ? v : t;
    case LK::App:
      return lapp(lsubst(t->a, x, v), lsubst(t->b, x, v));
    case LK::Lam: {
      if (t->name == x) return t;
      std::set<std::string> fv;
      free_vars(v, fv);
      if (!fv.count(t->name))
        return llam(t->name, t->ann, lsubst(t->a, x, v));
      std::set<std::string> avoid = fv;
      free_vars(t->a, avoid);
      std::string fresh = t->name;
      do fresh += "'"; while (avoid.count(fresh));
      LTerm renamed = lsubst(t->a, t->name, lvar(fresh));
      return llam(fresh, t->ann, lsubst(renamed, x, v));
    }
  }
  return t;
}

}  // namespace detail

// position: a string of digits addressing subterms; App: '0' function,
// '1' argument; Lam: '0' body; "" is the root
inline LTerm beta_reduce_at(const LTerm& t, const std::string& pos,
                            std::size_t i = 0) {
  if (i == pos.size()) {
    if (t->tag != LK::App || t->a->tag != LK::Lam)
      throw TypeError("NotARedex", "no beta redex at the given position");
    return detail::lsubst(t->a->a, t->a->name, t->b);
  }
  char c = pos[i];
  switch (t->tag) {
    case LK::Lam:
      if (c == '0') return llam(t->name, t->ann, beta_reduce_at(t->a, pos, i + 1));
      break;
    case LK::App:
      if (c == '0') return lapp(beta_reduce_at(t->a, pos, i + 1), t->b);
      if (c == '1') return lapp(t->a, beta_reduce_at(t->b, pos, i + 1));
      break;
    default:
      break;
  }
  throw TypeError("NotARedex", "position leaves the term");
}

inline Judgement beta_oracle(const Judgement& j, const std::string& pos) {
  Judgement out = j;
  out.term = beta_reduce_at(j.term, pos);
  return out;
}

// first redex position in leftmost-outermost order, if any
inline bool find_redex(const LTerm& t, std::string& pos) {
  if (t->tag == LK::App && t->a->tag == LK::Lam) return true;
  switch (t->tag) {
    case LK::Lam: {
      pos += '0';
      if (find_redex(t->a, pos)) return true;
      pos.pop_back();
      return false;
    }
    case LK::App: {
      pos += '0';
      if (find_redex(t->a, pos)) return true;
      pos.back() = '1';
      if (find_redex(t->b, pos)) return true;
      pos.pop_back();
      return false;
    }
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Judgement parser: `ctx x:A, f:A->B |- f x : B`

namespace detail {

struct LLexer {
  std::string s;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s.compare(i, tok.size(), tok) == 0) {
      i += tok.size();
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool at(const std::string& tok) {
    skip();
    return s.compare(i, tok.size(), tok) == 0;
  }
  std::string ident() {
    skip();
    std::size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
            s[j] == '\''))
      ++j;
    if (j == i) throw TypeError("ParseError", "identifier expected at " +
                                                  std::to_string(i));
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }
};

inline LType parse_ltype(LLexer& lx);

inline LType parse_ltype_atom(LLexer& lx) {
  if (lx.eat("(")) {
    LType t = parse_ltype(lx);
    if (!lx.eat(")")) throw TypeError("ParseError", "')' expected");
    return t;
  }
  return lbase(lx.ident());
}

inline LType parse_ltype(LLexer& lx) {
  LType l = parse_ltype_atom(lx);
  if (lx.eat("->")) return larrow(std::move(l), parse_ltype(lx));
  return l;
}

inline LTerm parse_lterm(LLexer& lx);

inline LTerm parse_lterm_atom(LLexer& lx) {
  if (lx.eat("\\")) {
    std::string x = lx.ident();
    if (!lx.eat(":")) throw TypeError("ParseError", "binder annotation expected");
    LType t = parse_ltype(lx);
    if (!lx.eat(".")) throw TypeError("ParseError", "'.' expected after binder");
    return llam(std::move(x), std::move(t), parse_lterm(lx));
  }
  if (lx.eat("(")) {
    LTerm t = parse_lterm(lx);
    if (!lx.eat(")")) throw TypeError("ParseError", "')' expected");
    return t;
  }
  return lvar(lx.ident());
}

inline LTerm parse_lterm(LLexer& lx) {
  LTerm t = parse_lterm_atom(lx);
  for (;;) {
    char c = lx.peek();
    if (c == '\0' || c == ')' || c == ':') break;
    t = lapp(std::move(t), parse_lterm_atom(lx));
  }
  return t;
}

}  // namespace detail

inline Judgement parse_judgement(const std::string& line) {
  detail::LLexer lx{line};
  Judgement j;
  lx.eat("ctx");
  if (!lx.at("|-")) {
    for (;;) {
      std::string x = lx.ident();
      if (!lx.eat(":")) throw TypeError("ParseError", "':' expected in context");
      j.ctx.emplace_back(std::move(x), detail::parse_ltype(lx));
      if (lx.eat(",")) continue;
      break;
    }
  }
  if (!lx.eat("|-")) throw TypeError("ParseError", "'|-' expected");
  j.term = detail::parse_lterm(lx);
  if (!lx.eat(":")) throw TypeError("ParseError", "':' expected before type");
  j.type = detail::parse_ltype(lx);
  lx.skip();
  if (lx.i != lx.s.size())
    throw TypeError("ParseError", "trailing input after judgement");
  return j;
}

// ---------------------------------------------------------------------------
// The displayed beta chain: a function variable applied through a redex

struct BetaChain {
  Signature sig;
  Judgement redex, reduct;
  Term lhs, rhs;  // encodings of the two judgements
};

inline BetaChain paper_beta_chain() {
  BetaChain bc;
  bc.sig = parse_signature("cartesian; sorts A B;");
  bc.redex = parse_judgement("ctx f:A->B, y:A |- (\\x:A. f x) y : B");
  bc.reduct = parse_judgement("ctx f:A->B, y:A |- f y : B");
  bc.lhs = encode(bc.sig, bc.redex);
  bc.rhs = encode(bc.sig, bc.reduct);
  return bc;
}

}  // namespace bracket
