#pragma once

#include "terms.hpp"

namespace bracket {

// Expresses each vertical-axis-reflected generator as a composite of
// symmetries and its unreflected counterpart, per the crossing equations.
// Returns an empty Term for kinds that are already reflection-free.
inline Term unreflect_gen(BracketGenKind k, const std::vector<ObjectExpr>& a) {
  using K = BracketGenKind;
  auto br = [](std::initializer_list<ObjectExpr> parts) {
    return word({bracket(tensor(parts))});
  };
  auto d = [](const ObjectExpr& o) { return dual_object(o); };
  auto bsym = [](const ObjectExpr& l, const ObjectExpr& r) {
    return bracketed(sym(l, r));
  };
  switch (k) {
    case K::EntryDR:
      // [Y] X -> X [Y] -> [X Y] -> [Y X]
      return comp({sym(br({a[0]}), a[1]),
                   bgen(K::EntryDL, {a[1], a[0]}),
                   bsym(a[1], a[0])});
    case K::ExitDR:
      // [Y X] -> [X Y] -> X [Y] -> [Y] X
      return comp({bsym(a[0], a[1]),
                   bgen(K::ExitDL, {a[1], a[0]}),
                   sym(a[1], br({a[0]}))});
    case K::EntryUR: {
      // args (W, Z, Y, X): [W^ [Z] Y^ X^] -> [W^ [Z Y^] X^]
      const ObjectExpr &W = a[0], &Z = a[1], &Y = a[2], &X = a[3];
      return comp(
          {bracketed(tens(tens(id(d(W)), sym(br({Z}), d(Y))), id(d(X)))),
           bgen(K::EntryUL, {W, Y, Z, X}),
           bracketed(tens(tens(id(d(W)), bsym(d(Y), Z)), id(d(X))))});
    }
    case K::ExitUR: {
      // args (W, Z, Y, X): [W [Z Y^] X] -> [W [Z] Y^ X]
      const ObjectExpr &W = a[0], &Z = a[1], &Y = a[2], &X = a[3];
      return comp(
          {bracketed(tens(tens(id(W), bsym(Z, d(Y))), id(X))),
           bgen(K::ExitUL, {W, Y, Z, X}),
           bracketed(tens(tens(id(W), sym(d(Y), br({Z}))), id(X)))});
    }
    case K::CupCrossR: {
      // args (Y, X): [Y X^] X -> [Y]
      const ObjectExpr &Y = a[0], &X = a[1];
      return comp({sym(br({Y, d(X)}), X),
                   tens(id(X), bsym(Y, d(X))),
                   bgen(K::CupCrossL, {X, Y})});
    }
    case K::CapL: {
      // args (Z, Y, X): [Z X] -> [Z Y Y^ X]
      const ObjectExpr &Z = a[0], &Y = a[1], &X = a[2];
      return comp({bgen(K::CapR, {Z, Y, X}),
                   bracketed(tens(tens(id(Z), sym(d(Y), Y)), id(X)))});
    }
    case K::CupL: {
      // args (Z, Y, X): [Z Y^] [Y X] -> [Z X]
      const ObjectExpr &Z = a[0], &Y = a[1], &X = a[2];
      return comp({sym(br({Z, d(Y)}), br({Y, X})),
                   tens(bsym(Y, X), bsym(Z, d(Y))),
                   bgen(K::CupR, {X, Y, Z}),
                   bsym(X, Z)});
    }
    default:
      return {};
  }
}

// The canonical coevaluation and evaluation composites.
//   eta{Y;X} : X -> [Y^ Y X]    x |-> (y |-> (y, x))
//   eps{Y;X} : Y [Y^ X] -> X    (y, f) |-> f(y)
inline Term eta_composite(const ObjectExpr& Y, const ObjectExpr& X) {
  using K = BracketGenKind;
  Term cap = bgen(K::BubbleCap, {});
  Term first = X.is_unit() ? cap : tens(cap, id(X));
  return comp({first, bgen(K::EntryDR, {{}, X}), bgen(K::CapR, {{}, Y, X})});
}

inline Term eps_composite(const ObjectExpr& Y, const ObjectExpr& X) {
  using K = BracketGenKind;
  Term cup = bgen(K::BubbleCup, {});
  Term last = X.is_unit() ? cup : tens(id(X), cup);
  return comp({bgen(K::CupCrossL, {Y, X}), bgen(K::ExitDL, {X, {}}), last});
}

// Replaces every Eta/Eps atom by its defining composite (recursively).
inline Term expand_eta_eps(const Term& t) {
  switch (t->tag) {
    case TK::Comp:     return comp(expand_eta_eps(t->a), expand_eta_eps(t->b));
    case TK::Tensor:   return tens(expand_eta_eps(t->a), expand_eta_eps(t->b));
    case TK::Bracketed: return bracketed(expand_eta_eps(t->a));
    case TK::Dual:     return dual(expand_eta_eps(t->a));
    case TK::BracketGen:
      if (t->kind == BracketGenKind::Eta)
        return eta_composite(t->args[0], t->args[1]);
      if (t->kind == BracketGenKind::Eps)
        return eps_composite(t->args[0], t->args[1]);
      return t;
    default:
      return t;
  }
}

}  // namespace bracket
