#pragma once

#include <vector>

#include "terms.hpp"

namespace bracket {

// A term together with a flag saying whether it lies in the subcategory
// generated by coevaluation/evaluation, identities, symmetries and
// signature symbols.
struct EvalCoevalForm {
  Term term;
  bool certificate = false;
};

inline bool eval_coeval_certificate(const Term& t) {
  switch (t->tag) {
    case TK::Id:
    case TK::Sym:
    case TK::Gen:
      return true;
    case TK::Comp:
    case TK::Tensor:
      return eval_coeval_certificate(t->a) && eval_coeval_certificate(t->b);
    case TK::Bracketed:
      return eval_coeval_certificate(t->a);
    case TK::BracketGen:
      return t->kind == BracketGenKind::Eta || t->kind == BracketGenKind::Eps;
    default:
      return false;
  }
}

namespace detail {

inline ObjectExpr bw(const ObjectExpr& o) { return word({bracket(o)}); }

}  // namespace detail

// Rewrites a normalised bracket generator as a composite of eta/eps
// instances, identities and symmetries, recursively expanding the
// embedded generators so the result passes the certificate scan.
inline Term decompose_generator_term(BracketGenKind k,
                                     const std::vector<ObjectExpr>& a) {
  using K = BracketGenKind;
  using detail::bw;
  using detail::comp_chain;
  using detail::whisker;
  const ObjectExpr I;
  auto need = [&](bool ok, const char* what) {
    if (!ok)
      throw TypeError("NotNormalisedKind",
                      std::string(kind_name(k)) + ": " + what);
  };
  switch (k) {
    case K::Eta:
    case K::Eps:
      return bgen(k, a);
    case K::BubbleCup:
      return eval_(I, I);
    case K::BubbleCap:
      return coeval(I, I);
    case K::ExitDR: {
      // [Y X] -> Y X -> [Y] X
      const ObjectExpr &Y = a[0], &X = a[1];
      return comp(eval_(I, tensor(Y, X)), whisker(I, coeval(I, Y), X));
    }
    case K::EntryDR: {
      // [Y] X -> [U Yc [Y] X] -> [U D X]  with Y = U D, Yc = U*
      need(is_normalised_word(a[0]), "mixed argument must be polarity-sorted");
      auto [U, D] = split_polarity(a[0]);
      ObjectExpr Yc = dual_object(U);
      ObjectExpr domO = tensor(bw(a[0]), a[1]);
      return comp(coeval(Yc, domO),
                  bracketed(whisker(U, eval_(Yc, D), a[1])));
    }
    case K::CupCrossL: {
      // X [X^ Y] -> [U Yc X [X^ Y]] -> [U D]  with Y = U D, Yc = U*
      need(is_normalised_word(a[1]), "mixed argument must be polarity-sorted");
      const ObjectExpr& X = a[0];
      auto [U, D] = split_polarity(a[1]);
      ObjectExpr Yc = dual_object(U);
      ObjectExpr domO = tensor(X, bw(tensor(dual_object(X), a[1])));
      return comp(coeval(Yc, domO),
                  bracketed(whisker(U, eval_(tensor(Yc, X), D), I)));
    }
    case K::ExitUL: {
      // [X [Y^ Z] W] -> [X Y^ [Z] W], routed through the crossing cup
      const ObjectExpr &Xw = a[0], &Y = a[1], &Zw = a[2], &Ww = a[3];
      need(is_normalised_word(Xw), "mixed argument must be polarity-sorted");
      need(is_normalised_word(Zw), "mixed argument must be polarity-sorted");
      need(is_covariant(Ww), "trailing word must be covariant");
      auto [U1, D1] = split_polarity(Xw);
      ObjectExpr X1c = dual_object(U1);
      ObjectExpr dY = dual_object(Y);
      ObjectExpr brYZ = bw(tensor(dY, Zw));
      ObjectExpr domO = bw(tensor({Xw, brYZ, Ww}));
      ObjectExpr rest = tensor(D1, tensor(brYZ, Ww));
      std::vector<Term> steps;
      steps.push_back(coeval(tensor(Y, X1c), domO));
      steps.push_back(
          bracketed(whisker(tensor({U1, dY, Y}), eval_(X1c, rest), I)));
      if (!D1.is_unit() && !Y.is_unit())
        steps.push_back(bracketed(
            whisker(tensor(U1, dY), sym(Y, D1), tensor(brYZ, Ww))));
      steps.push_back(bracketed(whisker(
          tensor({U1, dY, D1}), decompose_generator_term(K::CupCrossL, {Y, Zw}),
          Ww)));
      if (!D1.is_unit() && !dY.is_unit())
        steps.push_back(
            bracketed(whisker(U1, sym(dY, D1), tensor(bw(Zw), Ww))));
      return comp_chain(steps);
    }
    case K::EntryUL: {
      // [X^ Y^ [Z]] -> [X^ [Y^ Z]]; a trailing block is not normalisable
      need(a[3].is_unit(), "trailing word must be empty");
      need(is_normalised_word(a[2]), "mixed argument must be polarity-sorted");
      const ObjectExpr &X = a[0], &Y = a[1], &Zw = a[2];
      auto [UZ, DZ] = split_polarity(Zw);
      ObjectExpr Zc = dual_object(UZ);
      ObjectExpr dX = dual_object(X), dY = dual_object(Y);
      ObjectExpr domO = bw(tensor({dX, dY, bw(Zw)}));
      ObjectExpr rest = tensor(dY, bw(Zw));
      return comp_chain(
          {coeval(X, domO),
           bracketed(whisker(
               dX, decompose_generator_term(K::CupCrossL, {X, rest}), I)),
           bracketed(whisker(
               dX, decompose_generator_term(K::ExitUL, {dY, Zc, DZ, I}), I)),
           bracketed(whisker(
               dX, bracketed(whisker(tensor(dY, UZ), eval_(I, DZ), I)), I))});
    }
    case K::CapR: {
      // [X Z] -> [X [Y^ Y] Z] -> [X Y^ [Y] Z] -> [X Y^ Y Z]
      const ObjectExpr &Xw = a[0], &Y = a[1], &Zw = a[2];
      need(is_normalised_word(Xw), "mixed argument must be polarity-sorted");
      need(is_covariant(Zw), "trailing word must be covariant");
      return comp_chain(
          {bracketed(whisker(Xw, coeval(Y, I), Zw)),
           decompose_generator_term(K::ExitUL, {Xw, Y, Y, Zw}),
           bracketed(
               whisker(tensor(Xw, dual_object(Y)), eval_(I, Y), Zw))});
    }
    case K::CupR: {
      // [X Y] [Y^ Z] -> [[X Y] [Y^ Z]] -> ... -> [X Z]
      const ObjectExpr &Xw = a[0], &Y = a[1], &Zw = a[2];
      need(is_normalised_word(Xw), "mixed argument must be polarity-sorted");
      need(is_normalised_word(Zw), "mixed argument must be polarity-sorted");
      auto [UX, DX] = split_polarity(Xw);
      auto [UZ, DZ] = split_polarity(Zw);
      ObjectExpr Xc = dual_object(UX), Zc = dual_object(UZ);
      ObjectExpr b1 = bw(tensor(Xw, Y));
      ObjectExpr b2 = bw(tensor(dual_object(Y), Zw));
      return comp_chain(
          {coeval(I, tensor(b1, b2)),
           decompose_generator_term(K::ExitUL, {I, Xc, tensor(DX, Y), b2}),
           bracketed(whisker(UX, eval_(I, tensor(DX, Y)), b2)),
           bracketed(whisker(
               tensor(UX, DX), decompose_generator_term(K::CupCrossL, {Y, Zw}),
               I)),
           decompose_generator_term(K::ExitUL, {Xw, Zc, DZ, I}),
           bracketed(whisker(tensor(Xw, UZ), eval_(I, DZ), I))});
    }
    default:
      throw TypeError("NotNormalisedKind",
                      std::string(kind_name(k)) +
                          " is a reflected generator; unreflect first");
  }
}

inline EvalCoevalForm decompose_generator(BracketGenKind k,
                                          const std::vector<ObjectExpr>& a) {
  Term t = decompose_generator_term(k, a);
  return {t, eval_coeval_certificate(t)};
}

namespace detail {

inline Term decompose_rec(const Term& t) {
  switch (t->tag) {
    case TK::Id:
    case TK::Sym:
    case TK::Gen:
      return t;
    case TK::Comp:
      return comp(decompose_rec(t->a), decompose_rec(t->b));
    case TK::Tensor:
      return tens(decompose_rec(t->a), decompose_rec(t->b));
    case TK::Bracketed:
      return bracketed(decompose_rec(t->a));
    case TK::BracketGen:
      return decompose_generator_term(t->kind, t->args);
    default:
      throw TypeError("NotNormalised",
                      "term is outside the normalised fragment");
  }
}

}  // namespace detail

inline EvalCoevalForm decompose_term(const Term& t) {
  Term r = detail::decompose_rec(t);
  return {r, eval_coeval_certificate(r)};
}

// ---------------------------------------------------------------------------
// Canonical named morphisms

// curry over Y: given f : Y X -> Z, yields X -> [Y^ Z]
inline Term curry(const Term& f, const ObjectExpr& Y, const ObjectExpr& X) {
  return comp(coeval(Y, X), bracketed(detail::whisker(dual_object(Y), f, {})));
}

// uncurry over Y: given g : X -> [Y^ Z], yields Y X -> Z
inline Term uncurry(const Term& g, const ObjectExpr& Y, const ObjectExpr& Z) {
  return comp(detail::whisker(Y, g, {}), eval_(Y, Z));
}

// v_X : X -> [[X]^], semantically x |-> (f |-> f(x))
inline Term double_dual_unit(const ObjectExpr& X) {
  ObjectExpr homXI = detail::bw(dual_object(X));       // [X^]
  ObjectExpr dualHom = dual_object(homXI);             // [X]^
  Term inner = comp(sym(homXI, X), eval_(X, {}));      // [X^] X -> I
  return comp(coeval(homXI, X),
              bracketed(detail::whisker(dualHom, inner, {})));
}

// [X^ Y] [Y^ Z] -> [X^ Z]
inline Term internal_compose(const ObjectExpr& X, const ObjectExpr& Y,
                             const ObjectExpr& Z) {
  return bgen(BracketGenKind::CupR, {dual_object(X), Y, Z});
}

// I -> [X^ X]
inline Term internal_id(const ObjectExpr& X) {
  return comp(bgen(BracketGenKind::BubbleCap, {}),
              bgen(BracketGenKind::CapR, {{}, X, {}}));
}

}  // namespace bracket
