#pragma once

#include <algorithm>
#include <vector>

#include "gen_composites.hpp"
#include "terms.hpp"

namespace bracket {

// The normaliser of an object: a crossing term from the object to its
// normal form, built from the inductive sorting clauses.
struct NormaliserTerm {
  ObjectExpr object;
  Term term;
};

namespace detail {

inline ObjectExpr strand_w(const Strand& s) { return word({s}); }

inline ObjectExpr slice(const std::vector<Strand>& w, std::size_t b,
                        std::size_t e) {
  return ObjectExpr{std::vector<Strand>(w.begin() + b, w.begin() + e)};
}

// Adjacent crossings sorting a word's strands up-before-down, leftmost
// descending pair first, together with the inverse chain.
struct CrossingChains {
  std::vector<Term> fwd, inv;
};

inline CrossingChains polarity_bubble(const ObjectExpr& o) {
  std::vector<Strand> cur = o.strands;
  CrossingChains r;
  for (;;) {
    std::size_t i = 0;
    bool found = false;
    for (; i + 1 < cur.size(); ++i)
      if (cur[i].pol == Polarity::Down && cur[i + 1].pol == Polarity::Up) {
        found = true;
        break;
      }
    if (!found) break;
    ObjectExpr pre = slice(cur, 0, i), suf = slice(cur, i + 2, cur.size());
    ObjectExpr l = strand_w(cur[i]), g = strand_w(cur[i + 1]);
    r.fwd.push_back(whisker(pre, sym(l, g), suf));
    r.inv.push_back(whisker(pre, sym(g, l), suf));
    std::swap(cur[i], cur[i + 1]);
  }
  std::reverse(r.inv.begin(), r.inv.end());
  return r;
}

// A crossing term permuting `from` into `to` (same strand multiset),
// bubbling each target strand into place from the left.
inline Term reorder_chain(const ObjectExpr& from, const ObjectExpr& to) {
  std::vector<Strand> cur = from.strands;
  std::vector<Term> steps;
  for (std::size_t i = 0; i < to.strands.size(); ++i) {
    std::size_t j = i;
    while (j < cur.size() && !(cur[j] == to.strands[i])) ++j;
    if (j >= cur.size())
      throw TypeError("Internal", "reorder between unequal words");
    for (; j > i; --j) {
      ObjectExpr pre = slice(cur, 0, j - 1), suf = slice(cur, j + 1, cur.size());
      steps.push_back(
          whisker(pre, sym(strand_w(cur[j - 1]), strand_w(cur[j])), suf));
      std::swap(cur[j - 1], cur[j]);
    }
  }
  if (steps.empty()) return id(from);
  return comp_chain(steps);
}

// Strandwise adapter between two covariant words that agree up to a
// permutation of corresponding bracket contents.
inline Term boundary_adapter(const ObjectExpr& from, const ObjectExpr& to) {
  if (from == to) return id(from);
  if (from.strands.size() != to.strands.size())
    throw TypeError("Internal", "adapter between unequal boundaries");
  Term t;
  for (std::size_t i = 0; i < from.strands.size(); ++i) {
    const Strand &f = from.strands[i], &g = to.strands[i];
    Term p;
    if (f == g) {
      p = id(strand_w(f));
    } else if (f.is_bracket && g.is_bracket && f.pol == Polarity::Down &&
               g.pol == Polarity::Down) {
      p = bracketed(reorder_chain(ObjectExpr{f.inner}, ObjectExpr{g.inner}));
    } else {
      throw TypeError("Internal", "adapter between unequal boundaries");
    }
    t = t ? tens(std::move(t), std::move(p)) : std::move(p);
  }
  return t;
}

inline Term nu_term(const ObjectExpr& o);
inline Term nu_inv_term(const ObjectExpr& o);
inline Term nu_word_term(const ObjectExpr& o);
inline Term nu_word_inv_term(const ObjectExpr& o);

// o -> normal_form(o): normalise each strand's contents in place. Up
// brackets are handled as the reflection of the downward case.
inline Term nu_term(const ObjectExpr& o) {
  if (is_normalised(o)) return id(o);
  Term t;
  for (const Strand& s : o.strands) {
    Term p;
    if (!s.is_bracket) {
      p = id(strand_w(s));
    } else if (s.pol == Polarity::Down) {
      p = bracketed(nu_word_term(ObjectExpr{s.inner}));
    } else {
      p = dual(bracketed(nu_word_inv_term(dual_object(ObjectExpr{s.inner}))));
    }
    t = t ? tens(std::move(t), std::move(p)) : std::move(p);
  }
  return t;
}

inline Term nu_inv_term(const ObjectExpr& o) {
  if (is_normalised(o)) return id(o);
  Term t;
  for (const Strand& s : o.strands) {
    Term p;
    if (!s.is_bracket) {
      p = id(strand_w(s));
    } else if (s.pol == Polarity::Down) {
      p = bracketed(nu_word_inv_term(ObjectExpr{s.inner}));
    } else {
      p = dual(bracketed(nu_word_term(dual_object(ObjectExpr{s.inner}))));
    }
    t = t ? tens(std::move(t), std::move(p)) : std::move(p);
  }
  return t;
}

// o -> normal_form_word(o): contents first, then top-level crossings.
inline Term nu_word_term(const ObjectExpr& o) {
  if (is_normalised_word(o)) return id(o);
  std::vector<Term> parts{nu_term(o)};
  CrossingChains ch = polarity_bubble(normal_form(o));
  parts.insert(parts.end(), ch.fwd.begin(), ch.fwd.end());
  std::vector<Term> keep;
  for (const Term& p : parts)
    if (p->tag != TK::Id) keep.push_back(p);
  if (keep.empty()) return id(o);
  return comp_chain(keep);
}

inline Term nu_word_inv_term(const ObjectExpr& o) {
  if (is_normalised_word(o)) return id(o);
  CrossingChains ch = polarity_bubble(normal_form(o));
  std::vector<Term> parts = ch.inv;
  parts.push_back(nu_inv_term(o));
  std::vector<Term> keep;
  for (const Term& p : parts)
    if (p->tag != TK::Id) keep.push_back(p);
  if (keep.empty()) return id(normal_form_word(o));
  return comp_chain(keep);
}

}  // namespace detail

inline NormaliserTerm normaliser_term(const ObjectExpr& o) {
  return {o, detail::nu_term(o)};
}

inline NormaliserTerm normaliser_inverse(const ObjectExpr& o) {
  return {o, detail::nu_inv_term(o)};
}

// Replaces every vertical-axis-reflected generator by its crossing
// composite over the unreflected one.
inline Term unreflect(const Term& t) {
  switch (t->tag) {
    case TK::Comp:
      return comp(unreflect(t->a), unreflect(t->b));
    case TK::Tensor:
      return tens(unreflect(t->a), unreflect(t->b));
    case TK::Bracketed:
      return bracketed(unreflect(t->a));
    case TK::Dual:
      return dual(unreflect(t->a));
    case TK::BracketGen: {
      Term u = unreflect_gen(t->kind, t->args);
      return u ? u : t;
    }
    default:
      return t;
  }
}

// Membership in the normalised fragment: only the normal-side generator
// kinds, with fully normalised type arguments and objects.
inline bool is_normalised_term(const Term& t) {
  switch (t->tag) {
    case TK::Id:
      return is_normalised(t->obj);
    case TK::Sym:
      return is_normalised(t->obj) && is_normalised(t->obj2);
    case TK::Gen:
      return true;
    case TK::Copy:
    case TK::Discard:
      return is_normalised(t->obj);
    case TK::Comp:
    case TK::Tensor:
      return is_normalised_term(t->a) && is_normalised_term(t->b);
    case TK::Bracketed:
    case TK::Dual:
      return is_normalised_term(t->a);
    case TK::BracketGen:
      switch (t->kind) {
        case BracketGenKind::BubbleCup:
        case BracketGenKind::BubbleCap:
        case BracketGenKind::EntryDR:
        case BracketGenKind::ExitDR:
        case BracketGenKind::EntryUL:
        case BracketGenKind::ExitUL:
        case BracketGenKind::CupCrossL:
        case BracketGenKind::CapR:
        case BracketGenKind::CupR:
        case BracketGenKind::Eta:
        case BracketGenKind::Eps: {
          for (const ObjectExpr& a : t->args)
            if (!is_normalised_word(a)) return false;
          return true;
        }
        default:
          return false;
      }
  }
  return false;
}

// The normalisation functor: objects to normal forms, generators to their
// normalised counterparts, signature symbols conjugated by the normaliser.
inline Term normalize_functor(const Signature& sig, const Term& t) {
  using K = BracketGenKind;
  using detail::boundary_adapter;
  using detail::comp_terms;
  using detail::reorder_chain;
  switch (t->tag) {
    case TK::Id:
      return id(normal_form(t->obj));
    case TK::Sym:
      return sym(normal_form(t->obj), normal_form(t->obj2));
    case TK::Copy:
      return copy_t(normal_form(t->obj));
    case TK::Discard:
      return discard_t(normal_form(t->obj));
    case TK::Gen: {
      const GeneratorDecl* g = sig.find_generator(t->name);
      if (!g) throw TypeError("UnknownGenerator", "'" + t->name + "'");
      if (is_normalised(g->arity) && is_normalised(g->coarity)) return t;
      return comp_terms(
          {detail::nu_inv_term(g->arity), t, detail::nu_term(g->coarity)});
    }
    case TK::Comp:
      return comp(normalize_functor(sig, t->a), normalize_functor(sig, t->b));
    case TK::Tensor:
      return tens(normalize_functor(sig, t->a), normalize_functor(sig, t->b));
    case TK::Dual:
      return dual(normalize_functor(sig, t->a));
    case TK::Bracketed: {
      MorphType m = detail::infer(sig, t->a);
      Term inner = normalize_functor(sig, t->a);
      ObjectExpr c = normal_form(m.dom), d = normal_form(m.cod);
      Term pre = reorder_chain(normal_form_word(m.dom), c);
      Term post = reorder_chain(d, normal_form_word(m.cod));
      return bracketed(comp_terms({pre, inner, post}));
    }
    case TK::BracketGen:
      switch (t->kind) {
        case K::EntryDR:
        case K::ExitDR:
        case K::EntryUL:
        case K::ExitUL:
        case K::CupCrossL:
        case K::CapR:
        case K::CupR:
        case K::BubbleCup:
        case K::BubbleCap:
        case K::Eta:
        case K::Eps: {
          std::vector<ObjectExpr> a2;
          for (const ObjectExpr& a : t->args) a2.push_back(normal_form_word(a));
          Term g = bgen(t->kind, a2);
          MorphType orig = bracket_gen_type(t->kind, t->args);
          MorphType now = bracket_gen_type(t->kind, a2);
          Term pre = boundary_adapter(normal_form(orig.dom), now.dom);
          Term post = boundary_adapter(now.cod, normal_form(orig.cod));
          return comp_terms({pre, g, post});
        }
        case K::EntryDL: {
          // reroute through the right entry, resorting the merged bracket
          ObjectExpr X = normal_form_word(t->args[0]);
          ObjectExpr Y = normal_form_word(t->args[1]);
          Term pre = sym(X, word({bracket(Y)}));
          Term g = bgen(K::EntryDR, {Y, X});
          Term post = bracketed(
              reorder_chain(tensor(Y, X), normal_form_word(tensor(X, Y))));
          return comp_terms({pre, g, post});
        }
        case K::ExitDL: {
          ObjectExpr X = normal_form_word(t->args[0]);
          ObjectExpr Y = normal_form_word(t->args[1]);
          Term pre = bracketed(reorder_chain(tensor(X, Y), tensor(Y, X)));
          Term g = bgen(K::ExitDR, {Y, X});
          Term post = sym(word({bracket(Y)}), X);
          return comp_terms({pre, g, post});
        }
        default:
          // reflected kinds: unreflect, then normalise the composite
          return normalize_functor(sig, unreflect_gen(t->kind, t->args));
      }
  }
  throw TypeError("Internal", "unknown term tag");
}

}  // namespace bracket
