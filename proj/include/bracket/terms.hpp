#pragma once

#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "objects.hpp"
#include "signature.hpp"

namespace bracket {

// The 8 base covariant generators and their vertical-axis reflections, plus
// the canonical coevaluation/evaluation morphisms Eta and Eps (definable as
// composites of the others; kept atomic so decompositions certify by scan).
enum class BracketGenKind {
  BubbleCup, BubbleCap,
  EntryDL, ExitDL, EntryUL, ExitUL, CupCrossL, CapR, CupR,
  EntryDR, ExitDR, EntryUR, ExitUR, CupCrossR, CapL, CupL,
  Eta, Eps,
};

inline const char* kind_name(BracketGenKind k) {
  switch (k) {
    case BracketGenKind::BubbleCup:  return "bubble_cup";
    case BracketGenKind::BubbleCap:  return "bubble_cap";
    case BracketGenKind::EntryDL:    return "entry_dl";
    case BracketGenKind::ExitDL:     return "exit_dl";
    case BracketGenKind::EntryUL:    return "entry_ul";
    case BracketGenKind::ExitUL:     return "exit_ul";
    case BracketGenKind::CupCrossL:  return "cup_cross_l";
    case BracketGenKind::CapR:       return "cap_r";
    case BracketGenKind::CupR:       return "cup_r";
    case BracketGenKind::EntryDR:    return "entry_dr";
    case BracketGenKind::ExitDR:     return "exit_dr";
    case BracketGenKind::EntryUR:    return "entry_ur";
    case BracketGenKind::ExitUR:     return "exit_ur";
    case BracketGenKind::CupCrossR:  return "cup_cross_r";
    case BracketGenKind::CapL:       return "cap_l";
    case BracketGenKind::CupL:       return "cup_l";
    case BracketGenKind::Eta:        return "eta";
    case BracketGenKind::Eps:        return "eps";
  }
  return "?";
}

enum class TK {
  Id, Gen, BracketGen, Sym, Comp, Tensor, Bracketed, Dual, Copy, Discard
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TK tag;
  ObjectExpr obj;               // Id/Copy/Discard object; Sym left
  ObjectExpr obj2;              // Sym right
  std::string name;             // Gen
  BracketGenKind kind{};        // BracketGen
  std::vector<ObjectExpr> args; // BracketGen type arguments
  Term a, b;                    // Comp/Tensor children; Bracketed/Dual inner
};

inline Term make_node(TermNode n) {
  return std::make_shared<const TermNode>(std::move(n));
}

inline Term id(ObjectExpr o) {
  TermNode n; n.tag = TK::Id; n.obj = std::move(o);
  return make_node(std::move(n));
}
inline Term gen(std::string name) {
  TermNode n; n.tag = TK::Gen; n.name = std::move(name);
  return make_node(std::move(n));
}
inline Term bgen(BracketGenKind k, std::vector<ObjectExpr> args) {
  TermNode n; n.tag = TK::BracketGen; n.kind = k; n.args = std::move(args);
  return make_node(std::move(n));
}
inline Term sym(ObjectExpr l, ObjectExpr r) {
  // crossing with nothing is the identity
  if (l.strands.empty()) return id(r);
  if (r.strands.empty()) return id(l);
  TermNode n; n.tag = TK::Sym; n.obj = std::move(l); n.obj2 = std::move(r);
  return make_node(std::move(n));
}
inline Term comp(Term a, Term b) {
  TermNode n; n.tag = TK::Comp; n.a = std::move(a); n.b = std::move(b);
  return make_node(std::move(n));
}
inline Term comp(std::initializer_list<Term> parts) {
  Term r;
  for (const Term& p : parts) r = r ? comp(r, p) : p;
  return r;
}
inline Term tens(Term a, Term b) {
  TermNode n; n.tag = TK::Tensor; n.a = std::move(a); n.b = std::move(b);
  return make_node(std::move(n));
}
inline Term bracketed(Term t) {
  TermNode n; n.tag = TK::Bracketed; n.a = std::move(t);
  return make_node(std::move(n));
}
inline Term dual(Term t) {
  TermNode n; n.tag = TK::Dual; n.a = std::move(t);
  return make_node(std::move(n));
}
inline Term copy_t(ObjectExpr o) {
  TermNode n; n.tag = TK::Copy; n.obj = std::move(o);
  return make_node(std::move(n));
}
inline Term discard_t(ObjectExpr o) {
  TermNode n; n.tag = TK::Discard; n.obj = std::move(o);
  return make_node(std::move(n));
}
inline Term coeval(ObjectExpr Y, ObjectExpr X) {
  return bgen(BracketGenKind::Eta, {std::move(Y), std::move(X)});
}
inline Term eval_(ObjectExpr Y, ObjectExpr X) {
  return bgen(BracketGenKind::Eps, {std::move(Y), std::move(X)});
}

namespace detail {

// id_l (x) m (x) id_r, dropping unit identities
inline Term whisker(const ObjectExpr& l, Term m, const ObjectExpr& r) {
  Term t = std::move(m);
  if (!l.is_unit()) t = tens(id(l), t);
  if (!r.is_unit()) t = tens(t, id(r));
  return t;
}

inline Term comp_chain(const std::vector<Term>& ts) {
  Term t = ts.at(0);
  for (std::size_t i = 1; i < ts.size(); ++i) t = comp(t, ts[i]);
  return t;
}

// Composes the given terms, dropping plain identities along the way.
inline Term comp_terms(std::initializer_list<Term> parts) {
  std::vector<Term> keep;
  for (const Term& p : parts)
    if (p->tag != TK::Id) keep.push_back(p);
  if (keep.empty()) return *parts.begin();
  return comp_chain(keep);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Typing

struct MorphType {
  ObjectExpr dom, cod;
  Variance layer = Variance::Covariant;
  friend bool operator==(const MorphType&, const MorphType&) = default;
};

struct TypeError : std::runtime_error {
  std::string code;
  TypeError(std::string code_, const std::string& msg)
      : std::runtime_error(code_ + ": " + msg), code(std::move(code_)) {}
};

namespace detail {

inline Variance classify_boundary(const ObjectExpr& dom, const ObjectExpr& cod);

struct GenSchema {
  int nargs;
  // required variance per slot: true = must be covariant, false = any word
  bool cov[4];
};

inline GenSchema gen_schema(BracketGenKind k) {
  using K = BracketGenKind;
  switch (k) {
    case K::BubbleCup: case K::BubbleCap: return {0, {}};
    case K::EntryDL:   return {2, {true, false}};
    case K::ExitDL:    return {2, {true, true}};
    case K::EntryUL:   return {4, {true, true, false, true}};
    case K::ExitUL:    return {4, {false, true, false, false}};
    case K::CupCrossL: return {2, {true, false}};
    case K::CapR:      return {3, {false, true, false}};
    case K::CupR:      return {3, {false, true, false}};
    case K::EntryDR:   return {2, {false, true}};
    case K::ExitDR:    return {2, {true, true}};
    case K::EntryUR:   return {4, {true, false, true, true}};
    case K::ExitUR:    return {4, {false, false, true, false}};
    case K::CupCrossR: return {2, {false, true}};
    case K::CapL:      return {3, {false, true, false}};
    case K::CupL:      return {3, {false, true, false}};
    case K::Eta:       return {2, {true, true}};
    case K::Eps:       return {2, {true, true}};
  }
  return {0, {}};
}

}  // namespace detail

// The typing rules for the bracket generators. Argument order follows the
// subscript order of each rule; every rule's boundary is a covariant word.
inline MorphType bracket_gen_type(BracketGenKind k,
                                  const std::vector<ObjectExpr>& a) {
  using K = BracketGenKind;
  auto schema = detail::gen_schema(k);
  if (static_cast<int>(a.size()) != schema.nargs)
    throw TypeError("BadTypeArgs",
                    std::string(kind_name(k)) + " expects " +
                        std::to_string(schema.nargs) + " type arguments, got " +
                        std::to_string(a.size()));
  for (int i = 0; i < schema.nargs; ++i)
    if (schema.cov[i] && !is_covariant(a[i]))
      throw TypeError("BadTypeArgs",
                      std::string(kind_name(k)) + " argument " +
                          std::to_string(i + 1) + " must be covariant: " +
                          print_object(a[i]));
  auto br = [](std::initializer_list<ObjectExpr> parts) {
    return word({bracket(tensor(parts))});
  };
  auto d = [](const ObjectExpr& o) { return dual_object(o); };
  const ObjectExpr I;
  switch (k) {
    case K::BubbleCup: return {br({}), I};
    case K::BubbleCap: return {I, br({})};
    case K::EntryDL:   return {tensor(a[0], br({a[1]})), br({a[0], a[1]})};
    case K::ExitDL:    return {br({a[0], a[1]}), tensor(a[0], br({a[1]}))};
    case K::EntryUL:
      return {br({d(a[0]), d(a[1]), br({a[2]}), d(a[3])}),
              br({d(a[0]), br({d(a[1]), a[2]}), d(a[3])})};
    case K::ExitUL:
      return {br({a[0], br({d(a[1]), a[2]}), a[3]}),
              br({a[0], d(a[1]), br({a[2]}), a[3]})};
    case K::CupCrossL: return {tensor(a[0], br({d(a[0]), a[1]})), br({a[1]})};
    case K::CapR:
      return {br({a[0], a[2]}), br({a[0], d(a[1]), a[1], a[2]})};
    case K::CupR:
      return {tensor(br({a[0], a[1]}), br({d(a[1]), a[2]})), br({a[0], a[2]})};
    case K::EntryDR:   return {tensor(br({a[0]}), a[1]), br({a[0], a[1]})};
    case K::ExitDR:    return {br({a[0], a[1]}), tensor(br({a[0]}), a[1])};
    case K::EntryUR:
      return {br({d(a[0]), br({a[1]}), d(a[2]), d(a[3])}),
              br({d(a[0]), br({a[1], d(a[2])}), d(a[3])})};
    case K::ExitUR:
      return {br({a[0], br({a[1], d(a[2])}), a[3]}),
              br({a[0], br({a[1]}), d(a[2]), a[3]})};
    case K::CupCrossR: return {tensor(br({a[0], d(a[1])}), a[1]), br({a[0]})};
    case K::CapL:
      return {br({a[0], a[2]}), br({a[0], a[1], d(a[1]), a[2]})};
    case K::CupL:
      return {tensor(br({a[0], d(a[1])}), br({a[1], a[2]})), br({a[0], a[2]})};
    case K::Eta:
      return {a[1], br({d(a[0]), a[0], a[1]})};
    case K::Eps:
      return {tensor(a[0], br({d(a[0]), a[1]})), a[1]};
  }
  throw TypeError("BadTypeArgs", "unknown generator kind");
}

namespace detail {

inline Variance classify_boundary(const ObjectExpr& dom, const ObjectExpr& cod) {
  Variance d = variance_class(dom), c = variance_class(cod);
  if (d == Variance::Mixed || c == Variance::Mixed) return Variance::Mixed;
  if (d == Variance::Contravariant || c == Variance::Contravariant) {
    // both must be contravariant (I counts as either)
    if ((d == Variance::Covariant && !dom.is_unit()) ||
        (c == Variance::Covariant && !cod.is_unit()))
      return Variance::Mixed;
    return Variance::Contravariant;
  }
  return Variance::Covariant;
}

inline Variance flip_layer(Variance v) {
  if (v == Variance::Covariant) return Variance::Contravariant;
  if (v == Variance::Contravariant) return Variance::Covariant;
  return Variance::Mixed;
}

inline MorphType infer(const Signature& sig, const Term& t) {
  switch (t->tag) {
    case TK::Id:
      return {t->obj, t->obj, classify_boundary(t->obj, t->obj)};
    case TK::Gen: {
      const GeneratorDecl* g = sig.find_generator(t->name);
      if (!g)
        throw TypeError("UnknownGenerator", "'" + t->name + "'");
      return {g->arity, g->coarity, Variance::Covariant};
    }
    case TK::BracketGen: {
      MorphType m = bracket_gen_type(t->kind, t->args);
      m.layer = Variance::Covariant;
      return m;
    }
    case TK::Sym: {
      ObjectExpr dom = tensor(t->obj, t->obj2);
      ObjectExpr cod = tensor(t->obj2, t->obj);
      return {dom, cod, classify_boundary(dom, cod)};
    }
    case TK::Comp: {
      MorphType ma = infer(sig, t->a), mb = infer(sig, t->b);
      if (!(ma.cod == mb.dom))
        throw TypeError("CompositionMismatch",
                        print_object(ma.cod) + " vs " + print_object(mb.dom));
      Variance ly = (ma.layer == Variance::Mixed || mb.layer == Variance::Mixed)
                        ? Variance::Mixed
                        : classify_boundary(ma.dom, mb.cod);
      return {ma.dom, mb.cod, ly};
    }
    case TK::Tensor: {
      MorphType ma = infer(sig, t->a), mb = infer(sig, t->b);
      ObjectExpr dom = tensor(ma.dom, mb.dom), cod = tensor(ma.cod, mb.cod);
      Variance ly = (ma.layer == Variance::Mixed || mb.layer == Variance::Mixed)
                        ? Variance::Mixed
                        : classify_boundary(dom, cod);
      return {dom, cod, ly};
    }
    case TK::Bracketed: {
      MorphType m = infer(sig, t->a);
      return {word({bracket(m.dom)}), word({bracket(m.cod)}),
              Variance::Covariant};
    }
    case TK::Dual: {
      MorphType m = infer(sig, t->a);
      return {dual_object(m.cod), dual_object(m.dom), flip_layer(m.layer)};
    }
    case TK::Copy: {
      if (!sig.cartesian)
        throw TypeError("MissingCartesian", "copy requires a cartesian signature");
      if (!is_covariant(t->obj))
        throw TypeError("LayerViolation", "copy object must be covariant");
      return {t->obj, tensor(t->obj, t->obj), Variance::Covariant};
    }
    case TK::Discard: {
      if (!sig.cartesian)
        throw TypeError("MissingCartesian",
                        "discard requires a cartesian signature");
      if (!is_covariant(t->obj))
        throw TypeError("LayerViolation", "discard object must be covariant");
      return {t->obj, {}, Variance::Covariant};
    }
  }
  throw TypeError("Internal", "unknown term tag");
}

}  // namespace detail

// Syntax-directed type inference; every typeable term has exactly one type.
inline MorphType typecheck(const Signature& sig, const Term& t) {
  return detail::infer(sig, t);
}

// Top-level morphisms live in the covariant (or contravariant) layer;
// mixed-boundary terms are only legal inside brackets.
inline MorphType typecheck_top(const Signature& sig, const Term& t) {
  MorphType m = detail::infer(sig, t);
  if (m.layer == Variance::Mixed)
    throw TypeError("LayerViolation",
                    "mixed-layer term at top level: " + print_object(m.dom) +
                        " -> " + print_object(m.cod));
  return m;
}

// ---------------------------------------------------------------------------
// The formal dual on terms, pushed to the leaves.

namespace detail {
inline Term dual_push(const Term& t);

// Removes nested Dual wrappers from a term without dualising it.
inline Term dual_normal(const Term& t) {
  switch (t->tag) {
    case TK::Comp:    return comp(dual_normal(t->a), dual_normal(t->b));
    case TK::Tensor:  return tens(dual_normal(t->a), dual_normal(t->b));
    case TK::Bracketed: return bracketed(dual_normal(t->a));
    case TK::Dual:    return dual_push(t->a);
    default:          return t;
  }
}

inline Term dual_push(const Term& t) {
  switch (t->tag) {
    case TK::Id:   return id(dual_object(t->obj));
    case TK::Gen:  return dual(t);
    case TK::BracketGen: return dual(t);
    case TK::Copy: case TK::Discard: return dual(t);
    case TK::Sym:  return sym(dual_object(t->obj), dual_object(t->obj2));
    case TK::Comp: return comp(dual_push(t->b), dual_push(t->a));
    case TK::Tensor: return tens(dual_push(t->b), dual_push(t->a));
    case TK::Bracketed: return dual(bracketed(dual_normal(t->a)));
    case TK::Dual: return dual_normal(t->a);
  }
  return t;
}
}  // namespace detail

inline Term dual_term(const Term& t) { return detail::dual_push(t); }

// ---------------------------------------------------------------------------
// Structural equality of terms (syntactic, not modulo any axiom)

inline bool term_eq(const Term& x, const Term& y) {
  if (x.get() == y.get()) return true;
  if (x->tag != y->tag) return false;
  switch (x->tag) {
    case TK::Id: case TK::Copy: case TK::Discard: return x->obj == y->obj;
    case TK::Gen: return x->name == y->name;
    case TK::BracketGen: return x->kind == y->kind && x->args == y->args;
    case TK::Sym: return x->obj == y->obj && x->obj2 == y->obj2;
    case TK::Comp: case TK::Tensor:
      return term_eq(x->a, y->a) && term_eq(x->b, y->b);
    case TK::Bracketed: case TK::Dual: return term_eq(x->a, y->a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing (term surface syntax)

namespace detail {

// precedence: 0 = composition, 1 = tensor, 2 = atom
inline void print_term_prec(const Term& t, int prec, std::string& out) {
  switch (t->tag) {
    case TK::Id:
      out += "id{" + print_object(t->obj) + "}";
      return;
    case TK::Gen:
      out += t->name;
      return;
    case TK::BracketGen: {
      out += kind_name(t->kind);
      if (!t->args.empty()) {
        out += '{';
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          if (i) out += "; ";
          out += print_object(t->args[i]);
        }
        out += '}';
      }
      return;
    }
    case TK::Sym:
      out += "sym{" + print_object(t->obj) + ", " + print_object(t->obj2) + "}";
      return;
    case TK::Comp: {
      bool paren = prec > 0;
      if (paren) out += '(';
      print_term_prec(t->a, 0, out);
      out += " ; ";
      print_term_prec(t->b, 0, out);
      if (paren) out += ')';
      return;
    }
    case TK::Tensor: {
      bool paren = prec > 1;
      if (paren) out += '(';
      print_term_prec(t->a, 1, out);
      out += " * ";
      print_term_prec(t->b, 1, out);
      if (paren) out += ')';
      return;
    }
    case TK::Bracketed:
      out += "[ ";
      print_term_prec(t->a, 0, out);
      out += " ]";
      return;
    case TK::Dual:
      out += "dual(";
      print_term_prec(t->a, 0, out);
      out += ')';
      return;
    case TK::Copy:
      out += "copy{" + print_object(t->obj) + "}";
      return;
    case TK::Discard:
      out += "discard{" + print_object(t->obj) + "}";
      return;
  }
}

}  // namespace detail

inline std::string print_term(const Term& t) {
  std::string out;
  detail::print_term_prec(t, 0, out);
  return out;
}

}  // namespace bracket
