#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gen_composites.hpp"
#include "terms.hpp"

namespace bracket {

// ---------------------------------------------------------------------------
// Metavariables and equation schemas
//
// Patterns are ordinary terms with two conventions: an atom strand whose
// sort name starts with '?' is an object metavariable (matching a subword;
// an up-polarity occurrence denotes the dual of the binding), and a Gen
// node whose name starts with '?' is a term metavariable.

struct MetaVar {
  std::string name;
  bool is_term = false;
  Variance layer = Variance::Mixed;
};

struct Subst {
  std::map<std::string, ObjectExpr> obj;
  std::map<std::string, Term> trm;
};

inline bool is_object_mvar(const Strand& s) {
  return !s.is_bracket && !s.sort.empty() && s.sort[0] == '?';
}

inline bool is_term_mvar(const Term& t) {
  return t->tag == TK::Gen && !t->name.empty() && t->name[0] == '?';
}

// Fills object metavariables that only occur on one side of an equation
// from the boundaries of already-bound term metavariables.
using SchemaCompleter = std::function<bool(const Signature&, Subst&)>;

struct EquationSchema {
  std::string name;
  std::string family;  // smc, crossing, naturality, yanking, bracket, comonoid
  Term lhs, rhs;
  std::vector<MetaVar> vars;
  bool bidirectional = true;
  // search hints: whether proof search applies the rule in each direction
  bool search_l2r = true;
  bool search_r2l = true;
  SchemaCompleter complete;
};

// ---------------------------------------------------------------------------
// Substitution application

inline ObjectExpr subst_object(const ObjectExpr& o, const Subst& su) {
  ObjectExpr out;
  for (const Strand& s : o.strands) {
    if (is_object_mvar(s)) {
      auto it = su.obj.find(s.sort.substr(1));
      if (it == su.obj.end())
        throw TypeError("UnboundMetaVar", s.sort);
      ObjectExpr v = s.pol == Polarity::Up ? dual_object(it->second) : it->second;
      out.strands.insert(out.strands.end(), v.strands.begin(), v.strands.end());
    } else if (s.is_bracket) {
      Strand b = s;
      b.inner = subst_object(ObjectExpr{s.inner}, su).strands;
      out.strands.push_back(std::move(b));
    } else {
      out.strands.push_back(s);
    }
  }
  return out;
}

inline Term subst_term(const Term& t, const Subst& su) {
  switch (t->tag) {
    case TK::Gen:
      if (is_term_mvar(t)) {
        auto it = su.trm.find(t->name.substr(1));
        if (it == su.trm.end())
          throw TypeError("UnboundMetaVar", t->name);
        return it->second;
      }
      return t;
    case TK::Id: return id(subst_object(t->obj, su));
    case TK::Copy: return copy_t(subst_object(t->obj, su));
    case TK::Discard: return discard_t(subst_object(t->obj, su));
    case TK::Sym:
      return sym(subst_object(t->obj, su), subst_object(t->obj2, su));
    case TK::BracketGen: {
      std::vector<ObjectExpr> args;
      for (const ObjectExpr& a : t->args) args.push_back(subst_object(a, su));
      return bgen(t->kind, std::move(args));
    }
    case TK::Comp: return comp(subst_term(t->a, su), subst_term(t->b, su));
    case TK::Tensor: return tens(subst_term(t->a, su), subst_term(t->b, su));
    case TK::Bracketed: return bracketed(subst_term(t->a, su));
    case TK::Dual: return dual_term(subst_term(t->a, su));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Horizontal (Y-axis) reflection of patterns and terms

namespace detail {

inline std::vector<Strand> yreflect_word(const std::vector<Strand>& w) {
  std::vector<Strand> out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Strand s = *it;
    if (s.is_bracket) s.inner = yreflect_word(s.inner);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

inline ObjectExpr yreflect_object(const ObjectExpr& o) {
  return ObjectExpr{detail::yreflect_word(o.strands)};
}

// The vertical-axis mirror of each bracket generator, with arguments in
// mirrored positional order. Eta/Eps have no mirrored counterpart.
inline std::optional<BracketGenKind> yreflect_kind(BracketGenKind k) {
  using K = BracketGenKind;
  switch (k) {
    case K::BubbleCup: return K::BubbleCup;
    case K::BubbleCap: return K::BubbleCap;
    case K::EntryDL: return K::EntryDR;
    case K::ExitDL: return K::ExitDR;
    case K::EntryUL: return K::EntryUR;
    case K::ExitUL: return K::ExitUR;
    case K::CupCrossL: return K::CupCrossR;
    case K::CapR: return K::CapL;
    case K::CupR: return K::CupL;
    case K::EntryDR: return K::EntryDL;
    case K::ExitDR: return K::ExitDL;
    case K::EntryUR: return K::EntryUL;
    case K::ExitUR: return K::ExitUL;
    case K::CupCrossR: return K::CupCrossL;
    case K::CapL: return K::CapR;
    case K::CupL: return K::CupR;
    default: return std::nullopt;
  }
}

// Mirrors a term in the vertical axis: tensor order reverses, every object
// word reverses, and each bracket generator swaps with its mirror image.
// Fails (nullopt) on signature symbols and on Eta/Eps.
inline std::optional<Term> yreflect_term(const Term& t) {
  auto yo = [](const ObjectExpr& o) { return yreflect_object(o); };
  switch (t->tag) {
    case TK::Id: return id(yo(t->obj));
    case TK::Copy: return copy_t(yo(t->obj));
    case TK::Discard: return discard_t(yo(t->obj));
    case TK::Sym: return sym(yo(t->obj2), yo(t->obj));
    case TK::Gen:
      if (is_term_mvar(t)) return t;
      return std::nullopt;
    case TK::BracketGen: {
      auto k = yreflect_kind(t->kind);
      if (!k) return std::nullopt;
      std::vector<ObjectExpr> args;
      for (auto it = t->args.rbegin(); it != t->args.rend(); ++it)
        args.push_back(yo(*it));
      return bgen(*k, std::move(args));
    }
    case TK::Comp: {
      auto a = yreflect_term(t->a), b = yreflect_term(t->b);
      if (!a || !b) return std::nullopt;
      return comp(*a, *b);
    }
    case TK::Tensor: {
      auto a = yreflect_term(t->a), b = yreflect_term(t->b);
      if (!a || !b) return std::nullopt;
      return tens(*b, *a);
    }
    case TK::Bracketed: {
      auto a = yreflect_term(t->a);
      if (!a) return std::nullopt;
      return bracketed(*a);
    }
    case TK::Dual: {
      auto a = yreflect_term(t->a);
      if (!a) return std::nullopt;
      return dual(*a);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The axiom schemas of Appendix A

namespace detail {

inline ObjectExpr OV(const std::string& n) {
  return word({atom("?" + n)});
}
inline ObjectExpr OVd(const std::string& n) {
  return word({atom("?" + n, Polarity::Up)});
}
inline ObjectExpr br1(const ObjectExpr& o) { return word({bracket(o)}); }

inline MetaVar ov(const std::string& n, Variance v = Variance::Mixed) {
  return {n, false, v};
}
inline MetaVar tv(const std::string& n, Variance v = Variance::Mixed) {
  return {n, true, v};
}

// binds an object variable to a term variable's boundary if still unbound
inline SchemaCompleter from_boundaries(
    std::vector<std::tuple<std::string, std::string, bool>> rules) {
  return [rules = std::move(rules)](const Signature& sig, Subst& su) {
    for (const auto& [objv, trmv, use_cod] : rules) {
      if (su.obj.count(objv)) continue;
      auto it = su.trm.find(trmv);
      if (it == su.trm.end()) return false;
      MorphType m = typecheck(sig, it->second);
      su.obj[objv] = use_cod ? m.cod : m.dom;
    }
    return true;
  };
}

}  // namespace detail

inline std::vector<EquationSchema> axiom_schemas(bool cartesian) {
  using K = BracketGenKind;
  using detail::br1;
  using detail::from_boundaries;
  using detail::ov;
  using detail::OV;
  using detail::OVd;
  using detail::tv;
  const ObjectExpr I;
  const Variance CO = Variance::Covariant;
  std::vector<EquationSchema> out;
  auto add = [&](EquationSchema s) { out.push_back(std::move(s)); };

  // --- symmetric monoidal structure. Unit, associativity and interchange
  // are applied structurally by the rewriter (its slice view is canonical
  // for them); the schemas are kept for instantiation-based validation.
  add({"comp_unit_l", "smc",
       comp(id(OV("X")), gen("?t")), gen("?t"),
       {tv("t"), ov("X")},
       true, false, false,
       from_boundaries({{"X", "t", false}})});
  add({"comp_unit_r", "smc",
       comp(gen("?t"), id(OV("Y"))), gen("?t"),
       {tv("t"), ov("Y")},
       true, false, false,
       from_boundaries({{"Y", "t", true}})});
  add({"comp_assoc", "smc",
       comp(comp(gen("?t1"), gen("?t2")), gen("?t3")),
       comp(gen("?t1"), comp(gen("?t2"), gen("?t3"))),
       {tv("t1"), tv("t2"), tv("t3")},
       true, false, false, nullptr});
  add({"tensor_unit_l", "smc",
       tens(id(I), gen("?t")), gen("?t"),
       {tv("t")},
       true, false, false, nullptr});
  add({"tensor_unit_r", "smc",
       tens(gen("?t"), id(I)), gen("?t"),
       {tv("t")},
       true, false, false, nullptr});
  add({"tensor_assoc", "smc",
       tens(tens(gen("?t1"), gen("?t2")), gen("?t3")),
       tens(gen("?t1"), tens(gen("?t2"), gen("?t3"))),
       {tv("t1"), tv("t2"), tv("t3")},
       true, false, false, nullptr});
  add({"interchange", "smc",
       comp(tens(gen("?t1"), gen("?t2")), tens(gen("?t3"), gen("?t4"))),
       tens(comp(gen("?t1"), gen("?t3")), comp(gen("?t2"), gen("?t4"))),
       {tv("t1"), tv("t2"), tv("t3"), tv("t4")},
       true, false, false, nullptr});
  add({"sym_inv", "smc",
       comp(sym(OV("X"), OV("Y")), sym(OV("Y"), OV("X"))),
       id(tensor(OV("X"), OV("Y"))),
       {ov("X"), ov("Y")},
       true, true, false, nullptr});
  add({"sym_nat", "smc",
       comp(tens(gen("?t"), id(OV("Z"))), sym(OV("Y"), OV("Z"))),
       comp(sym(OV("X"), OV("Z")), tens(id(OV("Z")), gen("?t"))),
       {tv("t"), ov("X"), ov("Y"), ov("Z")},
       true, true, true,
       from_boundaries({{"X", "t", false}, {"Y", "t", true}})});

  // --- crossing equations
  add({"cross_cup", "crossing",
       comp(tens(id(OV("X")), bracketed(sym(OV("Y"), OVd("X")))),
            bgen(K::CupCrossL, {OV("X"), OV("Y")})),
       comp(sym(OV("X"), br1(tensor(OV("Y"), OVd("X")))),
            bgen(K::CupCrossR, {OV("Y"), OV("X")})),
       {ov("X", CO), ov("Y")},
       true, true, true, nullptr});
  add({"cross_cap", "crossing",
       comp(bgen(K::CapR, {OV("X"), OV("Y"), OV("Z")}),
            bracketed(tens(tens(id(OV("X")), sym(OVd("Y"), OV("Y"))),
                           id(OV("Z"))))),
       bgen(K::CapL, {OV("X"), OV("Y"), OV("Z")}),
       {ov("X"), ov("Y", CO), ov("Z")},
       true, true, true, nullptr});
  add({"entry_exit_down", "crossing",
       comp(bgen(K::EntryDL, {OV("X"), OV("Y")}),
            bgen(K::ExitDL, {OV("X"), OV("Y")})),
       id(tensor(OV("X"), br1(OV("Y")))),
       {ov("X", CO), ov("Y", CO)},
       true, true, true, nullptr});
  add({"exit_entry_down", "crossing",
       comp(bgen(K::ExitDL, {OV("X"), OV("Y")}),
            bgen(K::EntryDL, {OV("X"), OV("Y")})),
       id(br1(tensor(OV("X"), OV("Y")))),
       {ov("X", CO), ov("Y", CO)},
       true, true, true, nullptr});
  add({"entry_exit_up", "crossing",
       comp(bgen(K::EntryUL, {OV("X"), OV("Y"), OV("Z"), OV("W")}),
            bgen(K::ExitUL, {OVd("X"), OV("Y"), OV("Z"), OVd("W")})),
       id(br1(tensor({OVd("X"), OVd("Y"), br1(OV("Z")), OVd("W")}))),
       {ov("X", CO), ov("Y", CO), ov("Z"), ov("W", CO)},
       true, true, true, nullptr});
  add({"exit_entry_up", "crossing",
       comp(bgen(K::ExitUL, {OVd("X"), OV("Y"), OV("Z"), OVd("W")}),
            bgen(K::EntryUL, {OV("X"), OV("Y"), OV("Z"), OV("W")})),
       id(br1(tensor({OVd("X"), br1(tensor(OVd("Y"), OV("Z"))), OVd("W")}))),
       {ov("X", CO), ov("Y", CO), ov("Z"), ov("W", CO)},
       true, true, true, nullptr});
  // entries and exits indexed by a composite wire are iterated single
  // crossings; stating the coherence lets proofs peel one strand at a time
  add({"entry_split", "crossing",
       bgen(K::EntryDL, {tensor(OV("U"), OV("V")), OV("Y")}),
       comp(tens(id(OV("U")), bgen(K::EntryDL, {OV("V"), OV("Y")})),
            bgen(K::EntryDL, {OV("U"), tensor(OV("V"), OV("Y"))})),
       {ov("U", CO), ov("V", CO), ov("Y")},
       true, true, true, nullptr});
  add({"exit_split", "crossing",
       bgen(K::ExitDL, {tensor(OV("U"), OV("V")), OV("Y")}),
       comp(bgen(K::ExitDL, {OV("U"), tensor(OV("V"), OV("Y"))}),
            tens(id(OV("U")), bgen(K::ExitDL, {OV("V"), OV("Y")}))),
       {ov("U", CO), ov("V", CO), ov("Y", CO)},
       true, true, true, nullptr});
  add({"entry_nil", "crossing",
       bgen(K::EntryDL, {I, OV("Y")}), id(br1(OV("Y"))),
       {ov("Y")},
       true, true, false, nullptr});
  add({"exit_nil", "crossing",
       bgen(K::ExitDL, {I, OV("Y")}), id(br1(OV("Y"))),
       {ov("Y", CO)},
       true, true, false, nullptr});
  // the empty bubble slides across a wire: a right entry into it is a left
  // entry after the crossing, and dually for exits
  add({"entry_bubble_cross", "crossing",
       bgen(K::EntryDR, {I, OV("X")}),
       comp(sym(br1(I), OV("X")), bgen(K::EntryDL, {OV("X"), I})),
       {ov("X", CO)},
       true, true, true, nullptr});
  add({"exit_bubble_cross", "crossing",
       bgen(K::ExitDL, {OV("X"), I}),
       comp(bgen(K::ExitDR, {I, OV("X")}), sym(br1(I), OV("X"))),
       {ov("X", CO)},
       true, true, true, nullptr});

  // --- naturality equations
  add({"nat_cross_cup", "naturality",
       comp(tens(gen("?t0"), bracketed(tens(id(OVd("Y")), gen("?t1")))),
            bgen(K::CupCrossL, {OV("Y"), OV("W")})),
       comp(comp(tens(id(OV("X")), bracketed(tens(dual(gen("?t0")),
                                                  id(OV("Z"))))),
                 bgen(K::CupCrossL, {OV("X"), OV("Z")})),
            bracketed(gen("?t1"))),
       {tv("t0", CO), tv("t1"), ov("X", CO), ov("Y", CO), ov("Z"), ov("W")},
       true, true, true,
       from_boundaries({{"X", "t0", false}, {"Y", "t0", true},
                        {"Z", "t1", false}, {"W", "t1", true}})});
  add({"nat_cap", "naturality",
       comp(comp(bracketed(tens(id(OV("U")), gen("?t1"))),
                 bgen(K::CapR, {OV("U"), OV("Y"), OV("W")})),
            bracketed(tens(tens(id(OV("U")), dual(gen("?t0"))),
                           id(tensor(OV("Y"), OV("W")))))),
       comp(bgen(K::CapR, {OV("U"), OV("X"), OV("Z")}),
            bracketed(tens(tens(id(tensor(OV("U"), OVd("X"))), gen("?t0")),
                           gen("?t1")))),
       {tv("t0", CO), tv("t1"), ov("U"), ov("X", CO), ov("Y", CO), ov("Z"),
        ov("W")},
       true, true, true,
       from_boundaries({{"X", "t0", false}, {"Y", "t0", true},
                        {"Z", "t1", false}, {"W", "t1", true}})});
  add({"nat_cup", "naturality",
       comp(comp(tens(bgen(K::CupCrossL, {OV("X"), tensor(OV("Y"), OV("W"))}),
                      id(br1(tensor(OVd("W"), OV("U"))))),
                 tens(bracketed(tens(gen("?t0"), id(OV("W")))),
                      bracketed(tens(id(OVd("W")), gen("?t1"))))),
            bgen(K::CupR, {OV("Z"), OV("W"), OV("V")})),
       comp(comp(tens(id(OV("X")),
                      bgen(K::CupR, {tensor(OVd("X"), OV("Y")), OV("W"),
                                     OV("U")})),
                 bgen(K::CupCrossL, {OV("X"), tensor(OV("Y"), OV("U"))})),
            bracketed(tens(gen("?t0"), gen("?t1")))),
       {tv("t0"), tv("t1"), ov("X", CO), ov("W", CO), ov("Y"), ov("Z"),
        ov("U"), ov("V")},
       true, true, true,
       from_boundaries({{"Y", "t0", false}, {"Z", "t0", true},
                        {"U", "t1", false}, {"V", "t1", true}})});

  // --- yanking equations
  add({"yank_entry", "yanking",
       comp(tens(id(OV("X")), bgen(K::CapR, {I, OV("X"), OV("Y")})),
            bgen(K::CupCrossL, {OV("X"), tensor(OV("X"), OV("Y"))})),
       bgen(K::EntryDL, {OV("X"), OV("Y")}),
       {ov("X", CO), ov("Y")},
       true, true, true, nullptr});
  add({"yank_exit", "yanking",
       comp(bgen(K::CapR, {OV("X"), OV("Y"),
                           tensor(br1(tensor(OVd("Y"), OV("Z"))), OV("W"))}),
            bracketed(tens(tens(id(tensor(OV("X"), OVd("Y"))),
                                bgen(K::CupCrossL, {OV("Y"), OV("Z")})),
                           id(OV("W"))))),
       bgen(K::ExitUL, {OV("X"), OV("Y"), OV("Z"), OV("W")}),
       {ov("X"), ov("Y", CO), ov("Z"), ov("W")},
       true, true, true, nullptr});
  add({"yank_cup", "yanking",
       comp(tens(id(br1(OV("X"))), bgen(K::CapR, {I, OV("X"), OV("Z")})),
            bgen(K::CupR, {I, OV("X"), tensor(OV("X"), OV("Z"))})),
       bgen(K::CupR, {OV("X"), I, OV("Z")}),
       {ov("X", CO), ov("Z")},
       true, true, true, nullptr});

  // --- bracket pop, merge, yanking, functoriality
  add({"pop", "bracket",
       comp(bgen(K::BubbleCap, {}), bgen(K::BubbleCup, {})), id(I),
       {}, true, true, false, nullptr});
  add({"merge", "bracket",
       comp(bgen(K::BubbleCup, {}), bgen(K::BubbleCap, {})), id(br1(I)),
       {}, true, true, false, nullptr});
  add({"bracket_yank", "bracket",
       comp(tens(bgen(K::BubbleCap, {}), id(br1(OV("X")))),
            bgen(K::CupR, {I, I, OV("X")})),
       id(br1(OV("X"))),
       {ov("X")},
       true, true, true, nullptr});
  add({"bracket_funct", "bracket",
       comp(bracketed(gen("?t0")), bracketed(gen("?t1"))),
       bracketed(comp(gen("?t0"), gen("?t1"))),
       {tv("t0"), tv("t1")},
       true, true, true, nullptr});
  // absorbed by the canonical form; kept for completeness
  add({"bracket_id", "bracket",
       bracketed(id(OV("X"))), id(br1(OV("X"))),
       {ov("X")},
       true, false, false, nullptr});

  // --- coevaluation/evaluation as composites of the primitives
  add({"eta_def", "bracket",
       bgen(K::Eta, {OV("Y"), OV("X")}),
       comp(comp(tens(bgen(K::BubbleCap, {}), id(OV("X"))),
                 bgen(K::EntryDR, {I, OV("X")})),
            bgen(K::CapR, {I, OV("Y"), OV("X")})),
       {ov("Y", CO), ov("X", CO)},
       true, true, true, nullptr});
  add({"eps_def", "bracket",
       bgen(K::Eps, {OV("Y"), OV("X")}),
       comp(comp(bgen(K::CupCrossL, {OV("Y"), OV("X")}),
                 bgen(K::ExitDL, {OV("X"), I})),
            tens(id(OV("X")), bgen(K::BubbleCup, {}))),
       {ov("Y", CO), ov("X", CO)},
       true, true, true, nullptr});

  // --- comonoid laws for cartesian signatures
  if (cartesian) {
    add({"copy_assoc", "comonoid",
         comp(copy_t(OV("X")), tens(copy_t(OV("X")), id(OV("X")))),
         comp(copy_t(OV("X")), tens(id(OV("X")), copy_t(OV("X")))),
         {ov("X", CO)},
         true, true, true, nullptr});
    add({"copy_comm", "comonoid",
         comp(copy_t(OV("X")), sym(OV("X"), OV("X"))), copy_t(OV("X")),
         {ov("X", CO)},
         true, true, true, nullptr});
    add({"copy_unit", "comonoid",
         comp(copy_t(OV("X")), tens(discard_t(OV("X")), id(OV("X")))),
         id(OV("X")),
         {ov("X", CO)},
         true, true, false, nullptr});
    add({"copy_nat", "comonoid",
         comp(gen("?t"), copy_t(OV("Y"))),
         comp(copy_t(OV("X")), tens(gen("?t"), gen("?t"))),
         {tv("t", CO), ov("X", CO), ov("Y", CO)},
         true, true, true,
         from_boundaries({{"X", "t", false}, {"Y", "t", true}})});
    add({"discard_nat", "comonoid",
         comp(gen("?t"), discard_t(OV("Y"))), discard_t(OV("X")),
         {tv("t", CO), ov("X", CO), ov("Y", CO)},
         true, true, false,
         from_boundaries({{"X", "t", false}, {"Y", "t", true}})});
    add({"copy_unit_r", "comonoid",
         comp(copy_t(OV("X")), tens(id(OV("X")), discard_t(OV("X")))),
         id(OV("X")),
         {ov("X", CO)},
         true, true, false, nullptr});
    // the copy and discard of a tensor split pointwise
    add({"copy_tensor", "comonoid",
         copy_t(tensor(OV("X"), OV("Y"))),
         comp(tens(copy_t(OV("X")), copy_t(OV("Y"))),
              detail::whisker(OV("X"), sym(OV("X"), OV("Y")), OV("Y"))),
         {ov("X", CO), ov("Y", CO)},
         true, true, true, nullptr});
    add({"discard_tensor", "comonoid",
         discard_t(tensor(OV("X"), OV("Y"))),
         tens(discard_t(OV("X")), discard_t(OV("Y"))),
         {ov("X", CO), ov("Y", CO)},
         true, true, true, nullptr});
    add({"copy_nil", "comonoid",
         copy_t(ObjectExpr{}), id(ObjectExpr{}),
         {},
         true, true, false, nullptr});
    add({"discard_nil", "comonoid",
         discard_t(ObjectExpr{}), id(ObjectExpr{}),
         {},
         true, true, false, nullptr});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reflection closure

namespace detail {

inline std::string schema_key(const EquationSchema& s) {
  return print_term(s.lhs) + " = " + print_term(s.rhs);
}

inline Variance flip_var(Variance v) {
  if (v == Variance::Covariant) return Variance::Contravariant;
  if (v == Variance::Contravariant) return Variance::Covariant;
  return Variance::Mixed;
}

}  // namespace detail

// Adds the horizontal- and vertical-axis reflections of each schema, as the
// congruence is closed under both. Reflections that are already present
// (self-mirrored schemas) are skipped.
inline std::vector<EquationSchema> close_under_reflection(
    const std::vector<EquationSchema>& in) {
  std::vector<EquationSchema> out = in;
  std::vector<std::string> keys;
  for (const EquationSchema& s : in) keys.push_back(detail::schema_key(s));
  auto present = [&](const std::string& k) {
    for (const std::string& e : keys)
      if (e == k) return true;
    return false;
  };
  auto push = [&](EquationSchema s) {
    std::string k = detail::schema_key(s);
    if (present(k)) return;
    keys.push_back(k);
    out.push_back(std::move(s));
  };
  for (const EquationSchema& s : in) {
    // structural schemas are their own reflections up to renaming
    if (s.name == "interchange" || s.name.rfind("comp_", 0) == 0 ||
        s.name.rfind("tensor_", 0) == 0)
      continue;
    // X reflection: the dual of both sides
    {
      EquationSchema d = s;
      d.name = s.name + "_op";
      d.lhs = dual_term(s.lhs);
      d.rhs = dual_term(s.rhs);
      // metavariables keep their declared layers: duals wrap them in place,
      // so bindings are still supplied in the original variance class
      push(std::move(d));
    }
    // Y reflection: the mirror image of both sides
    auto ml = yreflect_term(s.lhs);
    auto mr = yreflect_term(s.rhs);
    if (ml && mr) {
      EquationSchema m = s;
      m.name = s.name + "_mirror";
      m.lhs = *ml;
      m.rhs = *mr;
      push(m);
      EquationSchema md = m;
      md.name = s.name + "_mirror_op";
      md.lhs = dual_term(m.lhs);
      md.rhs = dual_term(m.rhs);
      push(std::move(md));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma library
//
// Equations in this family are consequences of the axioms; each one is
// proved from the axiom set by the search engine itself (see the derived
// equation tests) and checked for model soundness alongside the axioms.
// Registering them as schemas lets longer proofs take a known detour in a
// single step while every step stays replayable.

inline std::vector<EquationSchema> lemma_schemas() {
  using K = BracketGenKind;
  using detail::br1;
  using detail::from_boundaries;
  using detail::ov;
  using detail::OV;
  using detail::tv;
  const Variance CO = Variance::Covariant;
  std::vector<EquationSchema> out;
  auto add = [&](EquationSchema s) { out.push_back(std::move(s)); };

  // boxes slide through bracket entries and exits
  add({"lem_nat_entry_down", "lemma",
       comp(tens(gen("?t"), id(br1(OV("C")))),
            bgen(K::EntryDL, {OV("Y"), OV("C")})),
       comp(bgen(K::EntryDL, {OV("X"), OV("C")}),
            bracketed(tens(gen("?t"), id(OV("C"))))),
       {tv("t", CO), ov("X", CO), ov("Y", CO), ov("C")},
       true, true, true,
       from_boundaries({{"X", "t", false}, {"Y", "t", true}})});
  add({"lem_nat_exit_down", "lemma",
       comp(bracketed(tens(gen("?t"), id(OV("C")))),
            bgen(K::ExitDL, {OV("Y"), OV("C")})),
       comp(bgen(K::ExitDL, {OV("X"), OV("C")}),
            tens(gen("?t"), id(br1(OV("C"))))),
       {tv("t", CO), ov("X", CO), ov("Y", CO), ov("C", CO)},
       true, true, true,
       from_boundaries({{"X", "t", false}, {"Y", "t", true}})});

  return out;
}

// ---------------------------------------------------------------------------
// Derived equations (regression targets)

struct DerivedPair {
  std::string name;
  Term lhs, rhs;
  // number of equation steps in the published derivation; pairs with a
  // short derivation double as proof-search regression targets
  int figure_steps = 0;
  bool naturality = false;  // one of the four derived naturality laws
};

struct DerivedSuite {
  Signature sig;
  std::vector<DerivedPair> pairs;
};

inline DerivedSuite derived_suite() {
  using K = BracketGenKind;
  using detail::br1;
  DerivedSuite ds;
  ds.sig = parse_signature("sorts A B C; gen f : A -> B; gen g : B -> C;");
  const ObjectExpr I;
  ObjectExpr A = parse_object("A"), B = parse_object("B"), C = parse_object("C");
  Term f = gen("f"), g = gen("g");
  auto add = [&](std::string n, Term l, Term r, int steps, bool nat = false) {
    ds.pairs.push_back({std::move(n), std::move(l), std::move(r), steps, nat});
  };

  // derived naturality: boxes slide through entries and exits
  add("nat_entry_down_box",
      comp(tens(f, id(br1(C))), bgen(K::EntryDL, {B, C})),
      comp(bgen(K::EntryDL, {A, C}), bracketed(tens(f, id(C)))), 4, true);
  add("nat_exit_down_box",
      comp(bracketed(tens(f, id(C))), bgen(K::ExitDL, {B, C})),
      comp(bgen(K::ExitDL, {A, C}), tens(f, id(br1(C)))), 4, true);
  add("nat_entry_up_box",
      comp(bracketed(tens(id(parse_object("C^ B^")), bracketed(f))),
           bgen(K::EntryUL, {C, B, B, I})),
      comp(bgen(K::EntryUL, {C, B, A, I}),
           bracketed(tens(id(parse_object("C^")),
                          bracketed(tens(id(parse_object("B^")), f))))),
      4, true);
  add("nat_exit_up_box",
      comp(bracketed(tens(id(parse_object("C^")),
                          bracketed(tens(id(parse_object("B^")), f)))),
           bgen(K::ExitUL, {parse_object("C^"), B, B, I})),
      comp(bgen(K::ExitUL, {parse_object("C^"), B, A, I}),
           bracketed(tens(id(parse_object("C^ B^")), bracketed(f)))),
      4, true);

  // derived cap equations
  add("cap_bubble_cross",
      comp(bgen(K::BubbleCap, {}), bgen(K::CapR, {I, A, I})),
      comp(comp(bgen(K::BubbleCap, {}), bgen(K::CapL, {I, A, I})),
           bracketed(sym(A, dual_object(A)))),
      5);
  add("cap_slide",
      comp(bgen(K::CapR, {A, B, C}),
           bgen(K::CapR, {parse_object("A B^ B"), C, C})),
      comp(bgen(K::CapR, {A, C, C}),
           bgen(K::CapR, {A, B, parse_object("C^ C C")})),
      6);

  // derived crossing equations
  add("sym_down_entry",
      bgen(K::EntryDR, {B, A}),
      comp(comp(sym(br1(B), A), bgen(K::EntryDL, {A, B})),
           bracketed(sym(A, B))),
      6);
  add("sym_down_exit",
      bgen(K::ExitDR, {B, A}),
      comp(comp(bracketed(sym(B, A)), bgen(K::ExitDL, {A, B})),
           sym(A, br1(B))),
      4);

  // interchange law for cups and crossings, for five inner generators
  {
    struct Inner { const char* n; Term u; ObjectExpr z0, z1; };
    std::vector<Inner> inners = {
        {"box", f, A, B},
        {"dual_box", dual(g), parse_object("C^"), parse_object("B^")},
        {"sym", sym(A, B), parse_object("A B"), parse_object("B A")},
        {"bracket", bracketed(f), parse_object("[A]"), parse_object("[B]")},
        {"pair", tens(f, dual(f)), parse_object("A B^"),
         parse_object("B A^")},
    };
    for (const Inner& in : inners) {
      add(std::string("cup_interchange_") + in.n,
          comp(tens(id(br1(parse_object("A B"))),
                    bracketed(tens(id(parse_object("B^")), in.u))),
               bgen(K::CupR, {A, B, in.z1})),
          comp(bgen(K::CupR, {A, B, in.z0}),
               bracketed(tens(id(A), in.u))),
          6);
    }
  }

  // smoothing: the bracket string's own zigzag straightens
  add("smoothing",
      comp(tens(id(br1(parse_object("A B^"))), bgen(K::BubbleCap, {})),
           bgen(K::CupR, {parse_object("A B^"), I, I})),
      id(br1(parse_object("A B^"))),
      5);

  // naturality of the rightward cup in both bracket contents
  add("cup_nat_right",
      comp(tens(bracketed(tens(f, id(B))),
                bracketed(tens(id(parse_object("B^")), g))),
           bgen(K::CupR, {B, B, C})),
      comp(bgen(K::CupR, {A, B, B}), bracketed(tens(f, g))),
      6);

  // symmetry law for the rightward cup
  add("sym_cup",
      bgen(K::CupR, {A, B, C}),
      comp(comp(comp(sym(br1(parse_object("A B")), br1(parse_object("B^ C"))),
                     tens(bracketed(sym(parse_object("B^"), C)),
                          bracketed(sym(A, B)))),
                bgen(K::CupL, {C, B, A})),
           bracketed(sym(C, A))),
      8);

  // helper: the big cup splits through a crossing cup and a merge
  add("big_cup_split",
      bgen(K::CupR, {A, B, C}),
      comp(comp(tens(bgen(K::ExitDR, {A, B}), id(br1(parse_object("B^ C")))),
                tens(id(br1(A)), bgen(K::CupCrossL, {B, C}))),
           bgen(K::CupR, {A, I, C})),
      8);

  // helper: a cap formed outside the bracket and merged in
  add("cap_outside_in",
      comp(tens(id(br1(A)),
                comp(bgen(K::BubbleCap, {}), bgen(K::CapR, {I, B, I}))),
           bgen(K::CupR, {A, I, parse_object("B^ B")})),
      bgen(K::CapR, {A, B, I}),
      4);

  return ds;
}

}  // namespace bracket
