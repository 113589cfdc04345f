#include <catch2/catch_amalgamated.hpp>

#include "bracket/model_search.hpp"
#include "bracket/models.hpp"
#include "bracket/normalize.hpp"
#include "bracket/term_parser.hpp"

using namespace bracket;

namespace {

Signature plain_sig() { return parse_signature("sorts A B C E;"); }

Interpretation sizes(const std::vector<std::pair<const char*, int>>& xs) {
  Interpretation i;
  for (auto& [n, k] : xs) i.sort_size[n] = k;
  return i;
}

bool is_identity(const ModelMorphism& m) {
  for (std::size_t i = 0; i < m.table.size(); ++i)
    if (m.table[i] != static_cast<int>(i)) return false;
  return true;
}

bool is_permutation(const ModelMorphism& m) {
  std::vector<bool> seen(m.table.size(), false);
  for (int v : m.table) {
    if (v < 0 || v >= static_cast<int>(seen.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

bool has_reflected_kind(const Term& t) {
  switch (t->tag) {
    case TK::Comp:
    case TK::Tensor:
      return has_reflected_kind(t->a) || has_reflected_kind(t->b);
    case TK::Bracketed:
    case TK::Dual:
      return has_reflected_kind(t->a);
    case TK::BracketGen:
      switch (t->kind) {
        case BracketGenKind::EntryDR:
        case BracketGenKind::ExitDR:
        case BracketGenKind::EntryUR:
        case BracketGenKind::ExitUR:
        case BracketGenKind::CupCrossR:
        case BracketGenKind::CapL:
        case BracketGenKind::CupL:
          return true;
        default:
          return false;
      }
    default:
      return false;
  }
}

}  // namespace

TEST_CASE("normaliser terms have the right shape") {
  CHECK(normaliser_term(parse_object("I")).term->tag == TK::Id);
  CHECK(normaliser_term(parse_object("[A^ B]")).term->tag == TK::Id);
  Signature sig = plain_sig();
  for (const char* s :
       {"[B A^]", "[C [E A^]^ B]", "A [B A^]", "[[B A^] C^]", "[I] [B A^]"}) {
    INFO(s);
    ObjectExpr o = parse_object(s);
    MorphType m = typecheck(sig, normaliser_term(o).term);
    CHECK(m.dom == o);
    CHECK(m.cod == normal_form(o));
    MorphType mi = typecheck(sig, normaliser_inverse(o).term);
    CHECK(mi.dom == normal_form(o));
    CHECK(mi.cod == o);
  }
}

TEST_CASE("normaliser is a semantic bijection") {
  Signature sig = plain_sig();
  for (const char* s : {"[B A^]", "[C [E A^]^ B]", "A [B A^]"}) {
    INFO(s);
    ObjectExpr o = parse_object(s);
    Term nu = normaliser_term(o).term;
    Term nui = normaliser_inverse(o).term;
    for (ModelKind k : {ModelKind::FinSet, ModelKind::Pointed}) {
      Semantics sem(sig, k, sizes({{"A", 2}, {"B", 2}, {"C", 2}, {"E", 2}}));
      CHECK(is_permutation(sem.tabulate(nu)));
      CHECK(is_identity(sem.tabulate(comp(nu, nui))));
      CHECK(is_identity(sem.tabulate(comp(nui, nu))));
    }
  }
}

TEST_CASE("unreflect removes mirrored generators") {
  Signature sig = plain_sig();
  std::vector<
      std::pair<const char*, std::vector<std::pair<const char*, int>>>>
      cases = {
          {"entry_dr{B A^; C}", {{"A", 2}, {"B", 2}, {"C", 2}}},
          {"exit_dr{B; A}", {{"A", 2}, {"B", 2}}},
          {"cup_cross_r{B; A}", {{"A", 2}, {"B", 2}}},
          {"cap_l{A^; B; C}", {{"A", 2}, {"B", 2}, {"C", 2}}},
          {"cup_l{A^; B; C}", {{"A", 2}, {"B", 2}, {"C", 2}}},
          {"entry_ur{A; C^ E; B; A}", {{"A", 1}, {"B", 1}, {"C", 2}, {"E", 2}}},
          {"exit_ur{A^; C^ E; B; A^}",
           {{"A", 1}, {"B", 1}, {"C", 2}, {"E", 2}}},
      };
  for (auto& [s, sz] : cases) {
    INFO(s);
    Term t = parse_term(s);
    Term u = unreflect(t);
    CHECK_FALSE(has_reflected_kind(u));
    MorphType mt = typecheck(sig, t);
    CHECK(typecheck(sig, u) == mt);
    for (ModelKind k : {ModelKind::FinSet, ModelKind::Pointed}) {
      Semantics sem(sig, k, sizes(sz));
      CHECK(sem.tabulate(bracketed(t)) == sem.tabulate(bracketed(u)));
    }
  }
}

TEST_CASE("normalised term recognition") {
  CHECK(is_normalised_term(parse_term("cup_cross_l{A; A^ B}")));
  CHECK(is_normalised_term(parse_term("eta{A; B} ; [id{A^} * eps{A; B}]")));
  CHECK_FALSE(is_normalised_term(parse_term("cup_cross_l{A; B A^}")));
  CHECK_FALSE(is_normalised_term(parse_term("entry_dl{A; B}")));
  CHECK_FALSE(is_normalised_term(parse_term("id{[B A^]}")));
  CHECK(is_normalised_term(parse_term("id{[A^ B]} ; [sym{A^, B}]")));
}

TEST_CASE("normalisation functor output") {
  Signature sig =
      parse_signature("sorts A B C E; gen f : A -> [B A^]; gen g : A -> B;");
  std::vector<const char*> corpus = {
      "entry_dl{A; B A^}",
      "exit_dl{A; B}",
      "entry_dr{B A^; C}",
      "cup_cross_l{A; B A^}",
      "cup_cross_r{B A^; A}",
      "cap_l{B A^; C; E}",
      "cup_r{B A^; C; E}",
      "cap_r{B A^; C; E}",
      "f",
      "f ; [sym{B, A^}]",
      "g * id{[B A^]}",
      "[sym{B, A^} ; sym{A^, B}]",
      "dual(g)",
      "eta{A; [B A^]}",
  };
  for (const char* s : corpus) {
    INFO(s);
    Term t = parse_term(s);
    Term n = normalize_functor(sig, t);
    CHECK(is_normalised_term(n));
    MorphType mt = typecheck(sig, t);
    MorphType mn = typecheck(sig, n);
    CHECK(mn.dom == normal_form(mt.dom));
    CHECK(mn.cod == normal_form(mt.cod));
  }
}

TEST_CASE("normalisation functor fixes normalised terms") {
  Signature sig = parse_signature("sorts A B C E; gen g : A -> B;");
  for (const char* s :
       {"entry_dr{A^ B; C}", "cup_cross_l{A; B}", "exit_ul{A^; B; C; E}",
        "eta{A; B}", "id{[A^ B]}", "g ; id{B}", "cup_r{A^; B; C}"}) {
    INFO(s);
    Term t = parse_term(s);
    CHECK(term_eq(normalize_functor(sig, t), t));
  }
}

TEST_CASE("normaliser naturality") {
  Signature sig = parse_signature("sorts A B C E; gen f : A -> [B A^];");
  std::vector<
      std::pair<const char*, std::vector<std::pair<const char*, int>>>>
      cases = {
          {"entry_dl{A; B A^}", {{"A", 2}, {"B", 2}}},
          {"exit_dr{B; A}", {{"A", 2}, {"B", 2}}},
          {"cup_cross_l{A; B A^}", {{"A", 2}, {"B", 2}}},
          {"cap_l{B A^; C; E}", {{"A", 1}, {"B", 2}, {"C", 2}, {"E", 2}}},
          {"cup_r{B A^; C; E}", {{"A", 1}, {"B", 2}, {"C", 2}, {"E", 2}}},
          {"entry_ul{A; B; C; E}", {{"A", 1}, {"B", 1}, {"C", 2}, {"E", 2}}},
          {"exit_ul{A^ B; C; E; I}", {{"A", 1}, {"B", 1}, {"C", 2}, {"E", 2}}},
      };
  for (auto& [s, sz] : cases) {
    INFO(s);
    Term t = parse_term(s);
    MorphType m = typecheck(sig, t);
    Term lhs = comp(normaliser_term(m.dom).term, normalize_functor(sig, t));
    Term rhs = comp(t, normaliser_term(m.cod).term);
    for (ModelKind k : {ModelKind::FinSet, ModelKind::Pointed}) {
      Semantics sem(sig, k, sizes(sz));
      CHECK(sem.tabulate(bracketed(lhs)) == sem.tabulate(bracketed(rhs)));
    }
  }
  // a signature symbol with a non-normal codomain, over every assignment
  Term f = parse_term("f");
  MorphType m = typecheck(sig, f);
  Term lhs = comp(normaliser_term(m.dom).term, normalize_functor(sig, f));
  Term rhs = comp(f, normaliser_term(m.cod).term);
  for (ModelKind k : {ModelKind::FinSet, ModelKind::Pointed}) {
    ModelFamily fam{k, {2}, 200};
    CHECK(agree_on_family(sig, lhs, rhs, fam));
  }
}
