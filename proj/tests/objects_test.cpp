#include <catch2/catch_amalgamated.hpp>

#include "bracket/objects.hpp"
#include "bracket/signature.hpp"
#include "bracket/term_parser.hpp"
#include "bracket/terms.hpp"

using namespace bracket;

TEST_CASE("object parse and print round-trip") {
  CHECK(parse_object("I").is_unit());
  CHECK(print_object(parse_object("A [B^ C]")) == "A [B^ C]");
  CHECK(print_object(parse_object("[[A^ B]^ C]")) == "[[A^ B]^ C]");
  CHECK(print_object(parse_object("  A   I  B ")) == "A B");
  CHECK(print_object(parse_object("( X^ ) ( Y^ ) Z")) == "X^ Y^ Z");
  CHECK(print_object(parse_object("(A B)^")) == "B^ A^");
  CHECK_THROWS_AS(parse_object("[A"), ParseError);
  CHECK_THROWS_AS(parse_object("A]"), ParseError);
}

TEST_CASE("object structure") {
  ObjectExpr o = parse_object("A [B^ C]");
  REQUIRE(o.strands.size() == 2);
  CHECK(o.strands[0].sort == "A");
  CHECK(o.strands[0].pol == Polarity::Down);
  REQUIRE(o.strands[1].is_bracket);
  CHECK(o.strands[1].inner[0].pol == Polarity::Up);
  CHECK(o.strands[1].inner[0].sort == "B");
}

TEST_CASE("dual of objects") {
  CHECK(dual_object(parse_object("I")).is_unit());
  CHECK(print_object(dual_object(parse_object("A B"))) == "B^ A^");
  CHECK(print_object(dual_object(parse_object("[A^ B]"))) == "[B^ A]^");
  ObjectExpr samples[] = {
      parse_object("A"), parse_object("A^ B"), parse_object("[A^ B] C"),
      parse_object("[[A B^]^ C] D^"), parse_object("[I]")};
  for (const auto& o : samples)
    CHECK(dual_object(dual_object(o)) == o);
}

TEST_CASE("normal form") {
  CHECK(print_object(normal_form(parse_object("[B A^ C]"))) == "[A^ B C]");
  CHECK(print_object(normal_form(parse_object("[A^ B]"))) == "[A^ B]");
  CHECK(print_object(normal_form(parse_object("[C [D A^]^ B]"))) ==
        "[[A^ D]^ C B]");
  ObjectExpr samples[] = {
      parse_object("[B A^ C]"), parse_object("[C [D A^]^ B]"),
      parse_object("A [B C^] [D]")};
  for (const auto& o : samples) {
    CHECK(normal_form(normal_form(o)) == normal_form(o));
    CHECK(is_normalised(normal_form(o)));
    // dual maps normalised objects to normalised objects
    CHECK(is_normalised(dual_object(normal_form(o))));
  }
  CHECK_FALSE(is_normalised(parse_object("[B A^]")));
}

TEST_CASE("variance") {
  CHECK(variance_class(parse_object("A B")) == Variance::Covariant);
  CHECK(variance_class(parse_object("A^ B")) == Variance::Mixed);
  CHECK(variance_class(parse_object("A^ [B]^")) == Variance::Contravariant);
  CHECK(variance_class(parse_object("I")) == Variance::Covariant);
}

TEST_CASE("signature parsing") {
  Signature sig = parse_signature("sorts A B; gen f : A -> [A^ B];");
  CHECK(sig.sorts.size() == 2);
  CHECK(sig.generators.size() == 1);
  CHECK(print_object(sig.generators[0].coarity) == "[A^ B]");
  CHECK_FALSE(sig.cartesian);
  CHECK_THROWS(parse_signature("sorts A; gen f : A -> B;"));
  Signature sig2 = parse_signature(
      "sorts X Y Z; gen u : X (Y) -> [ (X^) (Y^) Z ];");
  CHECK(print_object(sig2.generators[0].coarity) == "[X^ Y^ Z]");
  Signature sig3 = parse_signature(print_signature(sig));
  CHECK(print_signature(sig3) == print_signature(sig));
  Signature sig4 = parse_signature("sorts A; cartesian;");
  CHECK(sig4.cartesian);
}

TEST_CASE("dual generator") {
  Signature sig =
      parse_signature("sorts A B C; gen f : A B -> [A^ C]; gen g : I -> I;");
  DualGen d = dual_generator(sig, "f");
  CHECK(d.name == "f*");
  CHECK(print_object(d.arity) == "[C^ A]^");
  CHECK(print_object(d.coarity) == "B^ A^");
  DualGen dg = dual_generator(sig, "g");
  CHECK(dg.arity.is_unit());
  CHECK(dg.coarity.is_unit());
  // applying the dual twice yields the original declaration
  CHECK(dual_object(d.coarity) == sig.generators[0].arity);
  CHECK(dual_object(d.arity) == sig.generators[0].coarity);
  CHECK_THROWS(dual_generator(sig, "nope"));
}

TEST_CASE("validate diagnostics") {
  Signature ok = parse_signature("sorts A; gen f : A -> A;");
  CHECK(validate(ok).empty());
  Signature dup;
  dup.sorts = {Sort{"A"}};
  dup.generators = {{"f", parse_object("A"), parse_object("A")},
                    {"f", parse_object("A"), parse_object("A")}};
  auto diags = validate(dup);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == "DuplicateName");
  Signature unk;
  unk.sorts = {Sort{"A"}};
  unk.generators = {{"f", parse_object("B"), parse_object("A")}};
  auto diags2 = validate(unk);
  REQUIRE(diags2.size() == 1);
  CHECK(diags2[0].code == "UnknownSort");
}

static Signature test_sig() {
  return parse_signature(
      "sorts A B C; gen f : A -> B; gen g : B -> C; gen h : A -> [A^ B]; "
      "cartesian;");
}

TEST_CASE("typing of bracket generators") {
  Signature sig = test_sig();
  auto type_of = [&](const std::string& s) {
    MorphType m = typecheck(sig, parse_term(s));
    return print_object(m.dom) + " -> " + print_object(m.cod);
  };
  CHECK(type_of("cup_cross_l{A; B}") == "A [A^ B] -> [B]");
  CHECK(type_of("id{I}") == "I -> I");
  CHECK(type_of("bubble_cap ; bubble_cup") == "I -> I");
  CHECK(type_of("cap_r{I; A; B}") == "[B] -> [A^ A B]");
  CHECK(type_of("bubble_cup") == "[I] -> I");
  CHECK(type_of("entry_dl{A; B^ C}") == "A [B^ C] -> [A B^ C]");
  CHECK(type_of("exit_dl{A; B}") == "[A B] -> A [B]");
  CHECK(type_of("entry_ul{A; B; C^ D; E}") ==
        "[A^ B^ [C^ D] E^] -> [A^ [B^ C^ D] E^]");
  CHECK(type_of("exit_ul{A^ B; C; D; E}") ==
        "[A^ B [C^ D] E] -> [A^ B C^ [D] E]");
  CHECK(type_of("cup_r{A^; B; C}") == "[A^ B] [B^ C] -> [A^ C]");
  CHECK(type_of("entry_dr{A^ B; C}") == "[A^ B] C -> [A^ B C]");
  CHECK(type_of("exit_dr{A; B}") == "[A B] -> [A] B");
  CHECK(type_of("entry_ur{A; B^ C; D; E}") ==
        "[A^ [B^ C] D^ E^] -> [A^ [B^ C D^] E^]");
  CHECK(type_of("exit_ur{A^; B; C; D}") == "[A^ [B C^] D] -> [A^ [B] C^ D]");
  CHECK(type_of("cup_cross_r{A^ B; C}") == "[A^ B C^] C -> [A^ B]");
  CHECK(type_of("cap_l{A^; B; C}") == "[A^ C] -> [A^ B B^ C]");
  CHECK(type_of("cup_l{A^; B; C}") == "[A^ B^] [B C] -> [A^ C]");
  CHECK(type_of("eta{B; A}") == "A -> [B^ B A]");
  CHECK(type_of("eps{B; A}") == "B [B^ A] -> A");
  CHECK(type_of("f") == "A -> B");
  CHECK(type_of("h ; [ id{A^} * g ]") == "A -> [A^ C]");
  CHECK(type_of("copy{A}") == "A -> A A");
  CHECK(type_of("discard{A B}") == "A B -> I");
}

TEST_CASE("typing errors") {
  Signature sig = test_sig();
  CHECK_THROWS_AS(typecheck(sig, parse_term("f ; h ; f")), TypeError);
  CHECK_THROWS_AS(typecheck(sig, parse_term("nope_gen ; f")), TypeError);
  CHECK_THROWS_AS(typecheck(sig, parse_term("cup_cross_l{A}")), TypeError);
  CHECK_THROWS_AS(typecheck(sig, parse_term("cup_cross_l{A^; B}")), TypeError);
  CHECK_THROWS_AS(typecheck_top(sig, parse_term("id{A^ B}")), TypeError);
  CHECK(typecheck(sig, parse_term("id{A^ B}")).layer == Variance::Mixed);
  CHECK(typecheck(sig, parse_term("dual(f)")).layer == Variance::Contravariant);
}

TEST_CASE("dual of terms") {
  Signature sig = test_sig();
  Term f = gen("f");
  CHECK(term_eq(dual_term(id(parse_object("A"))), id(parse_object("A^"))));
  Term c = comp(f, gen("g2"));
  Term dc = dual_term(c);
  REQUIRE(dc->tag == TK::Comp);
  CHECK(dc->a->tag == TK::Dual);
  CHECK(dc->a->a->name == "g2");
  // involution on a mix of constructors
  Term samples[] = {
      parse_term("h ; [ id{A^} * g ]"),
      parse_term("sym{A, B} ; sym{B, A}"),
      parse_term("cup_cross_l{A; B} ; [ f ]"),
      parse_term("dual(f) * id{A}"),
  };
  for (const Term& t : samples)
    CHECK(term_eq(dual_term(dual_term(t)), t));
  // type of the dual is the dual of the type, reversed
  Term t = parse_term("h ; [ id{A^} * g ]");
  MorphType m = typecheck(sig, t);
  MorphType md = typecheck(sig, dual_term(t));
  CHECK(md.dom == dual_object(m.cod));
  CHECK(md.cod == dual_object(m.dom));
}

TEST_CASE("term parser round trip") {
  const char* cases[] = {
      "f ; g",
      "f * g ; h",
      "(f ; g) * h",
      "[ id{A^} * f ]",
      "dual(f)",
      "sym{A, B^ C}",
      "cup_cross_l{A; B} ; [ f ]",
      "eta{B; A} ; [ id{B^} * f ]",
  };
  for (const char* c : cases) {
    Term t = parse_term(c);
    CHECK(term_eq(parse_term(print_term(t)), t));
  }
}
