#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "bracket/decompose.hpp"
#include "bracket/rewrite.hpp"
#include "bracket/term_parser.hpp"

using namespace bracket;

namespace {

Signature abc_sig() {
  return parse_signature("sorts A B C; gen f : A -> B; gen g : B -> C;");
}

Signature abc_cart() {
  return parse_signature(
      "cartesian; sorts A B C; gen f : A -> B; gen g : B -> C;");
}

std::string base_name(const std::string& n) {
  std::string b = n;
  for (const char* suf : {"_mirror_op", "_mirror", "_op"}) {
    std::string s = suf;
    if (b.size() > s.size() && b.compare(b.size() - s.size(), s.size(), s) == 0)
      return b.substr(0, b.size() - s.size());
  }
  return b;
}

// a deterministic small instantiation for a schema's metavariables; with
// tiny=true all but the first object variable collapse to the unit so that
// model carriers stay small
Subst make_inst(const Signature& sig, const EquationSchema& sc,
                std::mt19937& rng, bool tiny = false) {
  Subst su;
  std::string bn = base_name(sc.name);
  std::map<std::string, Term> special;
  if (bn == "interchange")
    special = {{"t1", gen("f")},
               {"t2", gen("g")},
               {"t3", gen("g")},
               {"t4", id(parse_object("C"))}};
  else if (bn == "comp_assoc")
    special = {{"t1", gen("f")}, {"t2", gen("g")}, {"t3", id(parse_object("C"))}};
  else if (bn == "bracket_funct")
    special = {{"t0", gen("f")}, {"t1", gen("g")}};
  for (const MetaVar& v : sc.vars) {
    if (!v.is_term) continue;
    auto it = special.find(v.name);
    if (it != special.end()) {
      su.trm[v.name] = it->second;
    } else if (v.layer == Variance::Covariant) {
      su.trm[v.name] = gen("f");
    } else if (v.layer == Variance::Contravariant) {
      su.trm[v.name] = dual(gen("f"));
    } else {
      su.trm[v.name] = dual(gen("g"));
    }
  }
  if (sc.complete) REQUIRE(sc.complete(sig, su));
  std::vector<ObjectExpr> cov = {parse_object("A"), parse_object("B"),
                                 parse_object("A B"), parse_object("I")};
  std::vector<ObjectExpr> con = {parse_object("A^"), parse_object("B^")};
  std::vector<ObjectExpr> mix = {parse_object("A B^"), parse_object("C^ A")};
  bool first = true;
  for (const MetaVar& v : sc.vars) {
    if (v.is_term || su.obj.count(v.name)) continue;
    if (tiny) {
      if (!first) {
        su.obj[v.name] = ObjectExpr{};
        continue;
      }
      first = false;
      if (v.layer == Variance::Covariant)
        su.obj[v.name] = parse_object("A");
      else if (v.layer == Variance::Contravariant)
        su.obj[v.name] = parse_object("A^");
      else
        su.obj[v.name] = parse_object("A B^");
      continue;
    }
    if (v.layer == Variance::Covariant)
      su.obj[v.name] = cov[rng() % cov.size()];
    else if (v.layer == Variance::Contravariant)
      su.obj[v.name] = con[rng() % con.size()];
    else
      su.obj[v.name] = mix[rng() % mix.size()];
  }
  return su;
}

}  // namespace

TEST_CASE("slice canonicalisation identifies structural variants") {
  Signature sig = abc_sig();
  Term f = gen("f"), g = gen("g");
  ObjectExpr A = parse_object("A"), B = parse_object("B");
  // associativity and unit of composition
  CHECK(au_equal(sig, comp(comp(f, g), id(parse_object("C"))),
                 comp(f, comp(g, id(parse_object("C"))))));
  CHECK(au_equal(sig, comp(id(A), f), f));
  // interchange: sequentialising a tensor in either order
  Term fg = tens(f, g);
  CHECK(au_equal(sig, fg, comp(tens(f, id(B)), tens(id(B), g))));
  CHECK(au_equal(sig, fg, comp(tens(id(A), g), tens(f, id(parse_object("C"))))));
  // unit object and bracketed identity are invisible
  CHECK(au_equal(sig, tens(f, id(ObjectExpr{})), f));
  CHECK(au_equal(sig, tens(f, bracketed(id(B))), tens(f, id(parse_object("[B]")))));
  // not equal to a genuinely different term
  CHECK_FALSE(au_equal(sig, comp(f, g), tens(f, g)));
}

TEST_CASE("axiom schema instances typecheck with equal boundaries") {
  Signature sig = abc_cart();
  auto schemas = close_under_reflection(axiom_schemas(true));
  CHECK(schemas.size() > 60);
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    const EquationSchema& sc = schemas[i];
    std::mt19937 rng(1234 + static_cast<unsigned>(i));
    for (int rep = 0; rep < 3; ++rep) {
      INFO(sc.name << " rep " << rep);
      Subst su = make_inst(sig, sc, rng);
      Term l = subst_term(sc.lhs, su), r = subst_term(sc.rhs, su);
      MorphType ml = typecheck(sig, l), mr = typecheck(sig, r);
      CHECK(ml.dom == mr.dom);
      CHECK(ml.cod == mr.cod);
    }
  }
}

TEST_CASE("axiom schema instances are sound in the models") {
  Signature sig = abc_cart();
  auto schemas = close_under_reflection(axiom_schemas(true));
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    const EquationSchema& sc = schemas[i];
    std::mt19937 rng(99 + static_cast<unsigned>(i));
    Subst su = make_inst(sig, sc, rng, true);
    Term l = subst_term(sc.lhs, su), r = subst_term(sc.rhs, su);
    INFO(sc.name);
    CHECK(agree_on_family(sig, l, r, ModelFamily{ModelKind::FinSet, {2}, 4000}));
    if (sc.family != "comonoid")
      CHECK(agree_on_family(sig, l, r,
                            ModelFamily{ModelKind::Pointed, {2}, 4000}));
  }
}

TEST_CASE("reflection closure adds duals and mirrors") {
  auto base = axiom_schemas(false);
  auto closed = close_under_reflection(base);
  std::set<std::string> names;
  for (const auto& s : closed) names.insert(s.name);
  // the contravariant pop is present
  CHECK(names.count("pop_op") == 1);
  // pop is its own mirror image, so no separate schema appears
  CHECK(names.count("pop_mirror") == 0);
  // the left crossing cup schema acquires a right-handed mirror
  CHECK(names.count("cross_cup_mirror") == 1);
  CHECK(names.count("yank_entry_mirror") == 1);
  // closure is idempotent on the names it generates
  auto twice = close_under_reflection(closed);
  CHECK(twice.size() == closed.size());
}

TEST_CASE("match recovers schema substitutions") {
  Signature sig = abc_sig();
  auto schemas = axiom_schemas(false);
  auto by_name = [&](const std::string& n) -> const EquationSchema& {
    for (const auto& s : schemas)
      if (s.name == n) return s;
    FAIL("schema not found");
    return schemas[0];
  };
  {
    // pattern id_X ; t against id_A ; f
    Term pat = comp(id(detail::OV("X")), gen("?t"));
    Term sub = comp(id(parse_object("A")), gen("f"));
    auto ms = match(sig, pat, sub);
    bool found = false;
    for (const Subst& m : ms)
      if (m.obj.count("X") && m.obj.at("X") == parse_object("A") &&
          m.trm.count("t") && term_eq(m.trm.at("t"), gen("f")))
        found = true;
    CHECK(found);
  }
  {
    // redex with an idle wire alongside and a second occurrence after it
    Term pat = comp(bgen(BracketGenKind::BubbleCap, {}),
                    bgen(BracketGenKind::BubbleCup, {}));
    Term sub = comp(tens(pat, id(parse_object("A"))),
                    tens(id(parse_object("A")), pat));
    CHECK(!match(sig, pat, sub).empty());
  }
  {
    // round trip through a naturality schema with a mixed metavariable
    const EquationSchema& sc = by_name("nat_cap");
    std::mt19937 rng(7);
    Subst su = make_inst(sig, sc, rng);
    Term inst = subst_term(sc.lhs, su);
    auto ms = match(sig, sc.lhs, inst);
    bool found = false;
    for (const Subst& m : ms) {
      if (!m.trm.count("t0") || !m.trm.count("t1")) continue;
      if (au_equal(sig, m.trm.at("t0"), su.trm.at("t0")) &&
          au_equal(sig, m.trm.at("t1"), su.trm.at("t1")))
        found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("rewrite steps replace redexes and preserve boundaries") {
  Signature sig = abc_sig();
  auto schemas = axiom_schemas(false);
  auto by_name = [&](const std::string& n) -> const EquationSchema& {
    for (const auto& s : schemas)
      if (s.name == n) return s;
    FAIL("schema not found");
    return schemas[0];
  };
  {
    Term t = comp(bgen(BracketGenKind::BubbleCap, {}),
                  bgen(BracketGenKind::BubbleCup, {}));
    auto apps = applications(sig, t, {by_name("pop")}, false);
    REQUIRE(!apps.empty());
    CHECK(term_eq(canon_rebuild(canon_form(sig, apps[0].result)),
                  id(ObjectExpr{})));
    // the explicit position interface agrees
    Term r = rewrite_step(sig, t, by_name("pop"), true, apps[0].position);
    CHECK(au_equal(sig, r, id(ObjectExpr{})));
    CHECK_THROWS_AS(rewrite_step(sig, t, by_name("pop"), true, "nowhere"),
                    TypeError);
  }
  {
    // functoriality inside a bracket: [f];[g] -> [f;g]
    Term t = comp(bracketed(gen("f")), bracketed(gen("g")));
    auto apps = applications(sig, t, {by_name("bracket_funct")}, false);
    bool found = false;
    for (const auto& a : apps)
      if (a.l2r && au_equal(sig, a.result, bracketed(comp(gen("f"), gen("g")))))
        found = true;
    CHECK(found);
  }
  {
    // a forward step followed by the backward step restores the term
    Term t = comp(tens(gen("f"), id(parse_object("C"))),
                  sym(parse_object("B"), parse_object("C")));
    auto apps = applications(sig, t, {by_name("sym_nat")}, false);
    REQUIRE(!apps.empty());
    MorphType m0 = typecheck(sig, t);
    for (const auto& a : apps) {
      MorphType m = typecheck(sig, a.result);
      CHECK(m.dom == m0.dom);
      CHECK(m.cod == m0.cod);
    }
    const Application& fwd = apps[0];
    auto back = applications(sig, fwd.result, {by_name("sym_nat")}, false);
    bool restored = false;
    for (const auto& a : back)
      if (a.l2r != fwd.l2r && au_equal(sig, a.result, t)) restored = true;
    CHECK(restored);
  }
}

TEST_CASE("equality procedure on basic pairs") {
  Signature sig = abc_sig();
  auto schemas = close_under_reflection(axiom_schemas(false));
  {
    Term t = comp(bgen(BracketGenKind::BubbleCap, {}),
                  bgen(BracketGenKind::BubbleCup, {}));
    auto r = equal(sig, t, id(ObjectExpr{}), {}, &schemas);
    REQUIRE(r.status == EqStatus::Proven);
    CHECK(r.trace.steps.size() == 1);
    CHECK(replay(sig, r.trace, schemas));
  }
  {
    auto r = equal(sig, id(parse_object("A")), id(parse_object("A")), {},
                   &schemas);
    CHECK(r.status == EqStatus::Proven);
    CHECK(r.trace.steps.empty());
  }
  {
    // symmetry involution
    Term t = comp(sym(parse_object("A"), parse_object("B")),
                  sym(parse_object("B"), parse_object("A")));
    auto r = equal(sig, t, id(parse_object("A B")), {}, &schemas);
    CHECK(r.status == EqStatus::Proven);
  }
  {
    CHECK_THROWS_AS(equal(sig, gen("f"), gen("g"), {}, &schemas), TypeError);
  }
  {
    // an honest inequation: f against f;id is equal, f against another
    // generator composite is refuted
    Signature s2 = parse_signature("sorts A; gen h : A -> A;");
    Term lhs = gen("h");
    Term rhs = comp(gen("h"), gen("h"));
    EqOptions opt;
    opt.max_expansions = 40;
    auto r = equal(s2, lhs, rhs, opt);
    CHECK(r.status == EqStatus::Refuted);
    REQUIRE(r.witness.has_value());
  }
}

TEST_CASE("triple unit composite is refuted in pointed sets only") {
  Signature sig = parse_signature("sorts A;");
  ObjectExpr X = parse_object("A");
  Term v = double_dual_unit(X);
  MorphType mv = typecheck(sig, v);
  ObjectExpr W = word({bracket::bracket(dual_object(mv.cod))});
  Term legs = comp(bracketed(dual(v)),
                   double_dual_unit(word({bracket::bracket(dual_object(X))})));
  MorphType ml = typecheck(sig, legs);
  REQUIRE(ml.dom == W);
  REQUIRE(ml.cod == W);
  EqOptions opt;
  opt.max_expansions = 0;  // go straight to refutation
  opt.families = {ModelFamily{ModelKind::Pointed, {3}, 50000}};
  auto r = equal(sig, legs, id(W), opt);
  REQUIRE(r.status == EqStatus::Refuted);
  // the finite-set models cannot tell the two apart
  CHECK(agree_on_family(sig, bracketed(legs), bracketed(id(W)),
                        ModelFamily{ModelKind::FinSet, {1, 2}, 50000}));
}

TEST_CASE("derived equations hold semantically") {
  DerivedSuite ds = derived_suite();
  for (const DerivedPair& p : ds.pairs) {
    INFO(p.name);
    MorphType ml = typecheck(ds.sig, p.lhs), mr = typecheck(ds.sig, p.rhs);
    CHECK(ml.dom == mr.dom);
    CHECK(ml.cod == mr.cod);
    CHECK(agree_on_family(ds.sig, p.lhs, p.rhs,
                          ModelFamily{ModelKind::FinSet, {2}, 2000}));
    CHECK(agree_on_family(ds.sig, p.lhs, p.rhs,
                          ModelFamily{ModelKind::Pointed, {2}, 2000}));
  }
}

TEST_CASE("derived naturality equations are proved syntactically") {
  DerivedSuite ds = derived_suite();
  auto schemas = close_under_reflection(axiom_schemas(false));
  for (const DerivedPair& p : ds.pairs) {
    if (!p.naturality) continue;
    INFO(p.name);
    EqOptions opt;
    opt.max_steps = 64;
    auto r = equal(ds.sig, p.lhs, p.rhs, opt, &schemas);
    REQUIRE(r.status == EqStatus::Proven);
    CHECK(r.trace.steps.size() <= 64);
    CHECK(replay(ds.sig, r.trace, schemas));
  }
}

TEST_CASE("equality search is deterministic") {
  Signature sig = abc_sig();
  auto schemas = close_under_reflection(axiom_schemas(false));
  Term t = comp(sym(parse_object("A"), parse_object("B")),
                sym(parse_object("B"), parse_object("A")));
  auto r1 = equal(sig, t, id(parse_object("A B")), {}, &schemas);
  EqOptions o2;
  o2.seed = 777;
  o2.workers = 8;
  auto r2 = equal(sig, t, id(parse_object("A B")), o2, &schemas);
  REQUIRE(r1.status == EqStatus::Proven);
  REQUIRE(r2.status == EqStatus::Proven);
  CHECK(trace_text(r1.trace) == trace_text(r2.trace));
  CHECK(trace_json(r1.trace) == trace_json(r2.trace));
}
