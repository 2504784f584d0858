#include <doctest.h>

#include "dedukt/formula.hpp"
#include "dedukt/model.hpp"
#include "dedukt/presets.hpp"
#include "test_util.hpp"

using namespace dedukt;

namespace {

Signature dy_base() { return load_preset("DY").base_signature(); }

Signature pq_sig() {
  Signature s;
  s.declare("p", 0);
  s.declare("q", 0);
  s.declare("recv", 1);
  s.declare("m", 0);
  return s;
}

}  // namespace

TEST_CASE("parsing the modal operators") {
  Signature sig = dy_base();
  Formula f = parse_formula("X has(m)", sig, 1);
  REQUIRE(f.kind() == Formula::Kind::XKnow);
  CHECK(f.agent() == 1);
  CHECK(f.child().kind() == Formula::Kind::Atom);

  Formula g = parse_formula("K2 Ob2(recv(m))", sig, 2);
  REQUIRE(g.kind() == Formula::Kind::Know);
  CHECK(g.agent() == 2);
  REQUIRE(g.child().kind() == Formula::Kind::Obs);
  CHECK(g.child().agent() == 2);
  CHECK(to_string(g.child().term()) == "recv(m)");
}

TEST_CASE("disjunction and implication are abbreviations") {
  Signature sig = pq_sig();
  Formula p = Formula::atom(Term::make("p"));
  Formula q = Formula::atom(Term::make("q"));
  CHECK(parse_formula("p | q", sig, 1) ==
        Formula::negate(Formula::conj(Formula::negate(p), Formula::negate(q))));
  CHECK(parse_formula("p => q", sig, 1) == Formula::implies(p, q));
  // right associativity
  CHECK(parse_formula("p => q => p", sig, 1) ==
        Formula::implies(p, Formula::implies(q, p)));
}

TEST_CASE("the true literal is a fixed tautology") {
  Signature sig = pq_sig();  // lexicographically first constant: m
  Formula t = parse_formula("true", sig, 1);
  Formula m = Formula::atom(Term::make("m"));
  CHECK(t == Formula::negate(Formula::conj(m, Formula::negate(m))));
  CHECK(parse_formula("false", sig, 1) == Formula::negate(t));

  Signature none;
  none.declare("f", 1);
  CHECK_THROWS_AS(parse_formula("true", none, 1), ValidationError);
}

TEST_CASE("parser rejections") {
  Signature sig = dy_base();
  CHECK_THROWS_AS(parse_formula("L has(m)", sig, 1), ParseError);
  CHECK_THROWS_AS(parse_formula("K2 has(m)", sig, 1), ParseError);  // range
  CHECK_THROWS_AS(parse_formula("Ob(has(?x))", sig, 1), ParseError);  // ground
  CHECK_THROWS_AS(parse_formula("has(?x)", sig, 1), ParseError);
  CHECK_THROWS_AS(parse_formula("p & ", sig, 1), ParseError);
  CHECK_THROWS_AS(parse_formula("nosuch(m)", sig, 1), ParseError);
}

TEST_CASE("formula-to-term translation") {
  Signature sig = dy_base();
  CHECK(to_string(to_term(parse_formula("K has(m)", sig, 1), 1)) ==
        "know(has(m))");
  CHECK(to_string(to_term(parse_formula("X Ob(has(m))", sig, 1), 1)) ==
        "xknow(ob(has(m)))");
  CHECK(to_string(to_term(parse_formula("!(has(m) & has(k1))", sig, 1), 1)) ==
        "not(and(has(m),has(k1)))");
  // agent-indexed constructors
  CHECK(to_string(to_term(parse_formula("X2 has(m)", sig, 2), 2)) ==
        "xknow2(has(m))");
  CHECK_THROWS_AS(to_term(Formula::dual(1, Formula::atom(Term::make("m"))), 1),
                  ValidationError);
}

TEST_CASE("term-to-formula translation") {
  Signature base = dy_base();
  Signature full = extend_kd(base, 1);

  Formula f = from_term(parse_term("xknow(has(m))", full), base, 1);
  CHECK(f == Formula::xknow(1, Formula::atom(parse_term("has(m)", base))));

  // plain base terms stay atoms
  Term atom = parse_term("has(m)", base);
  CHECK(from_term(atom, base, 1) == Formula::atom(atom));

  // logical constructors under a base constructor stay untranslated
  Term nested = parse_term("recv(know(m))", full);
  Formula g = from_term(nested, base, 1);
  REQUIRE(g.kind() == Formula::Kind::Atom);
  CHECK(g.term() == nested);

  // observation of a non-base term is a translation error
  CHECK_THROWS_AS(from_term(parse_term("ob(know(m))", full), base, 1),
                  ValidationError);

  // the observation clause accepts patterns with variables
  Formula h = from_term(parse_term("ob(recv(?t))", full), base, 1);
  REQUIRE(h.kind() == Formula::Kind::Obs);
  CHECK(to_string(h.term()) == "recv(?t)");
}

TEST_CASE("round trips") {
  testutil::Rng rng(1312);
  for (int i = 0; i < 500; ++i) {
    Signature base = testutil::gen_signature(rng);
    int agents = testutil::pick_int(rng, 1, 3);
    Formula f = testutil::gen_formula(rng, base, agents, 4);

    // parse . print = id
    CHECK(parse_formula(print_formula(f), base, agents) == f);

    // from_term . to_term = id
    Term t = to_term(f, agents);
    CHECK(t.is_ground());
    validate_term(t, extend_kd(base, agents));
    CHECK(from_term(t, base, agents) == f);
  }
}

TEST_CASE("base ground terms survive the double translation") {
  testutil::Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    Signature base = testutil::gen_signature(rng);
    Term t = testutil::gen_ground_term(rng, base, 3);
    CHECK(to_term(from_term(t, base, 1), 1) == t);
    CHECK(to_term(Formula::atom(t), 1) == t);
  }
}

TEST_CASE("negation normal form laws") {
  Signature sig = pq_sig();
  Formula p = Formula::atom(Term::make("p"));

  CHECK(nnf(parse_formula("!K p", sig, 1)) ==
        Formula::dual(1, Formula::negate(p)));
  CHECK(nnf(parse_formula("!!p", sig, 1)) == p);

  Formula f = nnf(parse_formula("!(p & X q)", sig, 1));
  auto d = as_disjunction(f);
  REQUIRE(d.has_value());
  CHECK(d->first == Formula::negate(p));
  CHECK(d->second ==
        Formula::negate(Formula::xknow(1, Formula::atom(Term::make("q")))));
  CHECK(print_formula(f) == "!p | !X q");
}

TEST_CASE("nnf output shape and equivalence on random inputs") {
  testutil::Rng rng(31337);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    testutil::StructureOptions opt;
    opt.agents = testutil::pick_int(rng, 1, 2);
    Structure m = testutil::gen_structure(rng, opt);
    Formula f = testutil::gen_formula(rng, m.base_signature(), m.agents(), 4);
    Formula n = nnf(f);
    CHECK(nnf_shape_ok(n));
    int s = testutil::pick_int(rng, 0, static_cast<int>(m.states().size()) - 1);
    ModelChecker checker(m);
    CHECK(checker.check(s, f) == checker.check(s, n));
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("top-level X polarity") {
  Signature sig = pq_sig();
  CHECK(top_level_x_positive(parse_formula("X p", sig, 1)));
  CHECK_FALSE(top_level_x_positive(parse_formula("!X p", sig, 1)));
  CHECK(top_level_x_positive(parse_formula("!!X(!X p)", sig, 1)));
  // the implication antecedent is negative
  CHECK_FALSE(top_level_x_positive(parse_formula("X p => q", sig, 1)));
  CHECK(top_level_x_positive(parse_formula("q => X p", sig, 1)));
  // K does not flip polarity
  CHECK(top_level_x_positive(parse_formula("K X p", sig, 1)));
}

TEST_CASE("formula sizes count operators and term symbols") {
  Signature sig = pq_sig();
  CHECK(formula_size(parse_formula("p", sig, 1)) == 1);
  CHECK(formula_size(parse_formula("K p", sig, 1)) == 2);
  CHECK(formula_size(parse_formula("Ob(recv(m))", sig, 1)) == 3);
  CHECK(formula_size(parse_formula("p & q", sig, 1)) == 3);
}
