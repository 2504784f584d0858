#include <doctest.h>

#include "dedukt/presets.hpp"
#include "dedukt/term.hpp"
#include "test_util.hpp"

using namespace dedukt;

namespace {

Signature dy_base() { return load_preset("DY").base_signature(); }

}  // namespace

TEST_CASE("parse of a pattern term") {
  Signature sig = dy_base();
  Term t = parse_term("has(conc(?x,?y))", sig);
  REQUIRE_FALSE(t.is_variable());
  CHECK(t.symbol() == "has");
  REQUIRE(t.args().size() == 1);
  const Term& c = t.args()[0];
  CHECK(c.symbol() == "conc");
  CHECK(c.args()[0].is_variable());
  CHECK(c.args()[0].symbol() == "x");
  CHECK(c.args()[1].is_variable());
  CHECK_FALSE(t.is_ground());
}

TEST_CASE("parse of a ground term") {
  Signature sig = dy_base();
  Term t = parse_term("encr(m,k1)", sig);
  CHECK(t.is_ground());
  CHECK(t.size() == 3);
  CHECK(to_string(t) == "encr(m,k1)");
}

TEST_CASE("parse errors") {
  Signature sig = dy_base();
  CHECK_THROWS_AS(parse_term("conc(m)", sig), ParseError);        // arity
  CHECK_THROWS_AS(parse_term("nonsense(m)", sig), ParseError);    // unknown
  CHECK_THROWS_AS(parse_term("conc(m,", sig), ParseError);        // syntax
  CHECK_THROWS_AS(parse_term("conc(m,k1) junk", sig), ParseError);
}

TEST_CASE("substitution application") {
  Signature sig = dy_base();
  GroundSubst rho;
  rho.bind("m", parse_term("m", sig));
  CHECK(to_string(rho.apply(parse_term("has(?m)", sig))) == "has(m)");

  GroundSubst rho2;
  rho2.bind("m", parse_term("m", sig));
  rho2.bind("k", parse_term("k1", sig));
  CHECK(to_string(rho2.apply(parse_term("encr(?m,?k)", sig))) == "encr(m,k1)");

  GroundSubst partial;
  partial.bind("a", parse_term("m", sig));
  Term r = partial.apply(parse_term("conc(?a,?b)", sig));
  CHECK(to_string(r) == "conc(m,?b)");
  CHECK_FALSE(r.is_ground());
}

TEST_CASE("non-ground bindings are rejected") {
  GroundSubst rho;
  CHECK_THROWS_AS(rho.bind("x", Term::variable("y")), ValidationError);
}

TEST_CASE("matching decomposes structurally") {
  Signature sig = dy_base();
  auto rho = match(parse_term("has(conc(?a,?b))", sig),
                   parse_term("has(conc(m,k1))", sig));
  REQUIRE(rho.has_value());
  CHECK(to_string(*rho->lookup("a")) == "m");
  CHECK(to_string(*rho->lookup("b")) == "k1");

  CHECK_FALSE(match(parse_term("has(?x)", sig), parse_term("recv(m)", sig)));
}

TEST_CASE("non-linear pattern needs consistent bindings") {
  Signature sig = dy_base();
  Term pattern = parse_term("conc(?x,?x)", sig);
  Term subject = parse_term("conc(m,k1)", sig);

  // independent oracle: try every candidate binding for ?x over the subject's
  // subterms and check that none reproduces the subject
  bool any = false;
  for (const Term& cand : subterm_set(subject)) {
    GroundSubst rho;
    rho.bind("x", cand);
    if (rho.apply(pattern) == subject) any = true;
  }
  CHECK_FALSE(any);
  CHECK_FALSE(match(pattern, subject));

  CHECK(match(pattern, parse_term("conc(m,m)", sig)));
}

TEST_CASE("subterm sets") {
  Signature sig = dy_base();
  TermSet s = subterm_set(parse_term("encr(m,k1)", sig));
  CHECK(s.size() == 3);
  CHECK(s.contains(parse_term("m", sig)));

  CHECK(subterm_set(parse_term("m", sig)).size() == 1);

  // manual walk oracle: has, conc, m, k1
  CHECK(subterm_set(parse_term("has(conc(m,k1))", sig)).size() == 4);
}

TEST_CASE("signature extension and collisions") {
  Signature sig = dy_base();
  Signature full = extend_kd(sig, 1);
  CHECK(full.arity("ob") == 1);
  CHECK(full.arity("xknow") == 1);
  CHECK(full.arity("and") == 2);
  CHECK(full.is_kd_symbol("know"));
  CHECK_FALSE(full.is_kd_symbol("recv"));

  Signature full2 = extend_kd(sig, 2);
  CHECK(full2.arity("ob1") == 1);
  CHECK(full2.arity("know2") == 1);
  CHECK_FALSE(full2.declared("ob"));

  Signature clash;
  clash.declare("know", 1);
  CHECK_THROWS_AS(extend_kd(clash, 1), ValidationError);
}

TEST_CASE("first constant is the lexicographically least") {
  Signature sig = dy_base();  // constants m, k1, k2
  CHECK(sig.first_constant() == std::string("k1"));
  Signature none;
  none.declare("f", 1);
  CHECK_FALSE(none.first_constant().has_value());
}

TEST_CASE("round trip over random terms") {
  testutil::Rng rng(12345);
  for (int i = 0; i < 300; ++i) {
    Signature sig = testutil::gen_signature(rng);
    Term t = testutil::gen_pattern(rng, sig, {"x", "y", "z"}, 3);
    CHECK(parse_term(to_string(t), sig) == t);
  }
}

TEST_CASE("match soundness and completeness on random instances") {
  testutil::Rng rng(777);
  for (int i = 0; i < 300; ++i) {
    Signature sig = testutil::gen_signature(rng);
    Term pattern = testutil::gen_pattern(rng, sig, {"x", "y"}, 3);
    GroundSubst rho;
    rho.bind("x", testutil::gen_ground_term(rng, sig, 2));
    rho.bind("y", testutil::gen_ground_term(rng, sig, 2));
    Term subject = rho.apply(pattern);
    REQUIRE(subject.is_ground());
    auto found = match(pattern, subject);
    REQUIRE(found.has_value());
    // soundness
    CHECK(found->apply(pattern) == subject);
    // agreement on the pattern's variables
    for (const std::string& v : variables_of(pattern))
      CHECK(*found->lookup(v) == *rho.lookup(v));
  }
}

TEST_CASE("sizes add up under substitution") {
  testutil::Rng rng(4242);
  for (int i = 0; i < 200; ++i) {
    Signature sig = testutil::gen_signature(rng);
    Term pattern = testutil::gen_pattern(rng, sig, {"x", "y"}, 3);
    GroundSubst rho;
    rho.bind("x", testutil::gen_ground_term(rng, sig, 2));
    rho.bind("y", testutil::gen_ground_term(rng, sig, 2));
    Term out = rho.apply(pattern);

    // count variable occurrences
    int expected = pattern.size();
    struct Count {
      const GroundSubst& rho;
      int& acc;
      void go(const Term& t) {
        if (t.is_variable()) {
          acc += rho.lookup(t.symbol())->size() - 1;
          return;
        }
        for (const Term& a : t.args()) go(a);
      }
    } c{rho, expected};
    c.go(pattern);
    CHECK(out.size() == expected);
  }
}

TEST_CASE("structural order is total and consistent") {
  testutil::Rng rng(999);
  Signature sig = testutil::gen_signature(rng);
  for (int i = 0; i < 100; ++i) {
    Term a = testutil::gen_ground_term(rng, sig, 2);
    Term b = testutil::gen_ground_term(rng, sig, 2);
    CHECK(((compare(a, b) == 0) == (a == b)));
    CHECK(compare(a, b) == -compare(b, a));
  }
}
