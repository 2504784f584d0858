#include <doctest.h>

#include "dedukt/deduction.hpp"
#include "dedukt/presets.hpp"
#include "test_util.hpp"

using namespace dedukt;

namespace {

std::vector<Term> terms(const DeductiveSystem& d,
                        const std::vector<std::string>& texts) {
  std::vector<Term> out;
  for (const std::string& t : texts) out.push_back(parse_term(t, d.signature()));
  return out;
}

Term term(const DeductiveSystem& d, const std::string& t) {
  return parse_term(t, d.signature());
}

}  // namespace

TEST_CASE("the standard intercept derivations") {
  DeductiveSystem dy = load_preset("DY");
  auto gamma = terms(dy, {"recv(encr(m,k1))", "recv(encr(inv(k1),k2))",
                          "recv(inv(k2))"});
  Term goal = term(dy, "has(m)");

  DeriveResult r = derive(dy, gamma, goal);
  REQUIRE(r.verdict == Verdict::Derivable);
  REQUIRE(r.deduction.has_value());
  CHECK(check_deduction(dy, gamma, *r.deduction));
  CHECK(r.deduction->steps.back().term == goal);

  // dropping the last intercept breaks the derivation
  auto gamma2 = terms(dy, {"recv(encr(m,k1))", "recv(encr(inv(k1),k2))"});
  CHECK(derive(dy, gamma2, goal).verdict == Verdict::NotDerivable);
}

TEST_CASE("construction of new messages") {
  DeductiveSystem dyc = load_preset("DY_CONSTR");
  auto gamma = terms(dyc, {"recv(encr(m,k1))", "recv(inv(k1))", "recv(k2)"});
  DeriveResult r = derive(dyc, gamma, term(dyc, "constr(encr(m,k2))"));
  REQUIRE(r.verdict == Verdict::Derivable);
  CHECK(check_deduction(dyc, gamma, *r.deduction));
}

TEST_CASE("reflexivity: anything given is derivable") {
  DeductiveSystem dy = load_preset("DY");
  for (const char* text : {"has(m)", "encr(m,k2)", "conc(inv(k1),m)"}) {
    Term t = term(dy, text);
    DeriveResult r = derive(dy, {t}, t);
    REQUIRE(r.verdict == Verdict::Derivable);
    REQUIRE(r.deduction->steps.size() == 1);
    CHECK(r.deduction->steps[0].from_gamma);
  }
  testutil::Rng rng(31);
  Signature base = testutil::gen_signature(rng);
  DeductiveSystem d = testutil::gen_system(rng, base, 1);
  for (int i = 0; i < 50; ++i) {
    Term t = testutil::gen_ground_term(rng, base, 3);
    CHECK(derive(d, {t}, t).verdict == Verdict::Derivable);
  }
}

TEST_CASE("closure saturates within the universe") {
  DeductiveSystem dy = load_preset("DY");
  Term seed = term(dy, "recv(m)");
  TermSet uni = subterm_set(term(dy, "has(m)"));
  for (const Term& s : subterm_set(seed)) uni.insert(s);
  TermSet out = closure(dy, {seed}, uni);
  CHECK(out.contains(term(dy, "has(m)")));
  CHECK(out.contains(seed));

  DeductiveSystem empty(dy.base_signature(), {});
  TermSet out2 = closure(empty, {seed}, uni);
  CHECK(out2.size() == 1);
  CHECK(out2.contains(seed));
}

TEST_CASE("propositional rules derive through double negation") {
  DeductiveSystem b = load_preset("BOOL");
  auto gamma = terms(b, {"p", "not(and(p,not(q)))"});
  TermSet uni;
  for (const Term& g : gamma)
    for (const Term& s : subterm_set(g)) uni.insert(s);
  TermSet out = closure(b, gamma, uni);
  CHECK(out.contains(term(b, "q")));

  // everything follows from a contradiction, including arbitrary goals
  auto contradictory = terms(b, {"p", "not(p)"});
  CHECK(derive(b, contradictory, term(b, "q")).verdict == Verdict::Derivable);
  CHECK(derive(b, contradictory, term(b, "and(q,r)")).verdict ==
        Verdict::Derivable);
}

TEST_CASE("deduction checking rejects tampered traces") {
  DeductiveSystem dy = load_preset("DY");
  auto gamma = terms(dy, {"recv(encr(m,k1))", "recv(inv(k1))"});
  DeriveResult r = derive(dy, gamma, term(dy, "has(m)"));
  REQUIRE(r.verdict == Verdict::Derivable);
  Deduction d = *r.deduction;
  REQUIRE(check_deduction(dy, gamma, d));
  REQUIRE_FALSE(d.steps.back().from_gamma);

  // premise index pointing at the step itself
  Deduction bad1 = d;
  bad1.steps.back().premises[0] = static_cast<int>(bad1.steps.size()) - 1;
  CHECK_FALSE(check_deduction(dy, gamma, bad1));

  // rule index out of range
  Deduction bad2 = d;
  bad2.steps.back().source = 99;
  CHECK_FALSE(check_deduction(dy, gamma, bad2));

  // a term that does not match its justification
  Deduction bad3 = d;
  bad3.steps.back().term = term(dy, "has(k2)");
  CHECK_FALSE(check_deduction(dy, gamma, bad3));
}

TEST_CASE("monotonicity on random supersets") {
  DeductiveSystem dy = load_preset("DY");
  testutil::Rng rng(2024);
  const Signature& base = dy.base_signature();
  for (int i = 0; i < 200; ++i) {
    std::vector<Term> gamma;
    int n = testutil::pick_int(rng, 1, 3);
    for (int j = 0; j < n; ++j)
      gamma.push_back(
          Term::make("recv", {testutil::gen_ground_term(rng, base, 2)}));
    std::vector<Term> sup = gamma;
    for (int j = testutil::pick_int(rng, 1, 2); j > 0; --j)
      sup.push_back(
          Term::make("recv", {testutil::gen_ground_term(rng, base, 2)}));
    Term goal = Term::make("has", {testutil::gen_ground_term(rng, base, 1)});
    CHECK(is_monotone_witness(dy, gamma, sup, goal));
  }
  CHECK_THROWS_AS(is_monotone_witness(dy, {term(dy, "recv(m)")}, {},
                                      term(dy, "has(m)")),
                  ValidationError);
}

TEST_CASE("local and bounded strategies agree on a local system") {
  DeductiveSystem dy = load_preset("DY");
  testutil::Rng rng(555);
  const Signature& base = dy.base_signature();
  for (int i = 0; i < 500; ++i) {
    std::vector<Term> gamma;
    int n = testutil::pick_int(rng, 1, 3);
    for (int j = 0; j < n; ++j)
      gamma.push_back(
          Term::make("recv", {testutil::gen_ground_term(rng, base, 2)}));
    Term goal = Term::make("has", {testutil::gen_ground_term(rng, base, 2)});

    Verdict local = derive(dy, gamma, goal, Strategy::local()).verdict;
    for (int growth : {0, 1, 2}) {
      Verdict bounded = derive(dy, gamma, goal, Strategy::bounded(growth)).verdict;
      CHECK(local == bounded);
    }
  }
}

TEST_CASE("optimized kernel matches the reference closure") {
  testutil::Rng rng(808);
  for (int i = 0; i < 120; ++i) {
    Signature base = testutil::gen_signature(rng, 5);
    DeductiveSystem d = testutil::gen_system(rng, base, 1, 5);
    std::vector<Term> gamma;
    for (int j = testutil::pick_int(rng, 1, 3); j > 0; --j)
      gamma.push_back(testutil::gen_ground_term(rng, base, 2));
    TermSet uni;
    for (const Term& g : gamma)
      for (const Term& s : subterm_set(g)) uni.insert(s);
    for (int j = 0; j < 2; ++j) {
      Term extra = testutil::gen_ground_term(rng, base, 2);
      for (const Term& s : subterm_set(extra)) uni.insert(s);
    }

    TermSet reference = closure_reference(d, gamma, uni);
    TermSet serial = closure(d, gamma, uni, Exec::Serial);
    TermSet parallel = closure(d, gamma, uni, Exec::Parallel);
    CHECK(reference == serial);
    CHECK(serial == parallel);
  }
}

TEST_CASE("serial and parallel derivations produce identical traces") {
  DeductiveSystem dy = load_preset("DY");
  auto gamma = terms(dy, {"recv(encr(m,k1))", "recv(encr(inv(k1),k2))",
                          "recv(inv(k2))"});
  Term goal = term(dy, "has(m)");
  DeriveResult a = derive(dy, gamma, goal, Strategy::local(), Exec::Serial);
  DeriveResult b = derive(dy, gamma, goal, Strategy::local(), Exec::Parallel);
  REQUIRE(a.verdict == Verdict::Derivable);
  REQUIRE(b.verdict == Verdict::Derivable);
  REQUIRE(a.deduction->steps.size() == b.deduction->steps.size());
  for (std::size_t i = 0; i < a.deduction->steps.size(); ++i) {
    CHECK(a.deduction->steps[i].term == b.deduction->steps[i].term);
    CHECK(a.deduction->steps[i].source == b.deduction->steps[i].source);
  }
}

TEST_CASE("non-ground premise sets generalize cleanly") {
  DeductiveSystem dy = load_preset("DY");
  // a non-ground member stands for all of its ground instances
  Term open = term(dy, "has(?x)");
  CHECK(derive(dy, {open}, term(dy, "has(m)")).verdict == Verdict::Derivable);
  CHECK(derive(dy, {open}, term(dy, "has(encr(m,k1))")).verdict ==
        Verdict::Derivable);
  // instances feed rules once the universe admits them: has(conc(m,m))
  // itself is not local to the goal has(m), one growth step reaches it
  Term open_pair = term(dy, "has(conc(?x,?y))");
  CHECK(derive(dy, {open_pair}, term(dy, "has(m)")).verdict ==
        Verdict::NotDerivable);
  DeriveResult r =
      derive(dy, {open_pair}, term(dy, "has(m)"), Strategy::bounded(1));
  REQUIRE(r.verdict == Verdict::Derivable);
  CHECK(check_deduction(dy, {open_pair}, *r.deduction));
}

TEST_CASE("a goal whose subterms span the chain is locally derivable") {
  Signature base;
  base.declare("a", 0);
  base.declare("f", 1);
  DeductiveSystem grower(
      base, {Rule{{Term::variable("x")}, Term::make("f", {Term::variable("x")})}});
  Term a = Term::make("a");
  Term fffa = Term::make("f", {Term::make("f", {Term::make("f", {a})})});
  // every intermediate f-tower is a subterm of the goal itself
  CHECK(derive(grower, {a}, fffa, Strategy::local()).verdict ==
        Verdict::Derivable);
}

TEST_CASE("bounded verdicts are honest about the boundary") {
  // intermediates above the local universe: a -> g(a) -> g(g(a)) -> win
  Signature base;
  base.declare("a", 0);
  base.declare("g", 1);
  base.declare("win", 0);
  Term x = Term::variable("x");
  DeductiveSystem d(
      base,
      {Rule{{x}, Term::make("g", {x})},
       Rule{{Term::make("g", {Term::make("g", {x})})}, Term::make("win")}});
  Term a = Term::make("a");
  Term win = Term::make("win");

  CHECK(derive(d, {a}, win, Strategy::local()).verdict == Verdict::NotDerivable);
  // growth 0 hits the boundary without closing: honest Unknown
  CHECK(derive(d, {a}, win, Strategy::bounded(0)).verdict == Verdict::Unknown);
  CHECK(derive(d, {a}, win, Strategy::bounded(1)).verdict == Verdict::Derivable);

  // a system that closes without blocking reports certain absence
  DeductiveSystem dy = load_preset("DY");
  CHECK(derive(dy, terms(dy, {"recv(encr(m,k1))"}), term(dy, "has(m)"),
               Strategy::bounded(1))
            .verdict == Verdict::NotDerivable);
}

TEST_CASE("strategy parsing") {
  CHECK(parse_strategy("local").kind == StrategyKind::Local);
  CHECK(parse_strategy("bounded:3").growth == 3);
  CHECK_THROWS_AS(parse_strategy("fancy"), ValidationError);
}
