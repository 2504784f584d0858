#pragma once

// Shared random generators for the test suites. Rule generation is
// deliberately restricted to "subterm-bounded" conclusions (every conclusion
// is a premise variable, a ground term, or one constructor over proper
// subpatterns of the premises), so saturation over the local universe decides
// the deduction relation exactly and the soundness suites test the semantics,
// not the incompleteness of a search bound.

#include <random>
#include <string>
#include <vector>

#include "dedukt/deduction.hpp"
#include "dedukt/formula.hpp"
#include "dedukt/model.hpp"
#include "dedukt/rules.hpp"
#include "dedukt/term.hpp"

namespace testutil {

using Rng = std::mt19937_64;
using namespace dedukt;

inline int pick_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[pick_int(rng, 0, static_cast<int>(v.size()) - 1)];
}

inline Signature gen_signature(Rng& rng, int max_symbols = 6) {
  Signature sig;
  int n = pick_int(rng, 2, max_symbols);
  int constants = std::max(1, pick_int(rng, 1, n - 1));
  for (int i = 0; i < constants; ++i) sig.declare("c" + std::to_string(i), 0);
  for (int i = constants; i < n; ++i)
    sig.declare("f" + std::to_string(i), pick_int(rng, 1, 2));
  return sig;
}

inline Term gen_ground_term(Rng& rng, const Signature& sig, int depth) {
  std::vector<std::pair<std::string, int>> options;
  for (const auto& [name, arity] : sig.declarations())
    if (depth > 0 || arity == 0) options.emplace_back(name, arity);
  // every generated signature has a constant, so depth 0 always has options
  auto [name, arity] = pick(rng, options);
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i)
    args.push_back(gen_ground_term(rng, sig, depth - 1));
  return Term::make(name, std::move(args));
}

inline Term gen_pattern(Rng& rng, const Signature& sig,
                        const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || coin(rng, 0.3)) {
    if (coin(rng, 0.6)) return Term::variable(pick(rng, vars));
    return gen_ground_term(rng, sig, 0);
  }
  std::vector<std::pair<std::string, int>> options;
  for (const auto& [name, arity] : sig.declarations())
    if (arity > 0) options.emplace_back(name, arity);
  if (options.empty()) return gen_ground_term(rng, sig, 0);
  auto [name, arity] = pick(rng, options);
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i)
    args.push_back(gen_pattern(rng, sig, vars, depth - 1));
  return Term::make(name, std::move(args));
}

inline std::vector<Term> proper_subterms_of(const std::vector<Term>& terms) {
  std::vector<Term> out;
  for (const Term& t : terms)
    for (const Term& s : subterm_set(t))
      if (!(s == t)) out.push_back(s);
  return out;
}

/// One rule with a subterm-bounded conclusion, possibly reading observations.
inline Rule gen_rule(Rng& rng, const Signature& base, const Signature& full,
                     int agents) {
  std::vector<std::string> vars = {"x", "y"};
  int premise_count = pick_int(rng, 1, 2);
  std::vector<Term> premises;
  for (int i = 0; i < premise_count; ++i) {
    Term p = gen_pattern(rng, base, vars, pick_int(rng, 1, 2));
    if (coin(rng, 0.4)) {
      int agent = pick_int(rng, 1, agents);
      p = Term::make(kd_name("ob", agent, agents), {p});
    }
    premises.push_back(std::move(p));
  }

  std::vector<Term> pieces = proper_subterms_of(premises);
  std::vector<Term> var_pieces;
  for (const Term& p : pieces)
    if (p.is_variable()) var_pieces.push_back(p);

  Term conclusion = gen_ground_term(rng, base, 1);
  int mode = pick_int(rng, 0, 2);
  if (mode == 0 && !var_pieces.empty()) {
    conclusion = pick(rng, var_pieces);
  } else if (mode == 1) {
    std::vector<std::pair<std::string, int>> constructors;
    for (const auto& [name, arity] : base.declarations())
      if (arity > 0) constructors.emplace_back(name, arity);
    if (!constructors.empty()) {
      auto [name, arity] = pick(rng, constructors);
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) {
        if (!pieces.empty() && coin(rng, 0.7))
          args.push_back(pick(rng, pieces));
        else
          args.push_back(gen_ground_term(rng, base, 0));
      }
      conclusion = Term::make(name, std::move(args));
    }
  }
  (void)full;
  return Rule{std::move(premises), std::move(conclusion)};
}

inline DeductiveSystem gen_system(Rng& rng, Signature base, int agents,
                                  int max_rules = 8) {
  Signature full = extend_kd(base, agents);
  std::vector<Rule> rules;
  int n = pick_int(rng, 1, max_rules);
  for (int i = 0; i < n; ++i) rules.push_back(gen_rule(rng, base, full, agents));
  return DeductiveSystem(std::move(base), std::move(rules), agents);
}

inline Formula gen_formula(Rng& rng, const Signature& base, int agents,
                           int depth) {
  if (depth == 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.3))
      return Formula::obs(pick_int(rng, 1, agents),
                          gen_ground_term(rng, base, 1));
    return Formula::atom(gen_ground_term(rng, base, 1));
  }
  switch (pick_int(rng, 0, 5)) {
    case 0:
      return Formula::negate(gen_formula(rng, base, agents, depth - 1));
    case 1:
      return Formula::conj(gen_formula(rng, base, agents, depth - 1),
                           gen_formula(rng, base, agents, depth - 1));
    case 2:
      return Formula::disj(gen_formula(rng, base, agents, depth - 1),
                           gen_formula(rng, base, agents, depth - 1));
    case 3:
      return Formula::know(pick_int(rng, 1, agents),
                           gen_formula(rng, base, agents, depth - 1));
    case 4:
      return Formula::xknow(pick_int(rng, 1, agents),
                            gen_formula(rng, base, agents, depth - 1));
    default:
      return Formula::implies(gen_formula(rng, base, agents, depth - 1),
                              gen_formula(rng, base, agents, depth - 1));
  }
}

struct StructureOptions {
  int max_states = 5;
  int max_obs = 4;
  int max_rules = 8;
  int agents = 1;
};

inline Structure gen_structure(Rng& rng, const StructureOptions& opt = {}) {
  Signature base = gen_signature(rng);
  std::vector<DeductiveSystem> systems;
  for (int i = 0; i < opt.agents; ++i)
    systems.push_back(gen_system(rng, base, opt.agents, opt.max_rules));

  std::vector<Term> term_pool;
  for (int i = 0; i < 10; ++i) term_pool.push_back(gen_ground_term(rng, base, 2));

  std::vector<ModelState> states;
  int k = pick_int(rng, 1, opt.max_states);
  for (int s = 0; s < k; ++s) {
    ModelState st;
    st.name = "s" + std::to_string(s + 1);
    st.env = st.name;
    for (int a = 0; a < opt.agents; ++a) {
      TermSet obs;
      int m = pick_int(rng, 0, opt.max_obs);
      for (int i = 0; i < m; ++i) obs.insert(pick(rng, term_pool));
      st.obs.push_back(std::move(obs));
    }
    for (const Term& t : term_pool)
      if (coin(rng)) st.trueset.insert(t);
    states.push_back(std::move(st));
  }
  return Structure(std::move(systems), std::move(states));
}

}  // namespace testutil
