#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dedukt/rules.hpp"
#include "dedukt/term.hpp"

namespace dedukt {

// ---------------------------------------------------------------------------
// Strategies

enum class StrategyKind { Local, Bounded };

/// Local: saturation restricted to the local universe (subterms of the goal,
/// of the premise set, and of the rules). Sound for every system, complete for
/// local ones, polynomial-time. Bounded(g): the universe is expanded g extra
/// constructor layers; honest three-valued verdicts.
struct Strategy {
  StrategyKind kind = StrategyKind::Local;
  int growth = 0;

  static Strategy local() { return {StrategyKind::Local, 0}; }
  static Strategy bounded(int growth) { return {StrategyKind::Bounded, growth}; }
};

/// "local" or "bounded:N".
Strategy parse_strategy(const std::string& text);
std::string to_string(const Strategy& s);

/// Kernel dispatch: the saturation rounds are data-parallel and run under
/// OpenMP by default; Serial runs the same kernel on one thread. Verdicts,
/// derived sets and traces are identical either way.
enum class Exec { Serial, Parallel };

// ---------------------------------------------------------------------------
// Deductions

/// A replayable deduction: ordered ground steps, each one either a
/// substitution instance of a premise-set member or a rule application whose
/// premises point at strictly earlier steps.
struct Deduction {
  struct Step {
    Term term;
    bool from_gamma;
    int source;                  // index into gamma, or rule index
    GroundSubst subst;
    std::vector<int> premises;   // step indices, each < this step's index
    Step(Term t, bool g, int src, GroundSubst s, std::vector<int> prem)
        : term(std::move(t)), from_gamma(g), source(src), subst(std::move(s)),
          premises(std::move(prem)) {}
  };
  std::vector<Step> steps;
};

enum class Verdict { Derivable, NotDerivable, Unknown };
std::string to_string(Verdict v);

struct DeriveResult {
  Verdict verdict;
  std::optional<Deduction> deduction;  // engaged iff Derivable
};

// ---------------------------------------------------------------------------
// Operations

/// Decide gamma |-_D goal. Local is complete for local systems and never
/// returns Unknown. Bounded(g) returns Derivable when the goal is reached,
/// NotDerivable when saturation closed without ever hitting the universe
/// boundary (the closure is then exact), and Unknown otherwise.
DeriveResult derive(const DeductiveSystem& d, const std::vector<Term>& gamma,
                    const Term& goal, Strategy strategy = Strategy::local(),
                    Exec exec = Exec::Parallel);

/// Least fixed point of rule application: instantiations are drawn from the
/// subterm closure of `universe` (plus ground subterms of gamma), and a term
/// may be derived when all of its proper subterms lie in that base.
TermSet closure(const DeductiveSystem& d, const std::vector<Term>& gamma,
                const TermSet& universe, Exec exec = Exec::Parallel);

/// Straightforward fixpoint with no delta tracking and no parallelism; the
/// reference the optimized kernel is tested against.
TermSet closure_reference(const DeductiveSystem& d, const std::vector<Term>& gamma,
                          const TermSet& universe);

/// True iff every step is a gamma instance or a rule instance with earlier
/// premises. Does not require the last step to be any particular term.
bool check_deduction(const DeductiveSystem& d, const std::vector<Term>& gamma,
                     const Deduction& ded);

/// Test harness helper: derivability from gamma implies derivability from a
/// superset gamma_sup.
bool is_monotone_witness(const DeductiveSystem& d, const std::vector<Term>& gamma,
                         const std::vector<Term>& gamma_sup, const Term& goal,
                         Strategy strategy = Strategy::local());

}  // namespace dedukt
