#include "dedukt/deduction.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace dedukt {

Strategy parse_strategy(const std::string& text) {
  if (text == "local") return Strategy::local();
  if (text.rfind("bounded:", 0) == 0) {
    int g = std::stoi(text.substr(8));
    if (g < 0) throw ValidationError("bounded growth must be >= 0");
    return Strategy::bounded(g);
  }
  throw ValidationError("unknown strategy '" + text + "' (local | bounded:N)");
}

std::string to_string(const Strategy& s) {
  if (s.kind == StrategyKind::Local) return "local";
  return "bounded:" + std::to_string(s.growth);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Derivable: return "derivable";
    case Verdict::NotDerivable: return "not derivable";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Saturation kernel
//
// Derived terms are confined to the universe: a term is admissible at rank r
// when it sits at most r constructor layers above the base set B (rank 0 = a
// member of B). The local strategy admits rank <= 1, which is exactly "every
// proper subterm lies in B" since B is closed under subterms.

struct Prov {
  bool from_gamma;
  int source;
  GroundSubst subst;
  std::vector<Term> premises;
};

struct Candidate {
  Term term;
  Prov prov;
};

class Saturation {
 public:
  Saturation(const DeductiveSystem& d, const std::vector<Term>& gamma,
             const TermSet& base, int max_rank, const Term* goal, Exec exec)
      : d_(d), gamma_(gamma), base_(base), max_rank_(max_rank), goal_(goal),
        exec_(exec) {
    base_sorted_.assign(base_.begin(), base_.end());
    std::sort(base_sorted_.begin(), base_sorted_.end(),
              [](const Term& a, const Term& b) { return compare(a, b) < 0; });
  }

  void run() {
    seed();
    std::size_t old_end = 0;
    bool first_round = true;
    while (true) {
      std::size_t all_end = order_.size();
      if (!first_round && old_end == all_end) break;
      if (goal_found_) break;
      std::vector<Candidate> found =
          round(first_round, old_end, all_end);
      first_round = false;
      old_end = all_end;
      for (Candidate& c : found) add(std::move(c.term), std::move(c.prov));
    }
  }

  bool derived(const Term& t) const { return set_.contains(t); }
  bool blocked() const { return blocked_; }
  const std::vector<Term>& order() const { return order_; }
  const TermSet& derived_set() const { return set_; }

  Deduction reconstruct(const Term& goal) const {
    Deduction out;
    std::unordered_map<Term, int> step_of;
    emit(goal, out, step_of);
    return out;
  }

 private:
  int rank(const Term& t) const {
    if (base_.contains(t)) return 0;
    int worst = 0;
    for (const Term& a : t.args()) worst = std::max(worst, rank(a));
    return worst + 1;
  }

  void add(Term t, Prov prov) {
    if (set_.contains(t)) return;
    if (rank(t) > max_rank_) {
      blocked_ = true;
      return;
    }
    if (goal_ && t == *goal_) goal_found_ = true;
    set_.insert(t);
    head_index_[t.symbol()].push_back(order_.size());
    prov_.emplace(t, std::move(prov));
    order_.push_back(std::move(t));
  }

  void seed() {
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
      if (gamma_[i].is_ground())
        add(gamma_[i], Prov{true, static_cast<int>(i), {}, {}});
    }
  }

  // Candidate terms for variables the premises left unbound. Restricting the
  // pool flags the run as truncated; see the strategy contract.
  std::vector<Term> instantiation_pool(std::size_t k_end) const {
    std::vector<Term> pool = base_sorted_;
    for (std::size_t i = 0; i < k_end; ++i) pool.push_back(order_[i]);
    if (goal_) pool.push_back(*goal_);
    return pool;
  }

  // Matching candidates for one premise pattern among derived terms with
  // indices in [lo, hi).
  void for_matches(const Term& pattern, std::size_t lo, std::size_t hi,
                   const GroundSubst& bound,
                   const std::function<void(const Term&, const GroundSubst&)>& fn) const {
    auto consider = [&](const Term& t) {
      GroundSubst acc = bound;
      if (match_into(pattern, t, acc)) fn(t, acc);
    };
    if (pattern.is_variable()) {
      for (std::size_t i = lo; i < hi; ++i) consider(order_[i]);
      return;
    }
    auto it = head_index_.find(pattern.symbol());
    if (it == head_index_.end()) return;
    const auto& idxs = it->second;
    auto first = std::lower_bound(idxs.begin(), idxs.end(), lo);
    for (auto p = first; p != idxs.end() && *p < hi; ++p) consider(order_[*p]);
  }

  // Completes a partially bound rule: binds remaining premise slots from the
  // allowed index ranges, then instantiates the conclusion.
  void extend(const Rule& rule, int rule_idx, std::size_t slot,
              std::size_t designated, std::size_t old_end, std::size_t all_end,
              const GroundSubst& bound, std::vector<Term>& premise_terms,
              std::vector<Candidate>& out, bool& saw_free_vars,
              const std::vector<Term>& pool) const {
    if (slot == rule.premises.size()) {
      finalize(rule, rule_idx, bound, premise_terms, out, saw_free_vars, pool);
      return;
    }
    if (slot == designated) {  // already bound by the caller
      extend(rule, rule_idx, slot + 1, designated, old_end, all_end, bound,
             premise_terms, out, saw_free_vars, pool);
      return;
    }
    std::size_t lo = 0;
    std::size_t hi = slot < designated ? old_end : all_end;
    for_matches(rule.premises[slot], lo, hi, bound,
                [&](const Term& t, const GroundSubst& acc) {
                  premise_terms[slot] = t;
                  extend(rule, rule_idx, slot + 1, designated, old_end, all_end,
                         acc, premise_terms, out, saw_free_vars, pool);
                });
  }

  void finalize(const Rule& rule, int rule_idx, const GroundSubst& bound,
                const std::vector<Term>& premise_terms,
                std::vector<Candidate>& out, bool& saw_free_vars,
                const std::vector<Term>& pool) const {
    std::vector<std::string> free;
    for (const std::string& v : variables_of(rule.conclusion))
      if (!bound.lookup(v)) free.push_back(v);
    if (free.empty()) {
      out.push_back({bound.apply(rule.conclusion),
                     Prov{rule_idx < 0, rule_idx < 0 ? -1 - rule_idx : rule_idx,
                          bound, premise_terms}});
      return;
    }
    // Conclusion-only variables: enumerate over the instantiation pool.
    saw_free_vars = true;
    std::vector<GroundSubst> stack{bound};
    for (const std::string& v : free) {
      std::vector<GroundSubst> next;
      for (const GroundSubst& s : stack)
        for (const Term& u : pool) {
          GroundSubst s2 = s;
          s2.bind(v, u);
          next.push_back(std::move(s2));
        }
      stack = std::move(next);
    }
    for (const GroundSubst& s : stack)
      out.push_back({s.apply(rule.conclusion),
                     Prov{rule_idx < 0, rule_idx < 0 ? -1 - rule_idx : rule_idx,
                          s, premise_terms}});
  }

  struct Job {
    int rule_idx;        // >= 0: system rule; < 0: gamma generator -1-i
    std::size_t slot;    // designated delta slot (ignored for premise-free)
    std::size_t delta;   // index into order_ (ignored for premise-free)
    bool premise_free;
  };

  const Rule& job_rule(const Job& j, Rule& scratch) const {
    if (j.rule_idx >= 0) return d_.rules()[j.rule_idx];
    scratch = Rule{{}, gamma_[-1 - j.rule_idx]};
    return scratch;
  }

  std::vector<Candidate> run_job(const Job& j, std::size_t old_end,
                                 std::size_t all_end,
                                 const std::vector<Term>& pool,
                                 bool& job_blocked) const {
    std::vector<Candidate> out;
    Rule scratch{{}, Term::make("true")};
    const Rule& rule = job_rule(j, scratch);
    bool saw_free = false;
    if (j.premise_free) {
      std::vector<Term> none;
      finalize(rule, j.rule_idx, {}, none, out, saw_free, pool);
    } else {
      GroundSubst bound;
      if (match_into(rule.premises[j.slot], order_[j.delta], bound)) {
        std::vector<Term> premise_terms(rule.premises.size(), order_[j.delta]);
        premise_terms[j.slot] = order_[j.delta];
        extend(rule, j.rule_idx, 0, j.slot, old_end, all_end, bound,
               premise_terms, out, saw_free, pool);
      }
    }
    if (saw_free) job_blocked = true;
    return out;
  }

  std::vector<Candidate> round(bool first_round, std::size_t old_end,
                               std::size_t all_end) {
    std::vector<Job> jobs;
    // Premise-free rules (and non-ground gamma members, which act as
    // premise-free generators) refire every round: their instantiation pool
    // grows with the derived set.
    for (std::size_t r = 0; r < d_.rules().size(); ++r)
      if (d_.rules()[r].premises.empty())
        jobs.push_back({static_cast<int>(r), 0, 0, true});
    for (std::size_t i = 0; i < gamma_.size(); ++i)
      if (!gamma_[i].is_ground())
        jobs.push_back({-1 - static_cast<int>(i), 0, 0, true});
    (void)first_round;
    for (std::size_t r = 0; r < d_.rules().size(); ++r) {
      const Rule& rule = d_.rules()[r];
      for (std::size_t slot = 0; slot < rule.premises.size(); ++slot)
        for (std::size_t di = old_end; di < all_end; ++di)
          jobs.push_back({static_cast<int>(r), slot, di, false});
    }

    std::vector<Term> pool = instantiation_pool(all_end);
    std::vector<std::vector<Candidate>> results(jobs.size());
    bool any_blocked = false;
    if (exec_ == Exec::Parallel && jobs.size() > 1) {
#pragma omp parallel for schedule(dynamic, 8) reduction(|| : any_blocked)
      for (long i = 0; i < static_cast<long>(jobs.size()); ++i) {
        bool jb = false;
        results[i] = run_job(jobs[i], old_end, all_end, pool, jb);
        any_blocked = any_blocked || jb;
      }
    } else {
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        bool jb = false;
        results[i] = run_job(jobs[i], old_end, all_end, pool, jb);
        any_blocked = any_blocked || jb;
      }
    }
    if (any_blocked) blocked_ = true;

    std::vector<Candidate> merged;
    for (auto& r : results)
      for (Candidate& c : r) merged.push_back(std::move(c));
    return merged;
  }

  int emit(const Term& t, Deduction& out,
           std::unordered_map<Term, int>& step_of) const {
    if (auto it = step_of.find(t); it != step_of.end()) return it->second;
    const Prov& p = prov_.at(t);
    std::vector<int> premise_idx;
    premise_idx.reserve(p.premises.size());
    for (const Term& pt : p.premises)
      premise_idx.push_back(emit(pt, out, step_of));
    out.steps.emplace_back(t, p.from_gamma, p.source, p.subst,
                           std::move(premise_idx));
    int idx = static_cast<int>(out.steps.size()) - 1;
    step_of.emplace(t, idx);
    return idx;
  }

  const DeductiveSystem& d_;
  const std::vector<Term>& gamma_;
  const TermSet& base_;
  std::vector<Term> base_sorted_;
  int max_rank_;
  const Term* goal_;
  Exec exec_;

  TermSet set_;
  std::vector<Term> order_;
  std::unordered_map<Term, Prov> prov_;
  std::unordered_map<std::string, std::vector<std::size_t>> head_index_;
  bool blocked_ = false;
  bool goal_found_ = false;
};

void insert_ground_subterms(const Term& t, TermSet& out) {
  if (t.is_ground()) {
    for (const Term& s : subterm_set(t)) out.insert(s);
    return;
  }
  for (const Term& a : t.args()) insert_ground_subterms(a, out);
}

TermSet derive_base(const DeductiveSystem& d, const std::vector<Term>& gamma,
                    const Term& goal) {
  TermSet base;
  insert_ground_subterms(goal, base);
  for (const Term& g : gamma) insert_ground_subterms(g, base);
  for (const Rule& r : d.rules()) {
    for (const Term& p : r.premises) insert_ground_subterms(p, base);
    insert_ground_subterms(r.conclusion, base);
  }
  return base;
}

}  // namespace

DeriveResult derive(const DeductiveSystem& d, const std::vector<Term>& gamma,
                    const Term& goal, Strategy strategy, Exec exec) {
  if (!goal.is_ground())
    throw ValidationError("derivation goal must be ground: " + to_string(goal));
  validate_term(goal, d.signature());
  for (const Term& g : gamma) validate_term(g, d.signature());

  TermSet base = derive_base(d, gamma, goal);
  int max_rank = 1 + (strategy.kind == StrategyKind::Bounded ? strategy.growth : 0);
  Saturation sat(d, gamma, base, max_rank, &goal, exec);
  sat.run();
  if (sat.derived(goal))
    return {Verdict::Derivable, sat.reconstruct(goal)};
  if (strategy.kind == StrategyKind::Local)
    return {Verdict::NotDerivable, std::nullopt};
  return {sat.blocked() ? Verdict::Unknown : Verdict::NotDerivable, std::nullopt};
}

TermSet closure(const DeductiveSystem& d, const std::vector<Term>& gamma,
                const TermSet& universe, Exec exec) {
  for (const Term& g : gamma) validate_term(g, d.signature());
  TermSet base;
  for (const Term& u : universe) insert_ground_subterms(u, base);
  for (const Term& g : gamma) insert_ground_subterms(g, base);
  Saturation sat(d, gamma, base, 1, nullptr, exec);
  sat.run();
  return sat.derived_set();
}

TermSet closure_reference(const DeductiveSystem& d, const std::vector<Term>& gamma,
                          const TermSet& universe) {
  TermSet base;
  for (const Term& u : universe) insert_ground_subterms(u, base);
  for (const Term& g : gamma) insert_ground_subterms(g, base);

  auto rank = [&](const Term& t) {
    auto go = [&](auto&& self, const Term& u) -> int {
      if (base.contains(u)) return 0;
      int worst = 0;
      for (const Term& a : u.args()) worst = std::max(worst, self(self, a));
      return worst + 1;
    };
    return go(go, t);
  };
  auto admissible = [&](const Term& t) { return rank(t) <= 1; };

  std::vector<Term> pool(base.begin(), base.end());
  std::sort(pool.begin(), pool.end(),
            [](const Term& a, const Term& b) { return compare(a, b) < 0; });

  TermSet derived;
  std::vector<Term> order;
  auto add = [&](const Term& t) {
    if (!t.is_ground() || !admissible(t) || derived.contains(t)) return;
    derived.insert(t);
    order.push_back(t);
  };
  for (const Term& g : gamma)
    if (g.is_ground()) add(g);

  // Every ground instance of a rule (or of a non-ground gamma member) whose
  // premises are all present. Recomputed from scratch until stable.
  auto instances = [&](const std::vector<Term>& premises, const Term& conclusion,
                       auto&& emit) {
    std::vector<GroundSubst> partial{GroundSubst{}};
    for (const Term& p : premises) {
      std::vector<GroundSubst> next;
      for (const GroundSubst& s : partial)
        for (const Term& t : order) {
          GroundSubst s2 = s;
          if (match_into(p, t, s2)) next.push_back(std::move(s2));
        }
      partial = std::move(next);
    }
    for (const GroundSubst& s : partial) {
      std::vector<std::string> free;
      for (const std::string& v : variables_of(conclusion))
        if (!s.lookup(v)) free.push_back(v);
      std::vector<GroundSubst> full{s};
      for (const std::string& v : free) {
        std::vector<GroundSubst> next;
        for (const GroundSubst& f : full)
          for (const Term& u : pool) {
            GroundSubst f2 = f;
            f2.bind(v, u);
            next.push_back(std::move(f2));
          }
        full = std::move(next);
      }
      for (const GroundSubst& f : full) emit(f.apply(conclusion));
    }
  };

  bool changed = true;
  while (changed) {
    std::size_t before = order.size();
    for (const Rule& r : d.rules())
      instances(r.premises, r.conclusion, add);
    for (const Term& g : gamma)
      if (!g.is_ground()) instances({}, g, add);
    changed = order.size() != before;
  }
  return derived;
}

bool check_deduction(const DeductiveSystem& d, const std::vector<Term>& gamma,
                     const Deduction& ded) {
  for (std::size_t i = 0; i < ded.steps.size(); ++i) {
    const Deduction::Step& s = ded.steps[i];
    if (!s.term.is_ground()) return false;
    if (s.from_gamma) {
      if (s.source < 0 || static_cast<std::size_t>(s.source) >= gamma.size())
        return false;
      if (!(s.subst.apply(gamma[s.source]) == s.term)) return false;
    } else {
      if (s.source < 0 || static_cast<std::size_t>(s.source) >= d.rules().size())
        return false;
      const Rule& r = d.rules()[s.source];
      if (s.premises.size() != r.premises.size()) return false;
      for (std::size_t j = 0; j < r.premises.size(); ++j) {
        int pi = s.premises[j];
        if (pi < 0 || static_cast<std::size_t>(pi) >= i) return false;
        if (!(s.subst.apply(r.premises[j]) == ded.steps[pi].term)) return false;
      }
      if (!(s.subst.apply(r.conclusion) == s.term)) return false;
    }
  }
  return true;
}

bool is_monotone_witness(const DeductiveSystem& d, const std::vector<Term>& gamma,
                         const std::vector<Term>& gamma_sup, const Term& goal,
                         Strategy strategy) {
  for (const Term& g : gamma) {
    if (std::find(gamma_sup.begin(), gamma_sup.end(), g) == gamma_sup.end())
      throw ValidationError("gamma is not a subset of gamma_sup");
  }
  Verdict small = derive(d, gamma, goal, strategy).verdict;
  if (small != Verdict::Derivable) return true;
  return derive(d, gamma_sup, goal, strategy).verdict == Verdict::Derivable;
}

}  // namespace dedukt
