#include "dedukt/sat.hpp"

#include <algorithm>
#include <map>

namespace dedukt {

// ---------------------------------------------------------------------------
// MAtom / ModalFormula

MAtom MAtom::plain_atom(std::string name) {
  MAtom a;
  a.kind = Kind::Plain;
  a.plain = std::move(name);
  return a;
}

MAtom MAtom::term_atom(Term t) {
  MAtom a;
  a.kind = Kind::TermAtom;
  a.term = std::move(t);
  return a;
}

MAtom MAtom::x_atom(int agent, Formula psi) {
  MAtom a;
  a.kind = Kind::XAtom;
  a.agent = agent;
  a.x = std::move(psi);
  return a;
}

MAtom MAtom::ob_atom(int agent, Term t) {
  MAtom a;
  a.kind = Kind::ObAtom;
  a.agent = agent;
  a.term = std::move(t);
  return a;
}

std::string MAtom::key() const {
  switch (kind) {
    case Kind::Plain: return "p:" + plain;
    case Kind::TermAtom: return "t:" + to_string(*term);
    case Kind::XAtom:
      return "x" + std::to_string(agent) + ":" + print_formula(*x);
    case Kind::ObAtom:
      return "r" + std::to_string(agent) + ":" + to_string(*term);
  }
  return "?";
}

ModalFormula ModalFormula::constant(bool b) {
  Node n;
  n.kind = Kind::Const;
  n.value = b;
  return ModalFormula(std::make_shared<const Node>(std::move(n)));
}

ModalFormula ModalFormula::atom(MAtom a) {
  Node n;
  n.kind = Kind::Atom;
  n.atom = std::move(a);
  return ModalFormula(std::make_shared<const Node>(std::move(n)));
}

ModalFormula ModalFormula::negate(ModalFormula f) {
  Node n;
  n.kind = Kind::Not;
  n.children.push_back(std::move(f));
  return ModalFormula(std::make_shared<const Node>(std::move(n)));
}

ModalFormula ModalFormula::conj(ModalFormula a, ModalFormula b) {
  Node n;
  n.kind = Kind::And;
  n.children.push_back(std::move(a));
  n.children.push_back(std::move(b));
  return ModalFormula(std::make_shared<const Node>(std::move(n)));
}

ModalFormula ModalFormula::know(int agent, ModalFormula f) {
  Node n;
  n.kind = Kind::K;
  n.agent = agent;
  n.children.push_back(std::move(f));
  return ModalFormula(std::make_shared<const Node>(std::move(n)));
}

ModalFormula ModalFormula::disj(ModalFormula a, ModalFormula b) {
  return negate(conj(negate(std::move(a)), negate(std::move(b))));
}

ModalFormula ModalFormula::implies(ModalFormula a, ModalFormula b) {
  return negate(conj(std::move(a), negate(std::move(b))));
}

ModalFormula ModalFormula::iff(ModalFormula a, ModalFormula b) {
  return conj(implies(a, b), implies(std::move(b), std::move(a)));
}

std::string ModalFormula::print() const {
  switch (kind()) {
    case Kind::Const: return value() ? "T" : "F";
    case Kind::Atom: return matom().key();
    case Kind::Not: return "!(" + child().print() + ")";
    case Kind::And: return "(" + child(0).print() + " & " + child(1).print() + ")";
    case Kind::K:
      return "K" + std::to_string(agent()) + "(" + child().print() + ")";
  }
  return "?";
}

int ModalFormula::size() const {
  switch (kind()) {
    case Kind::Const:
    case Kind::Atom:
      return 1;
    case Kind::Not:
    case Kind::K:
      return 1 + child().size();
    case Kind::And:
      return 1 + child(0).size() + child(1).size();
  }
  return 1;
}

std::vector<MAtom> modal_atoms(const ModalFormula& f) {
  std::vector<MAtom> out;
  std::vector<std::string> seen;
  struct Walk {
    std::vector<MAtom>& out;
    std::vector<std::string>& seen;
    void go(const ModalFormula& f) {
      if (f.kind() == ModalFormula::Kind::Atom) {
        std::string k = f.matom().key();
        if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
          seen.push_back(k);
          out.push_back(f.matom());
        }
        return;
      }
      for (std::size_t i = 0; i < f.child_count(); ++i) go(f.child(i));
    }
  } w{out, seen};
  w.go(f);
  return out;
}

// ---------------------------------------------------------------------------
// translate_tilde

namespace {

struct TildeCollect {
  // first-occurrence order
  std::vector<std::pair<int, Term>> obs;
  std::vector<std::pair<int, Formula>> xsubs;
  std::vector<std::string> seen;

  void add_ob(int agent, const Term& t) {
    std::string k = "r" + std::to_string(agent) + ":" + to_string(t);
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) return;
    seen.push_back(k);
    obs.emplace_back(agent, t);
  }
  void add_x(int agent, const Formula& psi) {
    std::string k = "x" + std::to_string(agent) + ":" + print_formula(psi);
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) return;
    seen.push_back(k);
    xsubs.emplace_back(agent, psi);
  }

  void scan(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::MetaVar:
        return;
      case Formula::Kind::Obs:
        add_ob(f.agent(), f.term());
        return;
      case Formula::Kind::XKnow:
        add_x(f.agent(), f.child());
        return;  // the argument is opaque: it lives inside the atom
      default:
        for (std::size_t i = 0; i < f.child_count(); ++i) scan(f.child(i));
    }
  }
};

ModalFormula tilde_core(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return ModalFormula::atom(MAtom::term_atom(f.term()));
    case Formula::Kind::Obs:
      return ModalFormula::atom(MAtom::ob_atom(f.agent(), f.term()));
    case Formula::Kind::XKnow:
      return ModalFormula::atom(MAtom::x_atom(f.agent(), f.child()));
    case Formula::Kind::Not:
      return ModalFormula::negate(tilde_core(f.child()));
    case Formula::Kind::And:
      return ModalFormula::conj(tilde_core(f.child(0)), tilde_core(f.child(1)));
    case Formula::Kind::Know:
      return ModalFormula::know(f.agent(), tilde_core(f.child()));
    case Formula::Kind::L:
      return ModalFormula::negate(ModalFormula::know(
          f.agent(), ModalFormula::negate(tilde_core(f.child()))));
    case Formula::Kind::MetaVar:
      throw ValidationError("cannot translate a schema metavariable");
  }
  throw ValidationError("unreachable");
}

}  // namespace

ModalFormula translate_tilde(const Formula& phi, int agents) {
  (void)agents;
  TildeCollect c;
  c.scan(phi);
  ModalFormula out = tilde_core(phi);

  auto q = [](int agent, const Formula& psi) {
    return ModalFormula::atom(MAtom::x_atom(agent, psi));
  };
  auto r = [](int agent, const Term& t) {
    return ModalFormula::atom(MAtom::ob_atom(agent, t));
  };
  for (const auto& [agent, t] : c.obs) {
    out = ModalFormula::conj(
        std::move(out),
        ModalFormula::iff(r(agent, t), ModalFormula::know(agent, r(agent, t))));
    out = ModalFormula::conj(
        std::move(out),
        ModalFormula::implies(r(agent, t), q(agent, Formula::obs(agent, t))));
    Formula obf = Formula::obs(agent, t);
    out = ModalFormula::conj(
        std::move(out),
        ModalFormula::iff(q(agent, obf),
                          ModalFormula::know(agent, q(agent, obf))));
  }
  for (const auto& [agent, psi] : c.xsubs) {
    out = ModalFormula::conj(
        std::move(out),
        ModalFormula::iff(q(agent, psi),
                          ModalFormula::know(agent, q(agent, psi))));
  }
  return out;
}

// ---------------------------------------------------------------------------
// embed_modal

Term tower_term(int k) {
  Term t = Term::make("true");
  for (int i = 0; i < k; ++i) t = Term::make("not", {t});
  return t;
}

Formula embed_modal(const ModalFormula& f) {
  std::vector<MAtom> atoms = modal_atoms(f);
  std::map<std::string, int> index;
  for (const MAtom& a : atoms) {
    if (a.kind != MAtom::Kind::Plain)
      throw ValidationError("embed_modal expects a formula over plain atoms");
    index.emplace(a.key(), static_cast<int>(index.size()));
  }
  struct Build {
    const std::map<std::string, int>& index;
    Formula go(const ModalFormula& f) {
      switch (f.kind()) {
        case ModalFormula::Kind::Const:
          throw ValidationError("embed_modal expects a constant-free formula");
        case ModalFormula::Kind::Atom:
          return Formula::atom(tower_term(index.at(f.matom().key())));
        case ModalFormula::Kind::Not:
          return Formula::negate(go(f.child()));
        case ModalFormula::Kind::And:
          return Formula::conj(go(f.child(0)), go(f.child(1)));
        case ModalFormula::Kind::K:
          return Formula::know(f.agent(), go(f.child()));
      }
      throw ValidationError("unreachable");
    }
  } b{index};
  return b.go(f);
}

// ---------------------------------------------------------------------------
// S5 small-model search

namespace {

/// K-subformulas in first-occurrence order, keyed by canonical print.
void collect_k_subformulas(const ModalFormula& f,
                           std::vector<ModalFormula>& out,
                           std::vector<std::string>& keys) {
  if (f.kind() == ModalFormula::Kind::K) {
    std::string k = f.print();
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      keys.push_back(k);
      out.push_back(f);
    }
  }
  for (std::size_t i = 0; i < f.child_count(); ++i)
    collect_k_subformulas(f.child(i), out, keys);
}

/// Replaces every K-subformula by its guessed truth value.
ModalFormula reduce_modal(const ModalFormula& f,
                          const std::map<std::string, bool>& guess) {
  switch (f.kind()) {
    case ModalFormula::Kind::Const:
    case ModalFormula::Kind::Atom:
      return f;
    case ModalFormula::Kind::Not:
      return ModalFormula::negate(reduce_modal(f.child(), guess));
    case ModalFormula::Kind::And:
      return ModalFormula::conj(reduce_modal(f.child(0), guess),
                                reduce_modal(f.child(1), guess));
    case ModalFormula::Kind::K:
      return ModalFormula::constant(guess.at(f.print()));
  }
  throw ValidationError("unreachable");
}

bool eval_prop(const ModalFormula& f,
               const std::unordered_map<std::string, bool>& assignment) {
  switch (f.kind()) {
    case ModalFormula::Kind::Const:
      return f.value();
    case ModalFormula::Kind::Atom: {
      auto it = assignment.find(f.matom().key());
      return it != assignment.end() && it->second;
    }
    case ModalFormula::Kind::Not:
      return !eval_prop(f.child(), assignment);
    case ModalFormula::Kind::And:
      return eval_prop(f.child(0), assignment) && eval_prop(f.child(1), assignment);
    case ModalFormula::Kind::K:
      throw ValidationError("modal operator in a propositional context");
  }
  return false;
}

/// Exhaustive propositional satisfiability over the atoms of `req`.
std::optional<std::unordered_map<std::string, bool>> prop_sat(
    const std::vector<ModalFormula>& req, const std::vector<std::string>& atoms) {
  if (atoms.size() > 24)
    throw ValidationError("propositional search space too large");
  std::uint64_t n = 1ull << atoms.size();
  for (std::uint64_t bits = 0; bits < n; ++bits) {
    std::unordered_map<std::string, bool> a;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      a[atoms[i]] = (bits >> i) & 1;
    bool ok = true;
    for (const ModalFormula& f : req)
      if (!eval_prop(f, a)) {
        ok = false;
        break;
      }
    if (ok) return a;
  }
  return std::nullopt;
}

struct S5Model {
  // world 0 is designated; atom keys absent from a map are false
  std::vector<std::unordered_map<std::string, bool>> worlds;
};

std::optional<S5Model> sat_s5_core(const ModalFormula& f) {
  std::vector<ModalFormula> ks;
  std::vector<std::string> kkeys;
  collect_k_subformulas(f, ks, kkeys);

  std::vector<std::string> atom_keys;
  for (const MAtom& a : modal_atoms(f)) atom_keys.push_back(a.key());

  std::size_t m = ks.size();
  if (m > 20) throw ValidationError("too many modal subformulas");
  for (std::uint64_t guess_bits = 0; guess_bits < (1ull << m); ++guess_bits) {
    std::map<std::string, bool> guess;
    for (std::size_t i = 0; i < m; ++i) guess[kkeys[i]] = (guess_bits >> i) & 1;

    // every world satisfies the bodies of the true-guessed K's
    std::vector<ModalFormula> shared;
    for (std::size_t i = 0; i < m; ++i)
      if (guess.at(kkeys[i]))
        shared.push_back(reduce_modal(ks[i].child(), guess));

    S5Model model;
    bool feasible = true;

    {  // designated world also satisfies the formula itself
      std::vector<ModalFormula> req = shared;
      req.push_back(reduce_modal(f, guess));
      auto w = prop_sat(req, atom_keys);
      if (!w) continue;
      model.worlds.push_back(std::move(*w));
    }
    // one witness world per false-guessed K
    for (std::size_t i = 0; i < m && feasible; ++i) {
      if (guess.at(kkeys[i])) continue;
      std::vector<ModalFormula> req = shared;
      req.push_back(ModalFormula::negate(reduce_modal(ks[i].child(), guess)));
      auto w = prop_sat(req, atom_keys);
      if (!w) {
        feasible = false;
        break;
      }
      model.worlds.push_back(std::move(*w));
    }
    if (feasible) return model;
  }
  return std::nullopt;
}

void require_single_agent(const ModalFormula& f) {
  if (f.kind() == ModalFormula::Kind::K && f.agent() != 1)
    throw ValidationError("this decision procedure is single-agent");
  for (std::size_t i = 0; i < f.child_count(); ++i)
    require_single_agent(f.child(i));
}

void require_single_agent(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Know:
    case Formula::Kind::XKnow:
    case Formula::Kind::L:
    case Formula::Kind::Obs:
      if (f.agent() != 1)
        throw ValidationError("this decision procedure is single-agent");
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < f.child_count(); ++i)
    require_single_agent(f.child(i));
}

/// Builds the witness structure shared by sat_s5 and sat_general: all states
/// carry the observation set read off the r-atoms (uniform by the frame
/// constraints), the system derives exactly the true q-atoms through
/// premise-free rules, and plain atoms valuate through their tower terms.
Structure reconstruct(const S5Model& model, const ModalFormula& f,
                      const Signature& base_sig) {
  std::vector<MAtom> atoms = modal_atoms(f);
  std::map<std::string, int> plain_index;
  for (const MAtom& a : atoms)
    if (a.kind == MAtom::Kind::Plain)
      plain_index.emplace(a.key(), static_cast<int>(plain_index.size()));

  auto truth = [&](const std::unordered_map<std::string, bool>& w,
                   const std::string& key) {
    auto it = w.find(key);
    return it != w.end() && it->second;
  };

  // observations and X-rules are uniform across worlds; read them at world 0
  TermSet obs;
  std::vector<Rule> rules;
  for (const MAtom& a : atoms) {
    if (a.kind == MAtom::Kind::ObAtom && truth(model.worlds[0], a.key()))
      obs.insert(*a.term);
    if (a.kind == MAtom::Kind::XAtom && truth(model.worlds[0], a.key()))
      rules.push_back(Rule{{}, to_term(*a.x, 1)});
  }

  DeductiveSystem d(base_sig, std::move(rules), 1);
  std::vector<ModelState> states;
  for (std::size_t w = 0; w < model.worlds.size(); ++w) {
    ModelState s;
    s.name = "w" + std::to_string(w + 1);
    s.env = s.name;
    s.obs.push_back(obs);
    for (const MAtom& a : atoms) {
      if (!truth(model.worlds[w], a.key())) continue;
      if (a.kind == MAtom::Kind::TermAtom) s.trueset.insert(*a.term);
      if (a.kind == MAtom::Kind::Plain)
        s.trueset.insert(tower_term(plain_index.at(a.key())));
    }
    states.push_back(std::move(s));
  }
  return Structure({std::move(d)}, std::move(states));
}

}  // namespace

SatResult sat_s5(const ModalFormula& f, const Signature& base_sig) {
  require_single_agent(f);
  auto model = sat_s5_core(f);
  if (!model) return {SatResult::Outcome::Unsat, std::nullopt, "", ""};
  Structure w = reconstruct(*model, f, base_sig);
  return {SatResult::Outcome::Sat, std::move(w), "w1", ""};
}

SatResult sat_general(const Formula& phi, const Signature& base_sig) {
  require_single_agent(phi);
  ModalFormula tilde = translate_tilde(phi);
  auto model = sat_s5_core(tilde);
  if (!model) return {SatResult::Outcome::Unsat, std::nullopt, "", ""};
  Structure w = reconstruct(*model, tilde, base_sig);
  return {SatResult::Outcome::Sat, std::move(w), "w1", ""};
}

// ---------------------------------------------------------------------------
// Fixed-system satisfiability

std::vector<Term> default_pool(const Formula& phi) {
  TermSet seen;
  struct Walk {
    TermSet& seen;
    void go(const Formula& f) {
      switch (f.kind()) {
        case Formula::Kind::Atom:
        case Formula::Kind::Obs:
          for (const Term& s : subterm_set(f.term())) seen.insert(s);
          return;
        case Formula::Kind::XKnow:
          go(f.child());
          return;
        case Formula::Kind::MetaVar:
          return;
        default:
          for (std::size_t i = 0; i < f.child_count(); ++i) go(f.child(i));
      }
    }
  } w{seen};
  w.go(phi);
  std::vector<Term> pool(seen.begin(), seen.end());
  std::sort(pool.begin(), pool.end(),
            [](const Term& a, const Term& b) { return compare(a, b) < 0; });
  return pool;
}

namespace {

/// phi with Ob and X subformulas replaced by constants fixed by the chosen
/// observation set.
ModalFormula fix_obs_and_x(
    const Formula& f, const TermSet& obs,
    const std::function<std::optional<bool>(const Formula&)>& x_truth) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return ModalFormula::atom(MAtom::term_atom(f.term()));
    case Formula::Kind::Obs:
      return ModalFormula::constant(obs.contains(f.term()));
    case Formula::Kind::XKnow: {
      auto v = x_truth(f.child());
      if (!v) throw ValidationError("escalated");
      return ModalFormula::constant(*v);
    }
    case Formula::Kind::Not:
      return ModalFormula::negate(fix_obs_and_x(f.child(), obs, x_truth));
    case Formula::Kind::And:
      return ModalFormula::conj(fix_obs_and_x(f.child(0), obs, x_truth),
                                fix_obs_and_x(f.child(1), obs, x_truth));
    case Formula::Kind::Know:
      return ModalFormula::know(f.agent(), fix_obs_and_x(f.child(), obs, x_truth));
    case Formula::Kind::L:
      return ModalFormula::negate(ModalFormula::know(
          f.agent(),
          ModalFormula::negate(fix_obs_and_x(f.child(), obs, x_truth))));
    case Formula::Kind::MetaVar:
      throw ValidationError("cannot decide a schema metavariable");
  }
  throw ValidationError("unreachable");
}

}  // namespace

SatResult sat_fixed_d(const Formula& phi, const DeductiveSystem& d,
                      int max_obs_size, const std::vector<Term>& candidate_pool,
                      Strategy strategy) {
  require_single_agent(phi);
  if (d.agent_count() != 1)
    throw ValidationError("fixed-system satisfiability is single-agent");
  for (const Term& t : candidate_pool) {
    if (!t.is_ground()) throw ValidationError("pool terms must be ground");
    validate_term(t, d.base_signature());
  }

  std::vector<Term> pool = candidate_pool;
  std::sort(pool.begin(), pool.end(),
            [](const Term& a, const Term& b) { return compare(a, b) < 0; });
  pool.erase(std::unique(pool.begin(), pool.end(),
                         [](const Term& a, const Term& b) { return a == b; }),
             pool.end());

  std::size_t n = pool.size();
  if (n > 20) throw ValidationError("candidate pool too large to enumerate");
  bool escalated = false;

  // subsets in size order, lexicographic within a size
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits)
    if (static_cast<int>(__builtin_popcount(bits)) <= max_obs_size)
      subsets.push_back(bits);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t b) {
                     return __builtin_popcount(a) < __builtin_popcount(b);
                   });

  for (std::uint32_t bits : subsets) {
    TermSet obs;
    std::vector<Term> gamma;
    for (std::size_t i = 0; i < n; ++i)
      if ((bits >> i) & 1) {
        obs.insert(pool[i]);
        gamma.push_back(Term::make(kd_name("ob", 1, 1), {pool[i]}));
      }

    bool this_escalated = false;
    auto x_truth = [&](const Formula& body) -> std::optional<bool> {
      Verdict v = derive(d, gamma, to_term(body, 1), strategy).verdict;
      if (v == Verdict::Unknown) {
        this_escalated = true;
        return std::nullopt;
      }
      return v == Verdict::Derivable;
    };

    std::optional<ModalFormula> fixed;
    try {
      fixed = fix_obs_and_x(phi, obs, x_truth);
    } catch (const ValidationError&) {
      if (!this_escalated) throw;
    }
    if (this_escalated) {
      escalated = true;
      continue;
    }

    auto model = sat_s5_core(*fixed);
    if (!model) continue;

    std::vector<ModelState> states;
    std::vector<MAtom> atoms = modal_atoms(*fixed);
    for (std::size_t w = 0; w < model->worlds.size(); ++w) {
      ModelState s;
      s.name = "w" + std::to_string(w + 1);
      s.env = s.name;
      s.obs.push_back(obs);
      for (const MAtom& a : atoms) {
        auto it = model->worlds[w].find(a.key());
        if (it != model->worlds[w].end() && it->second &&
            a.kind == MAtom::Kind::TermAtom)
          s.trueset.insert(*a.term);
      }
      states.push_back(std::move(s));
    }
    Structure witness({d}, std::move(states));
    return {SatResult::Outcome::Sat, std::move(witness), "w1",
            "observation set of size " +
                std::to_string(__builtin_popcount(bits))};
  }
  if (escalated)
    return {SatResult::Outcome::Unknown, std::nullopt, "",
            "a deduction query exhausted its bound"};
  return {SatResult::Outcome::Unsat, std::nullopt, "",
          "relative to a pool of " + std::to_string(n) +
              " candidate observations, at most " +
              std::to_string(max_obs_size) + " per state"};
}

// ---------------------------------------------------------------------------
// Bounded multi-agent search

namespace {

struct MultiShape {
  std::vector<std::vector<int>> partitions;  // per agent: class of each state
};

void enum_partitions(int k, std::vector<std::vector<int>>& out) {
  // restricted growth strings
  std::vector<int> rgs(k, 0);
  std::function<void(int, int)> go = [&](int i, int maxc) {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int c = 0; c <= maxc; ++c) {
      rgs[i] = c;
      go(i + 1, std::max(maxc, c + 1));
    }
  };
  go(0, 0);
}

}  // namespace

SatResult sat_multi_bounded(const Formula& phi, const Signature& base_sig,
                            int agents, int max_states) {
  if (agents < 1) throw ValidationError("agent count must be positive");
  if (max_states < 1) throw ValidationError("state bound must be positive");

  // raw material from the formula
  std::vector<std::vector<Term>> ob_args(agents);
  std::vector<std::vector<Formula>> xsubs(agents);
  std::vector<Term> atoms;
  {
    TildeCollect c;
    c.scan(phi);
    for (const auto& [a, t] : c.obs) ob_args[a - 1].push_back(t);
    for (const auto& [a, f] : c.xsubs) xsubs[a - 1].push_back(f);
    TermSet seen;
    struct AtomWalk {
      TermSet& seen;
      std::vector<Term>& atoms;
      void go(const Formula& f) {
        if (f.kind() == Formula::Kind::Atom) {
          if (seen.insert(f.term()).second) atoms.push_back(f.term());
          return;
        }
        if (f.kind() == Formula::Kind::Obs || f.kind() == Formula::Kind::MetaVar)
          return;
        for (std::size_t i = 0; i < f.child_count(); ++i) go(f.child(i));
      }
    } w{seen, atoms};
    w.go(phi);
  }

  // fresh base tags to keep equivalence classes apart
  std::vector<Term> tags;
  {
    TermSet used;
    for (const auto& v : ob_args)
      for (const Term& t : v) used.insert(t);
    for (const auto& [name, arity] : base_sig.declarations()) {
      if (arity != 0) continue;
      Term c = Term::make(name);
      if (!used.contains(c)) tags.push_back(c);
      if (static_cast<int>(tags.size()) >= max_states) break;
    }
  }

  const std::uint64_t budget = 1ull << 22;
  std::uint64_t tried = 0;

  for (int k = 1; k <= max_states; ++k) {
    if (static_cast<int>(tags.size()) < k) break;  // cannot separate classes
    std::vector<std::vector<int>> partitions;
    enum_partitions(k, partitions);

    // choose one partition per agent
    std::vector<std::size_t> pidx(agents, 0);
    bool done = false;
    while (!done) {
      // enumerate per-agent, per-class observation subsets and X guesses,
      // and per-state atom valuations, in one combined counter
      std::vector<int> class_count(agents);
      for (int a = 0; a < agents; ++a)
        class_count[a] = 1 + *std::max_element(partitions[pidx[a]].begin(),
                                               partitions[pidx[a]].end());
      std::uint64_t dims = 0;
      for (int a = 0; a < agents; ++a)
        dims += static_cast<std::uint64_t>(class_count[a]) *
                (ob_args[a].size() + xsubs[a].size());
      dims += static_cast<std::uint64_t>(k) * atoms.size();
      if (dims > 40) return {SatResult::Outcome::Unknown, std::nullopt, "",
                             "search space exceeds the bounded budget"};

      for (std::uint64_t bits = 0; bits < (1ull << dims); ++bits) {
        if (++tried > budget)
          return {SatResult::Outcome::Unknown, std::nullopt, "",
                  "search budget exhausted"};
        std::uint64_t cursor = bits;
        auto take = [&]() {
          bool b = cursor & 1;
          cursor >>= 1;
          return b;
        };

        std::vector<DeductiveSystem> systems;
        std::vector<ModelState> states(k);
        for (int s = 0; s < k; ++s) {
          states[s].name = "w" + std::to_string(s + 1);
          states[s].env = states[s].name;
          states[s].obs.assign(agents, TermSet{});
        }
        bool bad = false;
        for (int a = 0; a < agents && !bad; ++a) {
          const std::vector<int>& part = partitions[pidx[a]];
          std::vector<TermSet> class_obs(class_count[a]);
          std::vector<std::vector<Rule>> class_rules(class_count[a]);
          for (int c = 0; c < class_count[a]; ++c) {
            class_obs[c].insert(tags[c]);
            for (const Term& t : ob_args[a])
              if (take()) class_obs[c].insert(t);
            for (const Formula& psi : xsubs[a])
              if (take())
                class_rules[c].push_back(
                    Rule{{Term::make(kd_name("ob", a + 1, agents), {tags[c]})},
                         to_term(psi, agents)});
          }
          std::vector<Rule> rules;
          for (auto& rs : class_rules)
            for (Rule& r : rs) rules.push_back(std::move(r));
          systems.push_back(DeductiveSystem(base_sig, std::move(rules), agents));
          for (int s = 0; s < k; ++s) states[s].obs[a] = class_obs[part[s]];
        }
        for (int s = 0; s < k; ++s)
          for (const Term& t : atoms)
            if (take()) states[s].trueset.insert(t);
        if (bad) continue;

        Structure m(std::move(systems), std::move(states));
        ModelChecker checker(m);
        for (int s = 0; s < k; ++s) {
          if (checker.check(s, phi) == TV::True) {
            return {SatResult::Outcome::Sat, std::move(m),
                    "w" + std::to_string(s + 1), ""};
          }
        }
      }

      // advance the partition choice
      int a = 0;
      while (a < agents) {
        if (++pidx[a] < partitions.size()) break;
        pidx[a] = 0;
        ++a;
      }
      if (a == agents) done = true;
    }
  }
  return {SatResult::Outcome::Unknown, std::nullopt, "",
          "no witness within " + std::to_string(max_states) + " states"};
}

}  // namespace dedukt
