#include "dedukt/axioms.hpp"

#include <algorithm>

namespace dedukt {

namespace {

Formula mv(const char* name) { return Formula::metavar(name); }

AxiomSchema base(const std::string& name, int agent, Formula tmpl) {
  AxiomSchema s;
  s.name = name;
  s.agent = agent;
  s.origin = AxiomSchema::Origin::Base;
  s.tmpl = std::move(tmpl);
  return s;
}

AxiomSchema doc(const std::string& name, std::string note) {
  AxiomSchema s;
  s.name = name;
  s.origin = AxiomSchema::Origin::Base;
  s.note = std::move(note);
  return s;
}

}  // namespace

std::vector<AxiomSchema> base_axioms(int agents) {
  if (agents < 1) throw ValidationError("agent count must be positive");
  std::vector<AxiomSchema> out;
  out.push_back(doc("Taut", "all instances of propositional tautologies"));
  out.push_back(doc("MP", "from phi and phi => psi infer psi"));
  out.push_back(doc("K2", "from phi infer K phi"));
  for (int i = 1; i <= agents; ++i) {
    Formula phi = mv("phi");
    Formula psi = mv("psi");
    Term p = Term::variable("p");
    auto K = [&](Formula f) { return Formula::know(i, std::move(f)); };
    auto X = [&](Formula f) { return Formula::xknow(i, std::move(f)); };
    Formula ob = Formula::obs(i, p);
    out.push_back(base(
        "K1", i,
        Formula::implies(Formula::conj(K(phi), K(Formula::implies(phi, psi))),
                         K(psi))));
    out.push_back(base("K3", i, Formula::implies(K(phi), phi)));
    out.push_back(base("K4", i, Formula::implies(K(phi), K(K(phi)))));
    out.push_back(base("K5", i, Formula::implies(Formula::negate(K(phi)),
                                                 K(Formula::negate(K(phi))))));
    out.push_back(base("X1", i, Formula::implies(X(phi), K(X(phi)))));
    out.push_back(base("X2", i, Formula::implies(ob, X(ob))));
    out.push_back(base("X3", i, Formula::implies(ob, K(ob))));
  }
  return out;
}

std::vector<AxiomSchema> rule_axioms(const DeductiveSystem& d, int agent) {
  if (agent < 1 || agent > d.agent_count())
    throw ValidationError("agent index out of range");
  std::vector<AxiomSchema> out;
  for (std::size_t r = 0; r < d.rules().size(); ++r) {
    const Rule& rule = d.rules()[r];
    auto translate = [&](const Term& t) {
      try {
        return from_term(t, d.base_signature(), d.agent_count());
      } catch (const ValidationError& e) {
        throw ValidationError("rule " + std::to_string(r + 1) + ": " + e.what());
      }
    };
    std::optional<Formula> lhs;
    for (const Term& p : rule.premises) {
      Formula xp = Formula::xknow(agent, translate(p));
      lhs = lhs ? Formula::conj(std::move(*lhs), std::move(xp)) : std::move(xp);
    }
    if (!lhs) lhs = true_formula(d.base_signature());
    Formula rhs = Formula::xknow(agent, translate(rule.conclusion));

    AxiomSchema s;
    s.name = "R" + std::to_string(r + 1);
    s.agent = agent;
    s.origin = AxiomSchema::Origin::FromRule;
    s.rule_index = static_cast<int>(r);
    s.tmpl = Formula::implies(std::move(*lhs), std::move(rhs));
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void collect_metavars(const Formula& f, std::vector<std::string>& out) {
  auto push = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  switch (f.kind()) {
    case Formula::Kind::MetaVar:
      push(f.name());
      return;
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
      for (const std::string& v : variables_of(f.term())) push(v);
      return;
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i)
        collect_metavars(f.child(i), out);
  }
}

Formula subst_formula(const Formula& f, const GroundSubst& rho,
                      const Signature& base_sig, int agents) {
  switch (f.kind()) {
    case Formula::Kind::MetaVar: {
      auto b = rho.lookup(f.name());
      if (!b) throw ValidationError("unbound metavariable ?" + f.name());
      return from_term(*b, base_sig, agents);
    }
    case Formula::Kind::Atom: {
      Term t = rho.apply(f.term());
      if (!t.is_ground())
        throw ValidationError("unbound metavariable ?" + variables_of(t).front());
      return Formula::atom(std::move(t));
    }
    case Formula::Kind::Obs: {
      Term t = rho.apply(f.term());
      if (!t.is_ground())
        throw ValidationError("unbound metavariable ?" + variables_of(t).front());
      return Formula::obs(f.agent(), std::move(t));
    }
    case Formula::Kind::Not:
      return Formula::negate(subst_formula(f.child(), rho, base_sig, agents));
    case Formula::Kind::And:
      return Formula::conj(subst_formula(f.child(0), rho, base_sig, agents),
                           subst_formula(f.child(1), rho, base_sig, agents));
    case Formula::Kind::Know:
      return Formula::know(f.agent(),
                           subst_formula(f.child(), rho, base_sig, agents));
    case Formula::Kind::XKnow:
      return Formula::xknow(f.agent(),
                            subst_formula(f.child(), rho, base_sig, agents));
    case Formula::Kind::L:
      return Formula::dual(f.agent(),
                           subst_formula(f.child(), rho, base_sig, agents));
  }
  throw ValidationError("unreachable");
}

}  // namespace

std::vector<std::string> metavariables(const AxiomSchema& schema) {
  std::vector<std::string> out;
  if (schema.tmpl) collect_metavars(*schema.tmpl, out);
  return out;
}

Formula instantiate(const AxiomSchema& schema, const GroundSubst& rho,
                    const Signature& base_sig, int agents) {
  if (!schema.tmpl)
    throw ValidationError("axiom " + schema.name + " is not instantiable");
  return subst_formula(*schema.tmpl, rho, base_sig, agents);
}

}  // namespace dedukt
