#include "dedukt/presets.hpp"

#include <algorithm>

namespace dedukt {

namespace {

Term v(const char* name) { return Term::variable(name); }
Term app(const char* sym, std::vector<Term> args = {}) {
  return Term::make(sym, std::move(args));
}

Signature dy_signature(bool with_constr) {
  Signature sig;
  sig.declare("recv", 1);
  sig.declare("has", 1);
  sig.declare("encr", 2);
  sig.declare("conc", 2);
  sig.declare("inv", 1);
  if (with_constr) sig.declare("constr", 1);
  sig.declare("m", 0);
  sig.declare("k1", 0);
  sig.declare("k2", 0);
  return sig;
}

std::vector<Rule> dy_rules() {
  return {
      {{app("recv", {v("m")})}, app("has", {v("m")})},
      {{app("has", {app("inv", {v("k")})}),
        app("has", {app("encr", {v("m"), v("k")})})},
       app("has", {v("m")})},
      {{app("has", {app("conc", {v("m1"), v("m2")})})}, app("has", {v("m1")})},
      {{app("has", {app("conc", {v("m1"), v("m2")})})}, app("has", {v("m2")})},
  };
}

std::vector<Rule> constr_rules() {
  return {
      {{app("has", {v("m")})}, app("constr", {v("m")})},
      {{app("constr", {v("k")}), app("constr", {v("m")})},
       app("constr", {app("encr", {v("m"), v("k")})})},
      {{app("constr", {v("m1")}), app("constr", {v("m2")})},
       app("constr", {app("conc", {v("m1"), v("m2")})})},
  };
}

std::vector<Rule> bool_rules() {
  auto nt = [&](Term t) { return app("not", {std::move(t)}); };
  auto an = [&](Term a, Term b) { return app("and", {std::move(a), std::move(b)}); };
  return {
      {{v("t")}, nt(nt(v("t")))},
      {{nt(nt(v("t")))}, v("t")},
      {{v("t")}, nt(an(nt(v("t")), nt(v("t2"))))},
      {{v("t2")}, nt(an(nt(v("t")), nt(v("t2"))))},
      {{nt(an(v("t"), nt(v("t2")))), v("t")}, v("t2")},
      {{nt(an(v("t"), nt(v("t2")))), nt(v("t2"))}, nt(v("t"))},
      {{v("t"), v("t2")}, an(v("t"), v("t2"))},
      {{an(v("t"), v("t2"))}, v("t")},
      {{an(v("t"), v("t2"))}, v("t2")},
      {{v("t"), nt(v("t"))}, app("false")},
      {{app("false")}, v("t")},
  };
}

Signature small_prop_signature() {
  Signature sig;
  sig.declare("p", 0);
  sig.declare("q", 0);
  sig.declare("r", 0);
  return sig;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"DY", "message derivation for a passive adversary"},
      {"DY_CONSTR", "DY plus message construction"},
      {"DY_PRIME", "DY plus observation unwrapping"},
      {"BOOL", "incomplete linear-time propositional rules"},
      {"SELF_X", "reflection of explicit knowledge"},
  };
  return catalog;
}

bool is_preset_name(const std::string& name) {
  return std::any_of(preset_catalog().begin(), preset_catalog().end(),
                     [&](const PresetInfo& p) { return p.name == name; });
}

DeductiveSystem load_preset(const std::string& name) {
  if (name == "DY") return DeductiveSystem(dy_signature(false), dy_rules());
  if (name == "DY_CONSTR") {
    std::vector<Rule> rules = dy_rules();
    for (Rule& r : constr_rules()) rules.push_back(std::move(r));
    return DeductiveSystem(dy_signature(true), std::move(rules));
  }
  if (name == "DY_PRIME") {
    std::vector<Rule> rules = dy_rules();
    rules.push_back({{app("ob", {app("recv", {v("t")})})}, app("recv", {v("t")})});
    return DeductiveSystem(dy_signature(false), std::move(rules));
  }
  if (name == "BOOL") return DeductiveSystem(small_prop_signature(), bool_rules());
  if (name == "SELF_X") {
    return DeductiveSystem(small_prop_signature(),
                           {{{v("t")}, app("xknow", {v("t")})}});
  }
  throw ValidationError("unknown preset '" + name + "'");
}

bool subterm_rel(const Term& t, const Term& u) {
  if (t == u) return true;
  if (u.is_variable()) return false;
  if (u.symbol() == "conc" && u.args().size() == 2)
    return subterm_rel(t, u.args()[0]) || subterm_rel(t, u.args()[1]);
  if (u.symbol() == "encr" && u.args().size() == 2)
    return subterm_rel(t, u.args()[0]);
  return false;
}

DeductiveSystem simulative_extension(const DeductiveSystem& di,
                                     const DeductiveSystem& dj, int j) {
  if (j < 1 || j > di.agent_count())
    throw ValidationError("agent index out of range for simulative extension");
  if (dj.agent_count() != di.agent_count() ||
      dj.base_signature().declarations() != di.base_signature().declarations())
    throw ValidationError("simulative extension needs compatible signatures");
  int n = di.agent_count();
  std::string ob = kd_name("ob", j, n);
  std::string xknow = kd_name("xknow", j, n);
  auto wrap = [&](const Term& t) { return Term::make(xknow, {t}); };

  std::vector<Rule> extra;
  extra.push_back({{Term::make(ob, {Term::variable("t")})},
                   wrap(Term::make(ob, {Term::variable("t")}))});
  for (const Rule& r : dj.rules()) {
    Rule lifted{{}, wrap(r.conclusion)};
    lifted.premises.reserve(r.premises.size());
    for (const Term& p : r.premises) lifted.premises.push_back(wrap(p));
    extra.push_back(std::move(lifted));
  }
  return di.with_rules(std::move(extra));
}

}  // namespace dedukt
