#include "dedukt/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dedukt/axioms.hpp"
#include "dedukt/deduction.hpp"
#include "dedukt/formula.hpp"
#include "dedukt/model.hpp"
#include "dedukt/presets.hpp"
#include "dedukt/sat.hpp"

namespace dedukt::cli {

namespace {

using nlohmann::json;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;

bool color_enabled() {
  const char* v = std::getenv("DEDUKT_COLOR");
  return v && std::string(v) == "1";
}

std::string painted(const std::string& s, const char* code) {
  if (!color_enabled()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

std::string verdict_text(const std::string& s) {
  if (s == "true" || s == "sat" || s == "derivable") return painted(s, "32");
  if (s == "unknown") return painted(s, "33");
  return painted(s, "31");
}

struct CommonInputs {
  std::string preset;
  std::string system_file;
  std::string sig_file;
  int agents = 1;
};

DeductiveSystem resolve_system(const CommonInputs& in) {
  if (!in.preset.empty()) return load_preset(in.preset);
  if (!in.system_file.empty()) return load_system_file(in.system_file);
  throw ValidationError("a system is required: --preset NAME or --system FILE");
}

/// Base signature for formula parsing; nullopt means infer from the text.
std::optional<Signature> resolve_signature(const CommonInputs& in) {
  if (!in.preset.empty() || !in.system_file.empty())
    return resolve_system(in).base_signature();
  if (!in.sig_file.empty()) return load_system_file(in.sig_file).base_signature();
  return std::nullopt;
}

Formula parse_formula_arg(const std::string& text, const CommonInputs& in,
                          Signature& sig_out) {
  auto sig = resolve_signature(in);
  if (sig) {
    sig_out = *sig;
    return parse_formula(text, sig_out, in.agents);
  }
  return parse_formula_inferring(text, sig_out, in.agents);
}

json subst_json(const GroundSubst& s) {
  json j = json::object();
  for (const auto& [var, t] : s.bindings()) j[var] = to_string(t);
  return j;
}

void emit_trace_text(const Deduction& d, std::ostream& out) {
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Deduction::Step& s = d.steps[i];
    out << "  " << (i + 1) << ". " << to_string(s.term);
    if (s.from_gamma) {
      out << "  [given #" << (s.source + 1);
      if (!s.subst.empty()) out << " " << to_string(s.subst);
      out << "]";
    } else {
      out << "  [rule " << (s.source + 1);
      if (!s.subst.empty()) out << " " << to_string(s.subst);
      if (!s.premises.empty()) {
        out << " <-";
        for (std::size_t j = 0; j < s.premises.size(); ++j)
          out << (j ? "," : " ") << (s.premises[j] + 1);
      }
      out << "]";
    }
    out << "\n";
  }
}

json emit_trace_json(const Deduction& d) {
  json steps = json::array();
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Deduction::Step& s = d.steps[i];
    json j{{"index", i + 1}, {"term", to_string(s.term)}};
    json just;
    if (s.from_gamma) {
      just["kind"] = "given";
      just["source"] = s.source + 1;
    } else {
      just["kind"] = "rule";
      just["rule"] = s.source + 1;
      json prem = json::array();
      for (int p : s.premises) prem.push_back(p + 1);
      just["premises"] = prem;
    }
    just["subst"] = subst_json(s.subst);
    j["justification"] = just;
    steps.push_back(j);
  }
  return steps;
}

int tv_exit(TV v) {
  return v == TV::True ? kExitTrue : v == TV::False ? kExitFalse : kExitUnknown;
}

// -------------------------------------------------------------------------
// Subcommands

int cmd_derive(const CommonInputs& in, const std::string& from,
               const std::string& goal_text, const std::string& strategy_text,
               bool serial, bool as_json, std::ostream& out) {
  DeductiveSystem d = resolve_system(in);
  std::vector<Term> gamma = parse_term_list(from, d.signature());
  Term goal = parse_term(goal_text, d.signature());
  Strategy strategy = parse_strategy(strategy_text);
  DeriveResult r = derive(d, gamma, goal, strategy,
                          serial ? Exec::Serial : Exec::Parallel);

  std::string verdict = to_string(r.verdict);
  if (as_json) {
    json j{{"format", 1},
           {"command", "derive"},
           {"goal", to_string(goal)},
           {"strategy", to_string(strategy)},
           {"verdict", r.verdict == Verdict::Derivable      ? "derivable"
                       : r.verdict == Verdict::NotDerivable ? "not_derivable"
                                                            : "unknown"}};
    if (r.deduction) j["steps"] = emit_trace_json(*r.deduction);
    out << j.dump(2) << "\n";
  } else {
    out << verdict_text(verdict == "not derivable" ? "not derivable" : verdict)
        << "\n";
    if (r.deduction) emit_trace_text(*r.deduction, out);
  }
  switch (r.verdict) {
    case Verdict::Derivable: return kExitTrue;
    case Verdict::NotDerivable: return kExitFalse;
    default: return kExitUnknown;
  }
}

int cmd_check(const std::string& model_file, const std::string& state,
              const std::string& formula_text, const std::string& strategy_text,
              bool validate_all, bool as_json, std::ostream& out) {
  Structure m = load_model_file(model_file);
  Formula f = parse_formula(formula_text, m.base_signature(), m.agents());
  Strategy strategy = parse_strategy(strategy_text);
  ModelChecker checker(m, strategy);
  TV v = validate_all ? checker.valid_in(f) : checker.check(state, f);
  if (as_json) {
    json j{{"format", 1},
           {"command", validate_all ? "valid" : "check"},
           {"model", model_file},
           {"formula", formula_text},
           {"result", to_string(v)}};
    if (!validate_all) j["state"] = state;
    out << j.dump(2) << "\n";
  } else {
    out << verdict_text(to_string(v)) << "\n";
  }
  return tv_exit(v);
}

int cmd_sat(const CommonInputs& in, const std::string& formula_text,
            int max_obs, const std::string& pool_text, int max_states,
            const std::string& strategy_text, const std::string& witness_file,
            bool as_json, std::ostream& out) {
  Signature sig;
  Formula f = parse_formula_arg(formula_text, in, sig);

  SatResult r{SatResult::Outcome::Unknown, std::nullopt, "", ""};
  if (in.agents > 1) {
    r = sat_multi_bounded(f, sig, in.agents, max_states);
  } else if (!in.preset.empty() || !in.system_file.empty()) {
    DeductiveSystem d = resolve_system(in);
    // reparse over the system's signature so atoms agree with it
    Formula fd = parse_formula(formula_text, d.base_signature(), 1);
    std::vector<Term> pool = pool_text.empty()
                                 ? default_pool(fd)
                                 : parse_term_list(pool_text, d.base_signature());
    int effective_obs = max_obs;
    if (effective_obs < 0) effective_obs = static_cast<int>(pool.size());
    r = sat_fixed_d(fd, d, effective_obs, pool, parse_strategy(strategy_text));
  } else {
    r = sat_general(f, sig);
  }

  std::string verdict = r.outcome == SatResult::Outcome::Sat     ? "sat"
                        : r.outcome == SatResult::Outcome::Unsat ? "unsat"
                                                                 : "unknown";
  if (r.witness && !witness_file.empty())
    write_model_files(*r.witness, witness_file);

  if (as_json) {
    json j{{"format", 1}, {"command", "sat"}, {"formula", formula_text},
           {"verdict", verdict}};
    if (r.witness) j["witness_state"] = r.witness_state;
    if (r.witness && !witness_file.empty()) j["witness_file"] = witness_file;
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump(2) << "\n";
  } else {
    out << verdict_text(verdict) << "\n";
    if (r.witness) out << "witness state: " << r.witness_state << "\n";
    if (r.witness && !witness_file.empty())
      out << "witness model written to " << witness_file << "\n";
    if (!r.note.empty()) out << "note: " << r.note << "\n";
  }
  switch (r.outcome) {
    case SatResult::Outcome::Sat: return kExitTrue;
    case SatResult::Outcome::Unsat: return kExitFalse;
    default: return kExitUnknown;
  }
}

int cmd_axioms(const CommonInputs& in, int agent, const std::string& format,
               std::ostream& out) {
  DeductiveSystem d = resolve_system(in);
  int n = d.agent_count();
  std::vector<AxiomSchema> axioms = base_axioms(n);
  for (int i = 1; i <= n; ++i) {
    if (agent != 0 && i != agent) continue;
    for (AxiomSchema& s : rule_axioms(d, i)) axioms.push_back(std::move(s));
  }

  std::optional<Term> true_atom;
  if (auto c = d.base_signature().first_constant()) true_atom = Term::make(*c);
  const Term* hint = true_atom ? &*true_atom : nullptr;

  if (format == "json") {
    json list = json::array();
    for (const AxiomSchema& s : axioms) {
      json j{{"name", s.name}, {"instantiable", s.instantiable()}};
      if (s.agent != 0) j["agent"] = s.agent;
      if (s.origin == AxiomSchema::Origin::FromRule)
        j["origin"] = json{{"kind", "rule"}, {"rule", s.rule_index + 1}};
      else
        j["origin"] = json{{"kind", "base"}};
      if (s.tmpl) j["template"] = print_formula(*s.tmpl, hint);
      if (!s.note.empty()) j["note"] = s.note;
      list.push_back(j);
    }
    out << json{{"format", 1}, {"command", "axioms"}, {"axioms", list}}.dump(2)
        << "\n";
  } else {
    for (const AxiomSchema& s : axioms) {
      std::string name = s.name;
      if (s.agent != 0 && n > 1) name += "[" + std::to_string(s.agent) + "]";
      out << name << ": ";
      if (s.tmpl)
        out << print_formula(*s.tmpl, hint);
      else
        out << "(inference rule) " << s.note;
      out << "\n";
    }
  }
  return kExitTrue;
}

int cmd_nnf(const CommonInputs& in, const std::string& formula_text,
            bool as_json, std::ostream& out) {
  Signature sig;
  Formula f = parse_formula_arg(formula_text, in, sig);
  Formula n = nnf(f);
  if (as_json) {
    out << json{{"format", 1},
                {"command", "nnf"},
                {"input", formula_text},
                {"formula", print_formula(n)}}
               .dump(2)
        << "\n";
  } else {
    out << print_formula(n) << "\n";
  }
  return kExitTrue;
}

int cmd_translate(const CommonInputs& in, const std::string& formula_text,
                  const std::string& term_text, bool as_json, std::ostream& out) {
  if (formula_text.empty() == term_text.empty())
    throw ValidationError("translate needs exactly one of --formula or --term");
  json j{{"format", 1}, {"command", "translate"}};
  std::string result;
  if (!formula_text.empty()) {
    Signature sig;
    Formula f = parse_formula_arg(formula_text, in, sig);
    result = to_string(to_term(expand_dual(f), in.agents));
    j["term"] = result;
  } else {
    // parse the term over an extended signature; infer base symbols when no
    // signature is given
    Signature base;
    if (auto s = resolve_signature(in)) {
      base = *s;
      Signature full = extend_kd(base, in.agents);
      Term t = parse_term(term_text, full);
      result = print_formula(from_term(t, base, in.agents));
    } else {
      Signature scratch;
      for (const auto& [name, arity] : kd_symbols(in.agents))
        scratch.declare(name, arity);
      std::size_t pos = 0;
      Term t = parse_term_at_inferring(term_text, pos, scratch);
      if (pos != term_text.size()) throw ParseError("trailing input", pos);
      Signature inferred_base;
      for (const auto& [name, arity] : scratch.declarations()) {
        bool kd = false;
        for (const auto& [kn, ka] : kd_symbols(in.agents))
          if (kn == name) kd = true;
        if (!kd) inferred_base.declare(name, arity);
      }
      result = print_formula(from_term(t, inferred_base, in.agents));
    }
    j["formula"] = result;
  }
  if (as_json)
    out << j.dump(2) << "\n";
  else
    out << result << "\n";
  return kExitTrue;
}

int cmd_presets(const std::string& name, bool as_json, std::ostream& out) {
  if (!name.empty()) {
    DeductiveSystem d = load_preset(name);
    if (as_json) {
      out << json{{"format", 1},
                  {"command", "presets"},
                  {"name", name},
                  {"rules", d.rules().size()},
                  {"text", print_system(d)}}
                 .dump(2)
          << "\n";
    } else {
      out << print_system(d);
    }
    return kExitTrue;
  }
  if (as_json) {
    json list = json::array();
    for (const PresetInfo& p : preset_catalog()) {
      DeductiveSystem d = load_preset(p.name);
      list.push_back(json{{"name", p.name},
                          {"rules", d.rules().size()},
                          {"summary", p.summary}});
    }
    out << json{{"format", 1}, {"command", "presets"}, {"presets", list}}.dump(2)
        << "\n";
  } else {
    for (const PresetInfo& p : preset_catalog()) {
      DeductiveSystem d = load_preset(p.name);
      out << p.name << "\t" << d.rules().size() << " rules\t" << p.summary
          << "\n";
    }
  }
  return kExitTrue;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"dedukt: deduction, model checking and satisfiability for "
               "epistemic reasoning over deductive systems"};
  app.require_subcommand(1);

  CommonInputs in;
  std::string from, goal, formula, term, model_file, state, pool, witness;
  std::string strategy = "local";
  std::string format = "text";
  std::string preset_name;
  int agent = 0;
  int max_obs = -1;
  int max_states = 3;
  bool as_json = false;
  bool serial = false;

  auto add_common = [&](CLI::App* cmd, bool with_sig) {
    cmd->add_option("--preset", in.preset, "named preset system");
    cmd->add_option("--system", in.system_file, "system file");
    if (with_sig) cmd->add_option("--sig", in.sig_file, "signature file");
    cmd->add_flag("--json", as_json, "machine-readable output");
  };

  CLI::App* c_derive = app.add_subcommand("derive", "decide a deduction query");
  add_common(c_derive, false);
  c_derive->add_option("--from", from, "comma-separated premise terms")->required();
  c_derive->add_option("--goal", goal, "ground goal term")->required();
  c_derive->add_option("--strategy", strategy, "local | bounded:N");
  c_derive->add_flag("--serial", serial, "run the saturation kernel serially");

  CLI::App* c_check = app.add_subcommand("check", "evaluate a formula at a state");
  c_check->add_option("--model", model_file, "model file")->required();
  c_check->add_option("--state", state, "state name")->required();
  c_check->add_option("--formula", formula, "formula")->required();
  c_check->add_option("--strategy", strategy, "local | bounded:N");
  c_check->add_flag("--json", as_json, "machine-readable output");

  CLI::App* c_valid = app.add_subcommand("valid", "evaluate a formula at every state");
  c_valid->add_option("--model", model_file, "model file")->required();
  c_valid->add_option("--formula", formula, "formula")->required();
  c_valid->add_option("--strategy", strategy, "local | bounded:N");
  c_valid->add_flag("--json", as_json, "machine-readable output");

  CLI::App* c_sat = app.add_subcommand("sat", "decide satisfiability");
  add_common(c_sat, true);
  c_sat->add_option("--formula", formula, "formula")->required();
  c_sat->add_option("--agents", in.agents, "agent count (default 1)");
  c_sat->add_option("--max-obs", max_obs, "observation-set size bound");
  c_sat->add_option("--pool", pool, "candidate observation terms");
  c_sat->add_option("--max-states", max_states, "state bound for several agents");
  c_sat->add_option("--strategy", strategy, "deduction strategy for fixed systems");
  c_sat->add_option("--witness", witness, "write a replayable witness model");

  CLI::App* c_axioms = app.add_subcommand("axioms", "emit the axiom system");
  add_common(c_axioms, false);
  c_axioms->add_option("--agent", agent, "restrict rule axioms to one agent");
  c_axioms->add_option("--format", format, "text | json");

  CLI::App* c_nnf = app.add_subcommand("nnf", "negation normal form");
  add_common(c_nnf, true);
  c_nnf->add_option("--formula", formula, "formula")->required();
  c_nnf->add_option("--agents", in.agents, "agent count (default 1)");

  CLI::App* c_translate =
      app.add_subcommand("translate", "between formulas and terms");
  add_common(c_translate, true);
  c_translate->add_option("--formula", formula, "formula to translate to a term");
  c_translate->add_option("--term", term, "term to translate to a formula");
  c_translate->add_option("--agents", in.agents, "agent count (default 1)");

  CLI::App* c_presets = app.add_subcommand("presets", "list or print presets");
  c_presets->add_option("--name", preset_name, "print one preset");
  c_presets->add_flag("--json", as_json, "machine-readable output");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitTrue;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(c_derive))
      return cmd_derive(in, from, goal, strategy, serial, as_json, out);
    if (app.got_subcommand(c_check))
      return cmd_check(model_file, state, formula, strategy, false, as_json, out);
    if (app.got_subcommand(c_valid))
      return cmd_check(model_file, "", formula, strategy, true, as_json, out);
    if (app.got_subcommand(c_sat))
      return cmd_sat(in, formula, max_obs, pool, max_states, strategy, witness,
                     as_json, out);
    if (app.got_subcommand(c_axioms)) return cmd_axioms(in, agent, format, out);
    if (app.got_subcommand(c_nnf)) return cmd_nnf(in, formula, as_json, out);
    if (app.got_subcommand(c_translate))
      return cmd_translate(in, formula, term, as_json, out);
    if (app.got_subcommand(c_presets))
      return cmd_presets(preset_name, as_json, out);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << "usage error: no command\n";
  return kExitUsage;
}

}  // namespace dedukt::cli
