#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dedukt/deduction.hpp"
#include "dedukt/formula.hpp"
#include "dedukt/rules.hpp"

namespace dedukt {

/// A state: an environment label plus one finite observation set per agent.
/// Observation terms are ground and over the base signature only.
struct ModelState {
  std::string name;
  std::string env;
  std::vector<TermSet> obs;  // index 0 = agent 1
  TermSet trueset;           // valuation: listed terms true, all others false
};

/// A deductive algorithmic knowledge structure: named states, a closed-world
/// valuation, and one deductive system per agent (all over the same extended
/// signature).
class Structure {
 public:
  Structure(std::vector<DeductiveSystem> systems, std::vector<ModelState> states,
            std::optional<bool> reliable_obs = std::nullopt);

  int agents() const { return systems_[0].agent_count(); }
  const Signature& base_signature() const { return systems_[0].base_signature(); }
  const Signature& signature() const { return systems_[0].signature(); }
  const std::vector<DeductiveSystem>& systems() const { return systems_; }
  const DeductiveSystem& system(int agent) const { return systems_[agent - 1]; }
  const std::vector<ModelState>& states() const { return states_; }
  const ModelState& state(const std::string& name) const;
  int state_index(const std::string& name) const;
  std::optional<bool> reliable_obs() const { return reliable_obs_; }

  /// s ~_i s': agent i has the same observations in both.
  bool indistinguishable(int agent, int s, int s2) const;

 private:
  std::vector<DeductiveSystem> systems_;
  std::vector<ModelState> states_;
  std::optional<bool> reliable_obs_;
};

/// Three-valued result; Unknown only arises from a Bounded deduction strategy.
enum class TV { False, True, Unknown };
std::string to_string(TV v);

/// Evaluator with a per-structure memo for deduction queries, keyed by
/// (agent, observation set, goal). Safe to share across threads.
class ModelChecker {
 public:
  explicit ModelChecker(const Structure& m, Strategy strategy = Strategy::local(),
                        Exec exec = Exec::Parallel)
      : m_(m), strategy_(strategy), exec_(exec) {}

  TV check(int state, const Formula& f) const;
  TV check(const std::string& state, const Formula& f) const;
  /// True at every state.
  TV valid_in(const Formula& f) const;

 private:
  TV explicit_knowledge(int agent, int state, const Formula& body) const;

  const Structure& m_;
  Strategy strategy_;
  Exec exec_;
  mutable std::map<std::string, Verdict> derive_memo_;
  mutable std::mutex memo_mutex_;
};

TV check(const Structure& m, const std::string& state, const Formula& f,
         Strategy strategy = Strategy::local());
TV valid_in(const Structure& m, const Formula& f,
            Strategy strategy = Strategy::local());

/// One state per intercept set; each intercept is recv(t) with `has` not
/// occurring in t. The valuation makes has(u) true exactly when u is a message
/// subterm of something intercepted; the agent runs the DY_PRIME system.
Structure build_dy_model(const std::vector<std::vector<Term>>& intercepts);

// ---------------------------------------------------------------------------
// Model files
//
//   model {
//     agents: 1;                      (optional, default 1)
//     reliable_obs: yes;              (optional)
//     system: "dy.rules";             (or system[i]: ...; "preset:DY" works)
//     state s1 { obs: t, t; true: t; env: "label"; }
//   }
//
// Paths are resolved relative to `base_dir`. '#' starts a line comment.

Structure parse_model(const std::string& text, const std::string& base_dir);
Structure load_model_file(const std::string& path);

/// Writes `path` plus one "<path>.<i>.rules" system file per agent; the model
/// file references them by relative name.
void write_model_files(const Structure& m, const std::string& path);

/// The model text that write_model_files produces (with the given system file
/// references).
std::string print_model(const Structure& m,
                        const std::vector<std::string>& system_refs);

}  // namespace dedukt
