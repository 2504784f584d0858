#pragma once

#include <string>
#include <vector>

#include "dedukt/term.hpp"

namespace dedukt {

/// Deduction rule: premises |> conclusion. Premises may be empty (axiom
/// rules), and the conclusion may carry variables absent from the premises.
struct Rule {
  std::vector<Term> premises;
  Term conclusion;
};

bool operator==(const Rule& a, const Rule& b);
std::string to_string(const Rule& r);

/// A finite rule set over a base signature extended with the logical
/// constructors for `agent_count` agents. Rules are identified by index.
class DeductiveSystem {
 public:
  DeductiveSystem(Signature base, std::vector<Rule> rules, int agent_count = 1);

  const Signature& base_signature() const { return base_; }
  /// The extended signature the rules live over.
  const Signature& signature() const { return full_; }
  const std::vector<Rule>& rules() const { return rules_; }
  int agent_count() const { return agents_; }

  /// Same signature, rules plus `extra` (exact duplicates dropped; a rule set
  /// has set semantics).
  DeductiveSystem with_rules(std::vector<Rule> extra) const;

 private:
  Signature base_;
  Signature full_;
  std::vector<Rule> rules_;
  int agents_;
};

/// System file:
///   agents: n;            (optional, default 1)
///   sig { name/arity; ... }
///   rules { p1, p2 -> c; |- c2; ... }
/// '#' starts a line comment. Rule terms are parsed over the extended
/// signature; the sig section declares base symbols only.
DeductiveSystem parse_system(const std::string& text);
DeductiveSystem load_system_file(const std::string& path);

/// Canonical text form; parse_system(print_system(d)) reproduces d.
std::string print_system(const DeductiveSystem& d);

}  // namespace dedukt
