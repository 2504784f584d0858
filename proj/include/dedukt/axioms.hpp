#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dedukt/formula.hpp"
#include "dedukt/rules.hpp"

namespace dedukt {

/// An axiom schema. Metavariables appear as ?phi / ?psi (standing for
/// formulas, bound through their term translation) and as term variables
/// inside atoms and observations (standing for ground terms). Inference rules
/// (Taut, MP, K2) are emitted as documentation entries without a template.
struct AxiomSchema {
  enum class Origin { Base, FromRule };

  std::string name;
  int agent = 0;  // 0 for the agent-independent documentation entries
  Origin origin = Origin::Base;
  int rule_index = -1;  // FromRule only
  std::optional<Formula> tmpl;
  std::string note;

  bool instantiable() const { return tmpl.has_value(); }
};

/// K1-K5 and X1-X3 for every agent, preceded by the Taut/MP/K2 documentation
/// entries.
std::vector<AxiomSchema> base_axioms(int agents);

/// One schema per rule of the system: (X_i t1^R & ... & X_i tk^R) => X_i t^R,
/// an empty conjunction rendered as `true`. Translation failures carry the
/// rule index in the error message.
std::vector<AxiomSchema> rule_axioms(const DeductiveSystem& d, int agent);

/// Fills every metavariable: formula metavariables from the term translation
/// of their binding, term variables by substitution. Throws on a missing
/// binding or an ill-formed result.
Formula instantiate(const AxiomSchema& schema, const GroundSubst& rho,
                    const Signature& base_sig, int agents);

/// Names all metavariables of the schema (formula and term alike).
std::vector<std::string> metavariables(const AxiomSchema& schema);

}  // namespace dedukt
