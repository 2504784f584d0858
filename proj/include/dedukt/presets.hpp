#pragma once

#include <string>
#include <vector>

#include "dedukt/rules.hpp"

namespace dedukt {

/// Named systems shipped with the tool:
///   DY        message derivation for a passive adversary (4 rules)
///   DY_CONSTR DY plus message construction (7 rules)
///   DY_PRIME  DY plus the observation-unwrapping rule (5 rules)
///   BOOL      incomplete linear-time propositional rules (11 rules)
///   SELF_X    reflection of explicit knowledge (1 rule)
struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();

bool is_preset_name(const std::string& name);

/// Exact rule sets; throws ValidationError for an unknown name.
DeductiveSystem load_preset(const std::string& name);

/// Message subterm relation: reflexive, descends into both concatenation
/// components and into the payload (never the key) of an encryption.
bool subterm_rel(const Term& t, const Term& u);

/// D_i extended so that agent i can simulate agent j's reasoning: observations
/// of j lift to xknow_j facts, and every rule of D_j is mirrored under
/// xknow_j.
DeductiveSystem simulative_extension(const DeductiveSystem& di,
                                     const DeductiveSystem& dj, int j);

}  // namespace dedukt
