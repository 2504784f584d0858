#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dedukt/deduction.hpp"
#include "dedukt/formula.hpp"
#include "dedukt/model.hpp"

namespace dedukt {

// ---------------------------------------------------------------------------
// The target modal language: propositional logic plus one K modality per
// agent, over atoms that remember what they stand for.

/// Atom of the modal target language: a plain name, a term atom p_t, an
/// X-subformula atom q_psi, or an observation atom r_t (the latter three carry
/// their source object and agent).
struct MAtom {
  enum class Kind { Plain, TermAtom, XAtom, ObAtom };
  Kind kind;
  int agent = 1;
  std::string plain;
  std::optional<Term> term;     // TermAtom / ObAtom
  std::optional<Formula> x;     // XAtom

  static MAtom plain_atom(std::string name);
  static MAtom term_atom(Term t);
  static MAtom x_atom(int agent, Formula psi);
  static MAtom ob_atom(int agent, Term t);

  /// Canonical map key.
  std::string key() const;
};

class ModalFormula {
 public:
  enum class Kind { Const, Atom, Not, And, K };

  static ModalFormula constant(bool b);
  static ModalFormula atom(MAtom a);
  static ModalFormula negate(ModalFormula f);
  static ModalFormula conj(ModalFormula a, ModalFormula b);
  static ModalFormula know(int agent, ModalFormula f);

  static ModalFormula disj(ModalFormula a, ModalFormula b);
  static ModalFormula implies(ModalFormula a, ModalFormula b);
  static ModalFormula iff(ModalFormula a, ModalFormula b);

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  int agent() const { return node_->agent; }
  const MAtom& matom() const { return *node_->atom; }
  const ModalFormula& child(std::size_t i = 0) const { return node_->children[i]; }
  std::size_t child_count() const { return node_->children.size(); }

  /// Canonical text form (also the dedup key for K-subformulas).
  std::string print() const;
  /// Node count, atoms counting one.
  int size() const;

 private:
  struct Node {
    Kind kind;
    bool value = false;
    int agent = 1;
    std::optional<MAtom> atom;
    std::vector<ModalFormula> children;
  };
  explicit ModalFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Atom keys in first-occurrence order.
std::vector<MAtom> modal_atoms(const ModalFormula& f);

// ---------------------------------------------------------------------------
// Translations

/// phi with terms replaced by p_t, X psi by q_psi and Ob(t) by r_t, conjoined
/// with the frame constraints r_t <=> K r_t, q_psi <=> K q_psi,
/// r_t => q_{Ob(t)} and q_{Ob(t)} <=> K q_{Ob(t)} for the observations and
/// X-subformulas occurring in phi. Size stays linear in |phi|.
ModalFormula translate_tilde(const Formula& phi, int agents = 1);

/// Plain-atom modal formula embedded back into the logic: the k-th atom
/// becomes the term not^k(true), K is preserved.
Formula embed_modal(const ModalFormula& f);
/// The term encoding the k-th plain atom (k counts from 0).
Term tower_term(int k);

// ---------------------------------------------------------------------------
// Decision procedures

struct SatResult {
  enum class Outcome { Sat, Unsat, Unknown };
  Outcome outcome;
  std::optional<Structure> witness;  // engaged iff Sat
  std::string witness_state;
  std::string note;
};

/// Complete satisfiability for a single-K modal formula, by search over
/// universal-relation models with at most one world per K-subformula plus one.
/// A Sat witness is a structure in which embed-and-check replays the formula
/// (plain atoms through their tower terms).
SatResult sat_s5(const ModalFormula& f, const Signature& base_sig = Signature());

/// Single-agent satisfiability over arbitrary systems: sat_s5 on the tilde
/// translation; a Sat verdict reconstructs a replayable witness structure with
/// one shared observation set and one premise-free rule per true X-atom.
SatResult sat_general(const Formula& phi, const Signature& base_sig);

/// Satisfiability over structures that all use the fixed system `d`: searches
/// shared observation sets drawn from `candidate_pool` (at most max_obs_size
/// observations), verifying every X-subformula against the deduction relation.
/// Complete relative to the pool and bound; Unknown when a deduction query
/// escalates.
SatResult sat_fixed_d(const Formula& phi, const DeductiveSystem& d,
                      int max_obs_size, const std::vector<Term>& candidate_pool,
                      Strategy strategy = Strategy::local());

/// Default pool: ground subterms of the formula's atoms and observation
/// arguments, closed under subterms.
std::vector<Term> default_pool(const Formula& phi);

/// Bounded incomplete search for several agents: enumerates structures with at
/// most max_states states built over the formula's own atoms, observations and
/// X-subformulas; returns Unknown when the space is exhausted.
SatResult sat_multi_bounded(const Formula& phi, const Signature& base_sig,
                            int agents, int max_states);

}  // namespace dedukt
