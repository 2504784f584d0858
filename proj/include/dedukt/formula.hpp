#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dedukt/term.hpp"

namespace dedukt {

/// Epistemic formula over ground-term atoms. Disjunction and implication are
/// abbreviations and are expanded away at construction; the dual modality L
/// (= !K!) appears only in negation-normal-form output. MetaVar nodes occur
/// only in axiom schema templates.
///
/// Atom and Obs terms are ground in well-formed formulas; schema templates may
/// carry term variables that instantiation fills in.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Know, XKnow, Obs, L, MetaVar };

  static Formula atom(Term t);
  static Formula metavar(std::string name);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula know(int agent, Formula f);
  static Formula xknow(int agent, Formula f);
  static Formula obs(int agent, Term t);
  static Formula dual(int agent, Formula f);  // the L modality

  /// a | b, expanded to !(!a & !b).
  static Formula disj(Formula a, Formula b);
  /// a => b, expanded to !a | b.
  static Formula implies(Formula a, Formula b);

  Kind kind() const { return node_->kind; }
  int agent() const { return node_->agent; }
  /// Atom / Obs payload.
  const Term& term() const { return *node_->term; }
  const std::string& name() const { return node_->name; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  std::size_t child_count() const { return node_->children.size(); }

  std::size_t hash() const { return node_->hash; }
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int agent = 0;
    std::optional<Term> term;
    std::string name;
    std::vector<Formula> children;
    std::size_t hash = 0;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula finish(Node n);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// The fixed tautology the `true` literal abbreviates: !(p0 & !p0) with p0 the
/// lexicographically first constant of the signature. Throws when the
/// signature has no constant.
Formula true_formula(const Signature& sig);
Formula false_formula(const Signature& sig);

/// Recognizes the !(!a & !b) encoding.
std::optional<std::pair<Formula, Formula>> as_disjunction(const Formula& f);

/// Number of symbols written, operation symbols counting one each.
int formula_size(const Formula& f);

bool has_metavariables(const Formula& f);

// ---------------------------------------------------------------------------
// Parsing and printing

/// Grammar (precedence low to high): `=>` right-assoc, `|`, `&`, prefix `!`,
/// `K<i>` / `X<i>` / `Ob<i>(term)`, atoms as ground terms, parentheses,
/// `true` / `false`. Bare K/X/Ob alias agent 1. The L modality is rejected.
Formula parse_formula(const std::string& text, const Signature& base_sig,
                      int agents);

/// Signature-free variant: atom symbols are declared on first use.
Formula parse_formula_inferring(const std::string& text, Signature& base_sig,
                                int agents);

/// Left inverse of parse_formula. Agent 1 prints without an index. When
/// `true_atom` is given, the fixed tautology over it prints as `true` (and its
/// negation as `false`).
std::string print_formula(const Formula& f, const Term* true_atom = nullptr);

// ---------------------------------------------------------------------------
// Translations

/// Formula-to-term translation; structural. Rejects L (expand first) and
/// metavariables.
Term to_term(const Formula& f, int agents);

/// Term-to-formula translation. Logical constructors occurring under base
/// constructors stay untranslated inside the atom; `ob_i` applied to a term
/// using logical constructors is an error. `sig` supplies the constant seeding
/// the `true` / `false` clauses.
Formula from_term(const Term& t, const Signature& base_sig, int agents);

/// Replaces every L_i f with !K_i !f.
Formula expand_dual(const Formula& f);

// ---------------------------------------------------------------------------
// Normal forms

/// Negation normal form: negations pushed down to atoms, observations and
/// X-subformulas, using L for pushed knowledge negations. X arguments are left
/// untouched. Disjunctions in the result use the !(!a & !b) encoding and
/// print as `|`.
Formula nnf(const Formula& f);

/// True when the result shape holds: through the disjunction lens, every
/// negation applies directly to an atom, an observation or an X-subformula.
bool nnf_shape_ok(const Formula& f);

/// Every X-subformula not nested under another X sits under an even number of
/// negations.
bool top_level_x_positive(const Formula& f);

}  // namespace dedukt

template <>
struct std::hash<dedukt::Formula> {
  std::size_t operator()(const dedukt::Formula& f) const { return f.hash(); }
};
