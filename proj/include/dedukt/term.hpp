#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dedukt {

/// Error with a byte offset into the offending input.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Signature

/// Operation symbols with fixed arities. Declaration order is preserved for
/// printing; lookups go through a side map.
class Signature {
 public:
  void declare(const std::string& name, int arity);

  std::optional<int> arity(const std::string& name) const;
  bool declared(const std::string& name) const { return arity_.contains(name); }
  const std::vector<std::pair<std::string, int>>& declarations() const { return decls_; }

  /// 0 for a base signature; the agent count once extended.
  int kd_agents() const { return kd_agents_; }
  bool is_kd_symbol(const std::string& name) const { return kd_names_.contains(name); }

  /// Lexicographically least arity-0 base symbol, if any. Seeds the fixed
  /// tautology used for the `true` literal.
  std::optional<std::string> first_constant() const;

  friend Signature extend_kd(const Signature& base, int agents);

 private:
  std::vector<std::pair<std::string, int>> decls_;
  std::unordered_map<std::string, int> arity_;
  std::unordered_set<std::string> kd_names_;
  int kd_agents_ = 0;
};

/// Logical constructor name for a given agent: "know" in single-agent mode,
/// "know3" with several agents. Stems: ob, know, xknow.
std::string kd_name(const std::string& stem, int agent, int agents);

/// The constructors added on top of a base signature: true/0, false/0, not/1,
/// and/2, plus ob/know/xknow per agent.
std::vector<std::pair<std::string, int>> kd_symbols(int agents);

/// Base signature plus the logical constructors. Throws ValidationError when a
/// user symbol collides with a constructor name.
Signature extend_kd(const Signature& base, int agents);

// ---------------------------------------------------------------------------
// Term

/// Immutable first-order term: a variable or an application. Nodes are shared,
/// copies are cheap, and hash/size/groundness are cached at construction.
class Term {
 public:
  static Term variable(std::string name);
  static Term make(std::string symbol, std::vector<Term> args = {});

  bool is_variable() const { return node_->variable; }
  /// Variable name (without the '?' sigil) or the application's symbol.
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Term>& args() const { return node_->args; }

  bool is_ground() const { return node_->ground; }
  /// Number of symbols, each operation symbol and variable counting one.
  int size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    std::string symbol;
    std::vector<Term> args;
    bool variable;
    bool ground;
    int size;
    std::size_t hash;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Total structural order (variables first, then by symbol, then by arguments).
int compare(const Term& a, const Term& b);
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
using TermSet = std::unordered_set<Term, TermHash>;

std::string to_string(const Term& t);

/// Checks every symbol is declared with the right arity.
void validate_term(const Term& t, const Signature& sig);

/// True when the term uses only base-signature symbols (no logical
/// constructors). Variables are allowed.
bool over_base(const Term& t, const Signature& sig);

void collect_variables(const Term& t, std::vector<std::string>& out);
std::vector<std::string> variables_of(const Term& t);

/// t and all of its descendants.
TermSet subterm_set(const Term& t);

// ---------------------------------------------------------------------------
// Substitution

/// Finite map from variable names to ground terms.
class GroundSubst {
 public:
  /// Throws ValidationError when the binding is not ground.
  void bind(const std::string& var, const Term& ground);
  std::optional<Term> lookup(const std::string& var) const;
  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }

  /// Replaces every bound variable; unbound variables remain.
  Term apply(const Term& t) const;

 private:
  std::map<std::string, Term> bindings_;
};

bool operator==(const GroundSubst& a, const GroundSubst& b);
std::string to_string(const GroundSubst& s);

/// One-way matching: the unique minimal rho with rho(pattern) == subject, if
/// any. Repeated variables must bind consistently. `subject` must be ground.
std::optional<GroundSubst> match(const Term& pattern, const Term& subject);

/// Like match, but extends `acc` in place; returns false (leaving acc in an
/// unspecified state) when there is no consistent extension.
bool match_into(const Term& pattern, const Term& subject, GroundSubst& acc);

// ---------------------------------------------------------------------------
// Parsing

/// term := SYMBOL | SYMBOL '(' term (',' term)* ')' | '?' IDENT
/// Whitespace is insignificant. Symbols must be declared in `sig`.
Term parse_term(const std::string& text, const Signature& sig);

/// Parses one term starting at `pos` within `src`; leaves `pos` after it.
/// Used by the formula and file parsers.
Term parse_term_at(const std::string& src, std::size_t& pos, const Signature& sig);

/// Like parse_term_at, but symbols are declared in `sig` on first use with the
/// arity they appear with; a later use with a different arity is an error.
/// Backs the CLI's signature-free mode.
Term parse_term_at_inferring(const std::string& src, std::size_t& pos,
                             Signature& sig);

/// Comma-separated list of terms ("a,f(b),c"). Empty input yields empty list.
std::vector<Term> parse_term_list(const std::string& text, const Signature& sig);

}  // namespace dedukt

template <>
struct std::hash<dedukt::Term> {
  std::size_t operator()(const dedukt::Term& t) const { return t.hash(); }
};
