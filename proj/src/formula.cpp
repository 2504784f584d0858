#include "dedukt/formula.hpp"

#include <algorithm>
#include <cctype>

namespace dedukt {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::finish(Node n) {
  std::size_t h = mix(0x0f0f, static_cast<std::size_t>(n.kind));
  h = mix(h, static_cast<std::size_t>(n.agent));
  if (n.term) h = mix(h, n.term->hash());
  if (!n.name.empty()) h = mix(h, std::hash<std::string>{}(n.name));
  for (const Formula& c : n.children) h = mix(h, c.hash());
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(Term t) {
  Node n;
  n.kind = Kind::Atom;
  n.term = std::move(t);
  return finish(std::move(n));
}

Formula Formula::metavar(std::string name) {
  Node n;
  n.kind = Kind::MetaVar;
  n.name = std::move(name);
  return finish(std::move(n));
}

Formula Formula::negate(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.children.push_back(std::move(f));
  return finish(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  Node n;
  n.kind = Kind::And;
  n.children.push_back(std::move(a));
  n.children.push_back(std::move(b));
  return finish(std::move(n));
}

Formula Formula::know(int agent, Formula f) {
  Node n;
  n.kind = Kind::Know;
  n.agent = agent;
  n.children.push_back(std::move(f));
  return finish(std::move(n));
}

Formula Formula::xknow(int agent, Formula f) {
  Node n;
  n.kind = Kind::XKnow;
  n.agent = agent;
  n.children.push_back(std::move(f));
  return finish(std::move(n));
}

Formula Formula::obs(int agent, Term t) {
  Node n;
  n.kind = Kind::Obs;
  n.agent = agent;
  n.term = std::move(t);
  return finish(std::move(n));
}

Formula Formula::dual(int agent, Formula f) {
  Node n;
  n.kind = Kind::L;
  n.agent = agent;
  n.children.push_back(std::move(f));
  return finish(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
  return negate(conj(negate(std::move(a)), negate(std::move(b))));
}

Formula Formula::implies(Formula a, Formula b) {
  return disj(negate(std::move(a)), std::move(b));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  if (a.kind() != b.kind() || a.agent() != b.agent()) return false;
  switch (a.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
      if (!(a.term() == b.term())) return false;
      break;
    case Formula::Kind::MetaVar:
      if (a.name() != b.name()) return false;
      break;
    default:
      break;
  }
  if (a.child_count() != b.child_count()) return false;
  for (std::size_t i = 0; i < a.child_count(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

Formula true_formula(const Signature& sig) {
  auto p0 = sig.first_constant();
  if (!p0)
    throw ValidationError(
        "the signature has no constant to seed the true/false abbreviation");
  Formula a = Formula::atom(Term::make(*p0));
  return Formula::negate(Formula::conj(a, Formula::negate(a)));
}

Formula false_formula(const Signature& sig) {
  return Formula::negate(true_formula(sig));
}

std::optional<std::pair<Formula, Formula>> as_disjunction(const Formula& f) {
  if (f.kind() != Formula::Kind::Not) return std::nullopt;
  const Formula& c = f.child();
  if (c.kind() != Formula::Kind::And) return std::nullopt;
  if (c.child(0).kind() != Formula::Kind::Not ||
      c.child(1).kind() != Formula::Kind::Not)
    return std::nullopt;
  return std::make_pair(c.child(0).child(), c.child(1).child());
}

int formula_size(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return f.term().size();
    case Formula::Kind::Obs:
      return 1 + f.term().size();
    case Formula::Kind::MetaVar:
      return 1;
    case Formula::Kind::And:
      return 1 + formula_size(f.child(0)) + formula_size(f.child(1));
    default:
      return 1 + formula_size(f.child(0));
  }
}

bool has_metavariables(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::MetaVar:
      return true;
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
      return false;
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i)
        if (has_metavariables(f.child(i))) return true;
      return false;
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FormulaParser {
  const std::string& src;
  std::size_t pos = 0;
  const Signature* strict_sig;  // one of the two is active
  Signature* infer_sig;
  int agents;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  bool at(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }

  bool eat(char c) {
    if (!at(c)) return false;
    ++pos;
    return true;
  }

  bool eat2(const char* two) {
    skip_ws();
    if (src.compare(pos, 2, two) != 0) return false;
    pos += 2;
    return true;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string peek_ident() {
    skip_ws();
    std::size_t p = pos;
    if (p >= src.size() || !ident_start(src[p])) return {};
    std::size_t start = p;
    while (p < src.size() && ident_char(src[p])) ++p;
    return src.substr(start, p - start);
  }

  // Operator tokens: K, X, L, Ob with an optional agent index.
  static std::optional<std::pair<char, int>> modal_token(const std::string& id) {
    std::size_t stem = 0;
    char op;
    if (id.rfind("Ob", 0) == 0) {
      op = 'O';
      stem = 2;
    } else if (!id.empty() && (id[0] == 'K' || id[0] == 'X' || id[0] == 'L')) {
      op = id[0];
      stem = 1;
    } else {
      return std::nullopt;
    }
    int agent = 1;
    if (stem < id.size()) {
      for (std::size_t i = stem; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
      agent = std::stoi(id.substr(stem));
    }
    return std::make_pair(op, agent);
  }

  void check_agent(int agent, std::size_t at) {
    if (agent < 1 || agent > agents)
      throw ParseError("agent index " + std::to_string(agent) +
                           " out of range (1.." + std::to_string(agents) + ")",
                       at);
  }

  Term parse_term_here() {
    return strict_sig ? parse_term_at(src, pos, *strict_sig)
                      : parse_term_at_inferring(src, pos, *infer_sig);
  }

  const Signature& sig() const { return strict_sig ? *strict_sig : *infer_sig; }

  Formula implication() {
    Formula lhs = disjunction();
    if (eat2("=>")) return Formula::implies(std::move(lhs), implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at('|')) {
      ++pos;
      f = Formula::disj(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at('&')) {
      ++pos;
      f = Formula::conj(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    skip_ws();
    if (eat('!')) return Formula::negate(unary());
    std::size_t start = pos;
    std::string id = peek_ident();
    if (auto tok = modal_token(id)) {
      auto [op, agent] = *tok;
      pos += id.size();
      check_agent(agent, start);
      switch (op) {
        case 'K':
          return Formula::know(agent, unary());
        case 'X':
          return Formula::xknow(agent, unary());
        case 'L':
          throw ParseError("the L modality is internal and cannot be written",
                           start);
        case 'O': {
          skip_ws();
          if (!eat('(')) throw ParseError("expected '(' after Ob", pos);
          Term t = parse_term_here();
          if (!eat(')')) throw ParseError("expected ')' after observation", pos);
          if (!t.is_ground())
            throw ParseError("Ob argument must be ground", start);
          if (!over_base(t, sig()))
            throw ParseError("Ob argument must not use logical constructors",
                             start);
          return Formula::obs(agent, std::move(t));
        }
      }
    }
    return primary();
  }

  Formula primary() {
    skip_ws();
    if (eat('(')) {
      Formula f = implication();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return f;
    }
    std::size_t start = pos;
    std::string id = peek_ident();
    if (id == "true") {
      pos += id.size();
      return true_formula(sig());
    }
    if (id == "false") {
      pos += id.size();
      return false_formula(sig());
    }
    if (id.empty())
      throw ParseError("expected a formula", pos);
    Term t = parse_term_here();
    if (!t.is_ground())
      throw ParseError("atoms must be ground terms", start);
    if (!over_base(t, sig()))
      throw ParseError("atoms must not use logical constructors", start);
    return Formula::atom(std::move(t));
  }

  Formula run() {
    Formula f = implication();
    skip_ws();
    if (pos != src.size()) throw ParseError("trailing input after formula", pos);
    return f;
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& base_sig,
                      int agents) {
  FormulaParser p{text, 0, &base_sig, nullptr, agents};
  return p.run();
}

Formula parse_formula_inferring(const std::string& text, Signature& base_sig,
                                int agents) {
  FormulaParser p{text, 0, nullptr, &base_sig, agents};
  return p.run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Precedence: => 1, | 2, & 3, prefix 4, primary 5.
int sugar_prec(const Formula& f, const Term* true_atom);

bool is_true_pattern(const Formula& f, const Term* true_atom) {
  if (!true_atom || f.kind() != Formula::Kind::Not) return false;
  const Formula& c = f.child();
  if (c.kind() != Formula::Kind::And) return false;
  const Formula& a = c.child(0);
  const Formula& b = c.child(1);
  return a.kind() == Formula::Kind::Atom && a.term() == *true_atom &&
         b.kind() == Formula::Kind::Not && b.child() == a;
}

std::optional<std::pair<Formula, Formula>> as_implication(const Formula& f) {
  auto d = as_disjunction(f);
  if (!d || d->first.kind() != Formula::Kind::Not) return std::nullopt;
  return std::make_pair(d->first.child(), d->second);
}

void print_rec(const Formula& f, int min_prec, const Term* true_atom,
               std::string& out) {
  int prec = sugar_prec(f, true_atom);
  bool parens = prec < min_prec;
  if (parens) out += '(';

  if (is_true_pattern(f, true_atom)) {
    out += "true";
  } else if (f.kind() == Formula::Kind::Not &&
             is_true_pattern(f.child(), true_atom)) {
    out += "false";
  } else if (auto imp = as_implication(f)) {
    print_rec(imp->first, 2, true_atom, out);
    out += " => ";
    print_rec(imp->second, 1, true_atom, out);
  } else if (auto d = as_disjunction(f)) {
    print_rec(d->first, 2, true_atom, out);
    out += " | ";
    print_rec(d->second, 3, true_atom, out);
  } else {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        out += to_string(f.term());
        break;
      case Formula::Kind::MetaVar:
        out += '?' + f.name();
        break;
      case Formula::Kind::Obs:
        out += "Ob";
        if (f.agent() != 1) out += std::to_string(f.agent());
        out += '(' + to_string(f.term()) + ')';
        break;
      case Formula::Kind::Not:
        out += '!';
        print_rec(f.child(), 4, true_atom, out);
        break;
      case Formula::Kind::And:
        print_rec(f.child(0), 3, true_atom, out);
        out += " & ";
        print_rec(f.child(1), 4, true_atom, out);
        break;
      case Formula::Kind::Know:
      case Formula::Kind::XKnow:
      case Formula::Kind::L: {
        out += f.kind() == Formula::Kind::Know    ? "K"
               : f.kind() == Formula::Kind::XKnow ? "X"
                                                  : "L";
        if (f.agent() != 1) out += std::to_string(f.agent());
        out += ' ';
        print_rec(f.child(), 4, true_atom, out);
        break;
      }
    }
  }
  if (parens) out += ')';
}

int sugar_prec(const Formula& f, const Term* true_atom) {
  if (is_true_pattern(f, true_atom)) return 5;
  if (f.kind() == Formula::Kind::Not && is_true_pattern(f.child(), true_atom))
    return 5;
  if (as_implication(f)) return 1;
  if (as_disjunction(f)) return 2;
  switch (f.kind()) {
    case Formula::Kind::And:
      return 3;
    case Formula::Kind::Not:
    case Formula::Kind::Know:
    case Formula::Kind::XKnow:
    case Formula::Kind::L:
      return 4;
    default:
      return 5;
  }
}

}  // namespace

std::string print_formula(const Formula& f, const Term* true_atom) {
  std::string out;
  print_rec(f, 1, true_atom, out);
  return out;
}

// ---------------------------------------------------------------------------
// Translations

Term to_term(const Formula& f, int agents) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return f.term();
    case Formula::Kind::Not:
      return Term::make("not", {to_term(f.child(), agents)});
    case Formula::Kind::And:
      return Term::make("and", {to_term(f.child(0), agents),
                                to_term(f.child(1), agents)});
    case Formula::Kind::Know:
      return Term::make(kd_name("know", f.agent(), agents),
                        {to_term(f.child(), agents)});
    case Formula::Kind::XKnow:
      return Term::make(kd_name("xknow", f.agent(), agents),
                        {to_term(f.child(), agents)});
    case Formula::Kind::Obs:
      return Term::make(kd_name("ob", f.agent(), agents), {f.term()});
    case Formula::Kind::L:
      throw ValidationError("cannot translate the L modality; expand it first");
    case Formula::Kind::MetaVar:
      throw ValidationError("cannot translate a schema metavariable ?" +
                            f.name());
  }
  throw ValidationError("unreachable");
}

namespace {

// (stem, agent) when `name` is a logical constructor for some agent in 1..n.
std::optional<std::pair<std::string, int>> kd_stem(const std::string& name,
                                                   int agents) {
  for (const std::string& stem : {"ob", "know", "xknow"}) {
    for (int i = 1; i <= agents; ++i)
      if (name == kd_name(stem, i, agents)) return std::make_pair(stem, i);
  }
  return std::nullopt;
}

bool uses_kd(const Term& t, int agents) {
  if (t.is_variable()) return false;
  if (t.symbol() == "true" || t.symbol() == "false" || t.symbol() == "not" ||
      t.symbol() == "and" || kd_stem(t.symbol(), agents))
    return true;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return uses_kd(a, agents); });
}

}  // namespace

Formula from_term(const Term& t, const Signature& base_sig, int agents) {
  if (t.is_variable()) return Formula::atom(t);
  const std::string& s = t.symbol();
  if (s == "true" && t.args().empty()) return true_formula(base_sig);
  if (s == "false" && t.args().empty()) return false_formula(base_sig);
  if (s == "not" && t.args().size() == 1)
    return Formula::negate(from_term(t.args()[0], base_sig, agents));
  if (s == "and" && t.args().size() == 2)
    return Formula::conj(from_term(t.args()[0], base_sig, agents),
                         from_term(t.args()[1], base_sig, agents));
  if (auto stem = kd_stem(s, agents); stem && t.args().size() == 1) {
    const Term& arg = t.args()[0];
    if (stem->first == "know")
      return Formula::know(stem->second, from_term(arg, base_sig, agents));
    if (stem->first == "xknow")
      return Formula::xknow(stem->second, from_term(arg, base_sig, agents));
    if (uses_kd(arg, agents))
      throw ValidationError("ob applied to a term outside the base algebra: " +
                            to_string(t));
    return Formula::obs(stem->second, arg);
  }
  // Base constructor at the head: the whole term stays an atom, logical
  // constructors below it untranslated.
  return Formula::atom(t);
}

Formula expand_dual(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
    case Formula::Kind::MetaVar:
      return f;
    case Formula::Kind::L:
      return Formula::negate(Formula::know(
          f.agent(), Formula::negate(expand_dual(f.child()))));
    case Formula::Kind::Not:
      return Formula::negate(expand_dual(f.child()));
    case Formula::Kind::And:
      return Formula::conj(expand_dual(f.child(0)), expand_dual(f.child(1)));
    case Formula::Kind::Know:
      return Formula::know(f.agent(), expand_dual(f.child()));
    case Formula::Kind::XKnow:
      return Formula::xknow(f.agent(), expand_dual(f.child()));
  }
  throw ValidationError("unreachable");
}

// ---------------------------------------------------------------------------
// Negation normal form

Formula nnf(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
    case Formula::Kind::MetaVar:
    case Formula::Kind::XKnow:  // X arguments are opaque to the rewriting
      return f;
    case Formula::Kind::And:
      return Formula::conj(nnf(f.child(0)), nnf(f.child(1)));
    case Formula::Kind::Know:
      return Formula::know(f.agent(), nnf(f.child()));
    case Formula::Kind::L:
      return Formula::dual(f.agent(), nnf(f.child()));
    case Formula::Kind::Not: {
      const Formula& c = f.child();
      switch (c.kind()) {
        case Formula::Kind::Atom:
        case Formula::Kind::Obs:
        case Formula::Kind::MetaVar:
        case Formula::Kind::XKnow:
          return f;
        case Formula::Kind::Not:
          return nnf(c.child());
        case Formula::Kind::And:
          return Formula::disj(nnf(Formula::negate(c.child(0))),
                               nnf(Formula::negate(c.child(1))));
        case Formula::Kind::Know:
          return Formula::dual(c.agent(), nnf(Formula::negate(c.child())));
        case Formula::Kind::L:
          return Formula::know(c.agent(), nnf(Formula::negate(c.child())));
      }
      throw ValidationError("unreachable");
    }
  }
  throw ValidationError("unreachable");
}

bool nnf_shape_ok(const Formula& f) {
  if (auto d = as_disjunction(f))
    return nnf_shape_ok(d->first) && nnf_shape_ok(d->second);
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Obs:
    case Formula::Kind::MetaVar:
    case Formula::Kind::XKnow:
      return true;
    case Formula::Kind::And:
      return nnf_shape_ok(f.child(0)) && nnf_shape_ok(f.child(1));
    case Formula::Kind::Know:
    case Formula::Kind::L:
      return nnf_shape_ok(f.child());
    case Formula::Kind::Not: {
      Formula::Kind k = f.child().kind();
      return k == Formula::Kind::Atom || k == Formula::Kind::Obs ||
             k == Formula::Kind::XKnow || k == Formula::Kind::MetaVar;
    }
  }
  return false;
}

bool top_level_x_positive(const Formula& f) {
  struct Walk {
    bool ok = true;
    void go(const Formula& f, bool even) {
      if (!ok) return;
      switch (f.kind()) {
        case Formula::Kind::Atom:
        case Formula::Kind::Obs:
        case Formula::Kind::MetaVar:
          return;
        case Formula::Kind::XKnow:
          // occurrences inside are not top-level; stop here
          if (!even) ok = false;
          return;
        case Formula::Kind::Not:
          go(f.child(), !even);
          return;
        case Formula::Kind::And:
          go(f.child(0), even);
          go(f.child(1), even);
          return;
        case Formula::Kind::Know:
        case Formula::Kind::L:
          go(f.child(), even);
          return;
      }
    }
  } w;
  w.go(f, true);
  return w.ok;
}

}  // namespace dedukt
