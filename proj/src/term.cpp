#include "dedukt/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dedukt {

// ---------------------------------------------------------------------------
// Signature

void Signature::declare(const std::string& name, int arity) {
  if (name.empty()) throw ValidationError("empty symbol name");
  if (arity < 0) throw ValidationError("negative arity for symbol '" + name + "'");
  if (arity_.contains(name))
    throw ValidationError("symbol '" + name + "' declared twice");
  decls_.emplace_back(name, arity);
  arity_.emplace(name, arity);
}

std::optional<int> Signature::arity(const std::string& name) const {
  auto it = arity_.find(name);
  if (it == arity_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Signature::first_constant() const {
  std::optional<std::string> best;
  for (const auto& [name, arity] : decls_) {
    if (arity != 0 || kd_names_.contains(name)) continue;
    if (!best || name < *best) best = name;
  }
  return best;
}

std::string kd_name(const std::string& stem, int agent, int agents) {
  if (agents <= 1) return stem;
  return stem + std::to_string(agent);
}

std::vector<std::pair<std::string, int>> kd_symbols(int agents) {
  std::vector<std::pair<std::string, int>> out = {
      {"true", 0}, {"false", 0}, {"not", 1}, {"and", 2}};
  for (int i = 1; i <= agents; ++i) {
    out.emplace_back(kd_name("ob", i, agents), 1);
    out.emplace_back(kd_name("know", i, agents), 1);
    out.emplace_back(kd_name("xknow", i, agents), 1);
  }
  return out;
}

Signature extend_kd(const Signature& base, int agents) {
  if (agents < 1) throw ValidationError("agent count must be positive");
  if (base.kd_agents_ != 0)
    throw ValidationError("signature is already extended");
  Signature out = base;
  out.kd_agents_ = agents;
  for (const auto& [name, arity] : kd_symbols(agents)) {
    if (base.declared(name))
      throw ValidationError("symbol '" + name +
                            "' collides with a logical constructor");
    out.declare(name, arity);
    out.kd_names_.insert(name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Term

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

Term Term::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->symbol = std::move(name);
  node->variable = true;
  node->ground = false;
  node->size = 1;
  node->hash = mix(0x5a5a, hash_str(node->symbol));
  return Term(std::move(node));
}

Term Term::make(std::string symbol, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->symbol = std::move(symbol);
  node->variable = false;
  node->ground = true;
  node->size = 1;
  std::size_t h = mix(0xa7a7, hash_str(node->symbol));
  for (const Term& a : args) {
    node->ground = node->ground && a.is_ground();
    node->size += a.size();
    h = mix(h, a.hash());
  }
  node->hash = h;
  node->args = std::move(args);
  return Term(std::move(node));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  if (a.node_->variable != b.node_->variable) return false;
  if (a.node_->symbol != b.node_->symbol) return false;
  if (a.node_->args.size() != b.node_->args.size()) return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

int compare(const Term& a, const Term& b) {
  if (a == b) return 0;
  if (a.is_variable() != b.is_variable()) return a.is_variable() ? -1 : 1;
  if (int c = a.symbol().compare(b.symbol()); c != 0) return c < 0 ? -1 : 1;
  if (a.args().size() != b.args().size())
    return a.args().size() < b.args().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
  return 0;
}

std::string to_string(const Term& t) {
  std::string out;
  struct Writer {
    std::string& out;
    void write(const Term& t) {
      if (t.is_variable()) {
        out += '?';
        out += t.symbol();
        return;
      }
      out += t.symbol();
      if (t.args().empty()) return;
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        write(t.args()[i]);
      }
      out += ')';
    }
  } w{out};
  w.write(t);
  return out;
}

void validate_term(const Term& t, const Signature& sig) {
  if (t.is_variable()) return;
  auto ar = sig.arity(t.symbol());
  if (!ar) throw ValidationError("unknown symbol '" + t.symbol() + "'");
  if (static_cast<std::size_t>(*ar) != t.args().size())
    throw ValidationError("arity mismatch for '" + t.symbol() + "': declared " +
                          std::to_string(*ar) + ", used with " +
                          std::to_string(t.args().size()));
  for (const Term& a : t.args()) validate_term(a, sig);
}

bool over_base(const Term& t, const Signature& sig) {
  if (t.is_variable()) return true;
  if (sig.is_kd_symbol(t.symbol())) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return over_base(a, sig); });
}

void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.symbol()) == out.end())
      out.push_back(t.symbol());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

std::vector<std::string> variables_of(const Term& t) {
  std::vector<std::string> out;
  collect_variables(t, out);
  return out;
}

TermSet subterm_set(const Term& t) {
  TermSet out;
  struct Walker {
    TermSet& out;
    void walk(const Term& t) {
      if (!out.insert(t).second) return;
      for (const Term& a : t.args()) walk(a);
    }
  } w{out};
  w.walk(t);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

void GroundSubst::bind(const std::string& var, const Term& ground) {
  if (!ground.is_ground())
    throw ValidationError("binding for ?" + var + " is not ground");
  bindings_.insert_or_assign(var, ground);
}

std::optional<Term> GroundSubst::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

Term GroundSubst::apply(const Term& t) const {
  if (t.is_variable()) {
    if (auto b = lookup(t.symbol())) return *b;
    return t;
  }
  if (t.is_ground()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply(a));
  return Term::make(t.symbol(), std::move(args));
}

bool operator==(const GroundSubst& a, const GroundSubst& b) {
  return a.bindings() == b.bindings();
}

std::string to_string(const GroundSubst& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += "?" + var + ":=" + to_string(t);
  }
  return out + "}";
}

bool match_into(const Term& pattern, const Term& subject, GroundSubst& acc) {
  if (pattern.is_variable()) {
    if (auto prev = acc.lookup(pattern.symbol())) return *prev == subject;
    acc.bind(pattern.symbol(), subject);
    return true;
  }
  if (subject.is_variable()) return false;
  if (pattern.symbol() != subject.symbol()) return false;
  if (pattern.args().size() != subject.args().size()) return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.args()[i], subject.args()[i], acc)) return false;
  return true;
}

std::optional<GroundSubst> match(const Term& pattern, const Term& subject) {
  if (!subject.is_ground())
    throw ValidationError("match subject must be ground: " + to_string(subject));
  GroundSubst acc;
  if (!match_into(pattern, subject, acc)) return std::nullopt;
  return acc;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

void skip_ws(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string lex_ident(const std::string& s, std::size_t& pos, const char* what) {
  skip_ws(s, pos);
  if (pos >= s.size() || !ident_start(s[pos]))
    throw ParseError(std::string("expected ") + what, pos);
  std::size_t start = pos;
  while (pos < s.size() && ident_char(s[pos])) ++pos;
  return s.substr(start, pos - start);
}

}  // namespace

namespace {

// `resolve(name, arity, pos)` validates or records a symbol use.
template <typename Resolve>
Term parse_term_rec(const std::string& src, std::size_t& pos, Resolve&& resolve) {
  skip_ws(src, pos);
  if (pos < src.size() && src[pos] == '?') {
    ++pos;
    if (pos >= src.size() || !ident_start(src[pos]))
      throw ParseError("expected variable name after '?'", pos);
    return Term::variable(lex_ident(src, pos, "variable name"));
  }
  std::size_t sym_pos = pos;
  std::string sym = lex_ident(src, pos, "symbol");
  std::vector<Term> args;
  skip_ws(src, pos);
  if (pos < src.size() && src[pos] == '(') {
    ++pos;
    while (true) {
      args.push_back(parse_term_rec(src, pos, resolve));
      skip_ws(src, pos);
      if (pos < src.size() && src[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < src.size() && src[pos] == ')') {
        ++pos;
        break;
      }
      throw ParseError("expected ',' or ')' in argument list", pos);
    }
  }
  resolve(sym, static_cast<int>(args.size()), sym_pos);
  return Term::make(std::move(sym), std::move(args));
}

}  // namespace

Term parse_term_at(const std::string& src, std::size_t& pos, const Signature& sig) {
  return parse_term_rec(src, pos,
                        [&](const std::string& sym, int arity, std::size_t at) {
                          auto declared = sig.arity(sym);
                          if (!declared)
                            throw ParseError("unknown symbol '" + sym + "'", at);
                          if (*declared != arity)
                            throw ParseError(
                                "arity mismatch for '" + sym + "': declared " +
                                    std::to_string(*declared) + ", used with " +
                                    std::to_string(arity),
                                at);
                        });
}

Term parse_term_at_inferring(const std::string& src, std::size_t& pos,
                             Signature& sig) {
  return parse_term_rec(src, pos,
                        [&](const std::string& sym, int arity, std::size_t at) {
                          auto declared = sig.arity(sym);
                          if (!declared) {
                            sig.declare(sym, arity);
                            return;
                          }
                          if (*declared != arity)
                            throw ParseError("symbol '" + sym +
                                                 "' used with inconsistent arity",
                                             at);
                        });
}

Term parse_term(const std::string& text, const Signature& sig) {
  std::size_t pos = 0;
  Term t = parse_term_at(text, pos, sig);
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing input after term", pos);
  return t;
}

std::vector<Term> parse_term_list(const std::string& text, const Signature& sig) {
  std::vector<Term> out;
  std::size_t pos = 0;
  skip_ws(text, pos);
  if (pos == text.size()) return out;
  while (true) {
    out.push_back(parse_term_at(text, pos, sig));
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing input after term list", pos);
  return out;
}

}  // namespace dedukt
