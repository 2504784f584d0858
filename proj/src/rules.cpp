#include "dedukt/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dedukt {

bool operator==(const Rule& a, const Rule& b) {
  return a.premises == b.premises && a.conclusion == b.conclusion;
}

std::string to_string(const Rule& r) {
  std::string out;
  if (r.premises.empty()) {
    out = "|- ";
  } else {
    for (std::size_t i = 0; i < r.premises.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.premises[i]);
    }
    out += " -> ";
  }
  out += to_string(r.conclusion);
  return out;
}

DeductiveSystem::DeductiveSystem(Signature base, std::vector<Rule> rules,
                                 int agent_count)
    : base_(std::move(base)),
      full_(extend_kd(base_, agent_count)),
      rules_(std::move(rules)),
      agents_(agent_count) {
  for (const Rule& r : rules_) {
    for (const Term& p : r.premises) validate_term(p, full_);
    validate_term(r.conclusion, full_);
  }
}

DeductiveSystem DeductiveSystem::with_rules(std::vector<Rule> extra) const {
  std::vector<Rule> merged = rules_;
  for (Rule& r : extra) {
    if (std::find(merged.begin(), merged.end(), r) == merged.end())
      merged.push_back(std::move(r));
  }
  return DeductiveSystem(base_, std::move(merged), agents_);
}

// ---------------------------------------------------------------------------
// System files

namespace {

// Strips '#' line comments so the term parser never sees them.
std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char c : text) {
    if (c == '#') in_comment = true;
    if (c == '\n') in_comment = false;
    out += in_comment ? ' ' : c;
  }
  return out;
}

void skip_ws(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string peek_ident(const std::string& s, std::size_t pos) {
  skip_ws(s, pos);
  if (pos >= s.size() || !ident_start(s[pos])) return {};
  std::size_t start = pos;
  while (pos < s.size() && ident_char(s[pos])) ++pos;
  return s.substr(start, pos - start);
}

std::string lex_ident(const std::string& s, std::size_t& pos, const char* what) {
  skip_ws(s, pos);
  if (pos >= s.size() || !ident_start(s[pos]))
    throw ParseError(std::string("expected ") + what, pos);
  std::size_t start = pos;
  while (pos < s.size() && ident_char(s[pos])) ++pos;
  return s.substr(start, pos - start);
}

void expect(const std::string& s, std::size_t& pos, const std::string& tok) {
  skip_ws(s, pos);
  if (s.compare(pos, tok.size(), tok) != 0)
    throw ParseError("expected '" + tok + "'", pos);
  pos += tok.size();
}

bool try_token(const std::string& s, std::size_t& pos, const std::string& tok) {
  skip_ws(s, pos);
  if (s.compare(pos, tok.size(), tok) != 0) return false;
  pos += tok.size();
  return true;
}

int lex_int(const std::string& s, std::size_t& pos) {
  skip_ws(s, pos);
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw ParseError("expected a number", pos);
  return std::stoi(s.substr(start, pos - start));
}

}  // namespace

DeductiveSystem parse_system(const std::string& raw) {
  std::string text = strip_comments(raw);
  std::size_t pos = 0;
  int agents = 1;
  if (peek_ident(text, pos) == "agents") {
    lex_ident(text, pos, "agents");
    expect(text, pos, ":");
    agents = lex_int(text, pos);
    expect(text, pos, ";");
    if (agents < 1) throw ParseError("agent count must be positive", pos);
  }

  expect(text, pos, "sig");
  expect(text, pos, "{");
  Signature base;
  while (!try_token(text, pos, "}")) {
    std::string name = lex_ident(text, pos, "symbol name");
    expect(text, pos, "/");
    int arity = lex_int(text, pos);
    expect(text, pos, ";");
    base.declare(name, arity);
  }

  Signature full = extend_kd(base, agents);

  expect(text, pos, "rules");
  expect(text, pos, "{");
  std::vector<Rule> rules;
  while (!try_token(text, pos, "}")) {
    Rule rule{{}, Term::make("true")};  // placeholder conclusion
    if (try_token(text, pos, "|-")) {
      rule.conclusion = parse_term_at(text, pos, full);
    } else {
      rule.premises.push_back(parse_term_at(text, pos, full));
      while (try_token(text, pos, ",")) {
        rule.premises.push_back(parse_term_at(text, pos, full));
      }
      expect(text, pos, "->");
      rule.conclusion = parse_term_at(text, pos, full);
    }
    expect(text, pos, ";");
    rules.push_back(std::move(rule));
  }
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing input after rules section", pos);
  return DeductiveSystem(std::move(base), std::move(rules), agents);
}

DeductiveSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open system file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::string print_system(const DeductiveSystem& d) {
  std::string out;
  if (d.agent_count() != 1)
    out += "agents: " + std::to_string(d.agent_count()) + ";\n";
  out += "sig {\n";
  for (const auto& [name, arity] : d.base_signature().declarations())
    out += "  " + name + "/" + std::to_string(arity) + ";\n";
  out += "}\n";
  out += "rules {\n";
  for (const Rule& r : d.rules()) out += "  " + to_string(r) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace dedukt
