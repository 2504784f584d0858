#include "dedukt/model.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dedukt/presets.hpp"

namespace dedukt {

std::string to_string(TV v) {
  switch (v) {
    case TV::False: return "false";
    case TV::True: return "true";
    case TV::Unknown: return "unknown";
  }
  return "?";
}

Structure::Structure(std::vector<DeductiveSystem> systems,
                     std::vector<ModelState> states,
                     std::optional<bool> reliable_obs)
    : systems_(std::move(systems)), states_(std::move(states)),
      reliable_obs_(reliable_obs) {
  if (systems_.empty()) throw ValidationError("a structure needs agent systems");
  int n = systems_[0].agent_count();
  if (static_cast<int>(systems_.size()) != n)
    throw ValidationError("expected one deductive system per agent");
  for (const DeductiveSystem& d : systems_) {
    if (d.agent_count() != n ||
        d.base_signature().declarations() != systems_[0].base_signature().declarations())
      throw ValidationError("agent systems must share one signature");
  }
  for (const ModelState& s : states_) {
    if (static_cast<int>(s.obs.size()) != n)
      throw ValidationError("state " + s.name + ": expected " +
                            std::to_string(n) + " observation sets");
    for (const TermSet& o : s.obs)
      for (const Term& p : o) {
        if (!p.is_ground())
          throw ValidationError("state " + s.name + ": observation not ground");
        validate_term(p, systems_[0].base_signature());
        if (reliable_obs_ == true && !s.trueset.contains(p))
          throw ValidationError("state " + s.name + ": observation " +
                                to_string(p) +
                                " is false but observations are reliable");
      }
    for (const Term& t : s.trueset) {
      if (!t.is_ground())
        throw ValidationError("state " + s.name + ": valuation term not ground");
      validate_term(t, systems_[0].signature());
    }
  }
  for (std::size_t i = 0; i < states_.size(); ++i)
    for (std::size_t j = i + 1; j < states_.size(); ++j)
      if (states_[i].name == states_[j].name)
        throw ValidationError("duplicate state name " + states_[i].name);
}

const ModelState& Structure::state(const std::string& name) const {
  return states_[state_index(name)];
}

int Structure::state_index(const std::string& name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown state '" + name + "'");
}

bool Structure::indistinguishable(int agent, int s, int s2) const {
  return states_[s].obs[agent - 1] == states_[s2].obs[agent - 1];
}

// ---------------------------------------------------------------------------
// Model checking

namespace {

TV tv_not(TV v) {
  if (v == TV::Unknown) return TV::Unknown;
  return v == TV::True ? TV::False : TV::True;
}

}  // namespace

TV ModelChecker::explicit_knowledge(int agent, int state,
                                    const Formula& body) const {
  const ModelState& s = m_.states()[state];
  Term goal = to_term(body, m_.agents());

  std::vector<Term> sorted(s.obs[agent - 1].begin(), s.obs[agent - 1].end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Term& a, const Term& b) { return compare(a, b) < 0; });
  std::string key = std::to_string(agent) + "|";
  for (const Term& p : sorted) key += to_string(p) + ",";
  key += "|" + to_string(goal);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (auto it = derive_memo_.find(key); it != derive_memo_.end())
      return it->second == Verdict::Derivable      ? TV::True
             : it->second == Verdict::NotDerivable ? TV::False
                                                   : TV::Unknown;
  }

  std::string ob = kd_name("ob", agent, m_.agents());
  std::vector<Term> gamma;
  gamma.reserve(sorted.size());
  for (const Term& p : sorted) gamma.push_back(Term::make(ob, {p}));
  Verdict v = derive(m_.system(agent), gamma, goal, strategy_, exec_).verdict;
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    derive_memo_.emplace(std::move(key), v);
  }
  return v == Verdict::Derivable      ? TV::True
         : v == Verdict::NotDerivable ? TV::False
                                      : TV::Unknown;
}

TV ModelChecker::check(int state, const Formula& f) const {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      validate_term(f.term(), m_.signature());
      return m_.states()[state].trueset.contains(f.term()) ? TV::True : TV::False;
    case Formula::Kind::Obs: {
      int a = f.agent();
      if (a < 1 || a > m_.agents())
        throw ValidationError("agent index out of range");
      return m_.states()[state].obs[a - 1].contains(f.term()) ? TV::True
                                                              : TV::False;
    }
    case Formula::Kind::Not:
      return tv_not(check(state, f.child()));
    case Formula::Kind::And: {
      TV a = check(state, f.child(0));
      if (a == TV::False) return TV::False;
      TV b = check(state, f.child(1));
      if (b == TV::False) return TV::False;
      return (a == TV::Unknown || b == TV::Unknown) ? TV::Unknown : TV::True;
    }
    case Formula::Kind::Know: {
      int a = f.agent();
      if (a < 1 || a > m_.agents())
        throw ValidationError("agent index out of range");
      bool unknown = false;
      for (std::size_t s2 = 0; s2 < m_.states().size(); ++s2) {
        if (!m_.indistinguishable(a, state, static_cast<int>(s2))) continue;
        TV v = check(static_cast<int>(s2), f.child());
        if (v == TV::False) return TV::False;
        if (v == TV::Unknown) unknown = true;
      }
      return unknown ? TV::Unknown : TV::True;
    }
    case Formula::Kind::L: {  // dual: truth at some indistinguishable state
      int a = f.agent();
      if (a < 1 || a > m_.agents())
        throw ValidationError("agent index out of range");
      bool unknown = false;
      for (std::size_t s2 = 0; s2 < m_.states().size(); ++s2) {
        if (!m_.indistinguishable(a, state, static_cast<int>(s2))) continue;
        TV v = check(static_cast<int>(s2), f.child());
        if (v == TV::True) return TV::True;
        if (v == TV::Unknown) unknown = true;
      }
      return unknown ? TV::Unknown : TV::False;
    }
    case Formula::Kind::XKnow: {
      int a = f.agent();
      if (a < 1 || a > m_.agents())
        throw ValidationError("agent index out of range");
      return explicit_knowledge(a, state, f.child());
    }
    case Formula::Kind::MetaVar:
      throw ValidationError("cannot evaluate a schema metavariable ?" + f.name());
  }
  throw ValidationError("unreachable");
}

TV ModelChecker::check(const std::string& state, const Formula& f) const {
  return check(m_.state_index(state), f);
}

TV ModelChecker::valid_in(const Formula& f) const {
  bool unknown = false;
  for (std::size_t s = 0; s < m_.states().size(); ++s) {
    TV v = check(static_cast<int>(s), f);
    if (v == TV::False) return TV::False;
    if (v == TV::Unknown) unknown = true;
  }
  return unknown ? TV::Unknown : TV::True;
}

TV check(const Structure& m, const std::string& state, const Formula& f,
         Strategy strategy) {
  return ModelChecker(m, strategy).check(state, f);
}

TV valid_in(const Structure& m, const Formula& f, Strategy strategy) {
  return ModelChecker(m, strategy).valid_in(f);
}

// ---------------------------------------------------------------------------
// The message-interception model

namespace {

bool mentions_symbol(const Term& t, const std::string& sym) {
  if (!t.is_variable() && t.symbol() == sym) return true;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return mentions_symbol(a, sym); });
}

void message_subterms(const Term& t, TermSet& out) {
  out.insert(t);
  if (t.is_variable()) return;
  if (t.symbol() == "conc" && t.args().size() == 2) {
    message_subterms(t.args()[0], out);
    message_subterms(t.args()[1], out);
  } else if (t.symbol() == "encr" && t.args().size() == 2) {
    message_subterms(t.args()[0], out);
  }
}

}  // namespace

Structure build_dy_model(const std::vector<std::vector<Term>>& intercepts) {
  DeductiveSystem dy = load_preset("DY_PRIME");
  std::vector<ModelState> states;
  int idx = 0;
  for (const auto& obs : intercepts) {
    ModelState s;
    s.name = "s" + std::to_string(++idx);
    s.env = s.name;
    TermSet o;
    TermSet held;
    for (const Term& t : obs) {
      if (!t.is_ground()) throw ValidationError("intercept must be ground");
      validate_term(t, dy.base_signature());
      if (t.is_variable() || t.symbol() != "recv" || t.args().size() != 1)
        throw ValidationError("intercept must have the form recv(t): " +
                              to_string(t));
      if (mentions_symbol(t.args()[0], "has"))
        throw ValidationError("'has' may not occur inside an intercept");
      o.insert(t);
      message_subterms(t.args()[0], held);
    }
    s.obs.push_back(std::move(o));
    for (const Term& u : held) s.trueset.insert(Term::make("has", {u}));
    states.push_back(std::move(s));
  }
  return Structure({std::move(dy)}, std::move(states));
}

// ---------------------------------------------------------------------------
// Model files

namespace {

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  bool in_string = false;
  for (char c : text) {
    if (c == '"' && !in_comment) in_string = !in_string;
    if (c == '#' && !in_string) in_comment = true;
    if (c == '\n') in_comment = false;
    out += in_comment ? ' ' : c;
  }
  return out;
}

struct FileParser {
  const std::string& src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool try_token(const std::string& tok) {
    skip_ws();
    if (src.compare(pos, tok.size(), tok) != 0) return false;
    pos += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!try_token(tok)) throw ParseError("expected '" + tok + "'", pos);
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= src.size() ||
        !(std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      throw ParseError("expected an identifier", pos);
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }
  std::string peek_ident() {
    std::size_t save = pos;
    skip_ws();
    if (pos >= src.size() ||
        !(std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      pos = save;
      return {};
    }
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string out = src.substr(start, pos - start);
    pos = save;
    return out;
  }
  int number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos == start) throw ParseError("expected a number", pos);
    return std::stoi(src.substr(start, pos - start));
  }
  std::string quoted() {
    expect("\"");
    std::size_t start = pos;
    while (pos < src.size() && src[pos] != '"') ++pos;
    if (pos >= src.size()) throw ParseError("unterminated string", start);
    std::string out = src.substr(start, pos - start);
    ++pos;
    return out;
  }
  // "obs" or "obs[i]"; returns the agent index.
  int bracket_index(int agents) {
    if (!try_token("[")) return 1;
    int i = number();
    expect("]");
    if (i < 1 || i > agents) throw ParseError("agent index out of range", pos);
    return i;
  }
};

DeductiveSystem load_system_ref(const std::string& ref, const std::string& base_dir) {
  if (ref.rfind("preset:", 0) == 0) return load_preset(ref.substr(7));
  std::filesystem::path p(ref);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return load_system_file(p.string());
}

}  // namespace

Structure parse_model(const std::string& raw, const std::string& base_dir) {
  std::string text = strip_comments(raw);
  FileParser p{text};
  p.expect("model");
  p.expect("{");

  int agents = 1;
  std::optional<bool> reliable;
  std::map<int, std::string> system_refs;
  std::vector<ModelState> states;

  while (p.peek_ident() != "state") {
    p.skip_ws();
    if (p.pos < text.size() && text[p.pos] == '}') break;
    std::string word = p.ident();
    if (word == "agents") {
      p.expect(":");
      agents = p.number();
      p.expect(";");
      if (agents < 1) throw ParseError("agent count must be positive", p.pos);
    } else if (word == "reliable_obs") {
      p.expect(":");
      std::string v = p.ident();
      if (v != "yes" && v != "no")
        throw ParseError("reliable_obs must be yes or no", p.pos);
      reliable = (v == "yes");
      p.expect(";");
    } else if (word == "system") {
      int i = p.bracket_index(agents);
      p.expect(":");
      system_refs[i] = p.quoted();
      p.expect(";");
    } else {
      throw ParseError("unexpected '" + word + "' in model header", p.pos);
    }
  }

  // Load systems now so state terms can be parsed against the signature.
  if (!system_refs.contains(1))
    throw ParseError("model needs at least system[1]", p.pos);
  std::vector<DeductiveSystem> systems;
  for (int i = 1; i <= agents; ++i) {
    auto it = system_refs.find(i);
    if (it == system_refs.end())
      throw ParseError("missing system[" + std::to_string(i) + "]", p.pos);
    DeductiveSystem d = load_system_ref(it->second, base_dir);
    if (d.agent_count() != agents) {
      if (d.agent_count() == 1 && agents > 1)
        throw ValidationError("system '" + it->second + "' is single-agent but the model has " +
                              std::to_string(agents) + " agents");
      throw ValidationError("system '" + it->second + "' agent count mismatch");
    }
    systems.push_back(std::move(d));
  }
  const Signature& base = systems[0].base_signature();
  const Signature& full = systems[0].signature();

  while (p.try_token("state")) {
    ModelState s;
    s.name = p.ident();
    s.env = s.name;
    s.obs.assign(agents, TermSet{});
    p.expect("{");
    while (!p.try_token("}")) {
      std::string field = p.ident();
      if (field == "obs") {
        int i = p.bracket_index(agents);
        p.expect(":");
        while (!p.try_token(";")) {
          s.obs[i - 1].insert(parse_term_at(text, p.pos, base));
          p.try_token(",");
        }
      } else if (field == "true") {
        p.expect(":");
        while (!p.try_token(";")) {
          s.trueset.insert(parse_term_at(text, p.pos, full));
          p.try_token(",");
        }
      } else if (field == "env") {
        p.expect(":");
        s.env = p.quoted();
        p.expect(";");
      } else {
        throw ParseError("unexpected '" + field + "' in state block", p.pos);
      }
    }
    states.push_back(std::move(s));
  }
  p.expect("}");
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input after model", p.pos);

  return Structure(std::move(systems), std::move(states), reliable);
}

Structure load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), std::filesystem::path(path).parent_path().string());
}

std::string print_model(const Structure& m,
                        const std::vector<std::string>& system_refs) {
  std::string out = "model {\n";
  out += "  agents: " + std::to_string(m.agents()) + ";\n";
  if (m.reliable_obs())
    out += std::string("  reliable_obs: ") + (*m.reliable_obs() ? "yes" : "no") + ";\n";
  for (int i = 1; i <= m.agents(); ++i) {
    out += "  system";
    if (m.agents() > 1) out += "[" + std::to_string(i) + "]";
    out += ": \"" + system_refs[i - 1] + "\";\n";
  }
  auto sorted = [](const TermSet& ts) {
    std::vector<Term> v(ts.begin(), ts.end());
    std::sort(v.begin(), v.end(),
              [](const Term& a, const Term& b) { return compare(a, b) < 0; });
    return v;
  };
  for (const ModelState& s : m.states()) {
    out += "  state " + s.name + " {\n";
    for (int i = 1; i <= m.agents(); ++i) {
      if (s.obs[i - 1].empty()) continue;
      out += "    obs";
      if (m.agents() > 1) out += "[" + std::to_string(i) + "]";
      out += ":";
      bool first = true;
      for (const Term& t : sorted(s.obs[i - 1])) {
        out += first ? " " : ", ";
        first = false;
        out += to_string(t);
      }
      out += ";\n";
    }
    if (!s.trueset.empty()) {
      out += "    true:";
      bool first = true;
      for (const Term& t : sorted(s.trueset)) {
        out += first ? " " : ", ";
        first = false;
        out += to_string(t);
      }
      out += ";\n";
    }
    out += "    env: \"" + s.env + "\";\n";
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

void write_model_files(const Structure& m, const std::string& path) {
  std::vector<std::string> refs;
  std::filesystem::path base(path);
  for (int i = 1; i <= m.agents(); ++i) {
    std::string ref = base.filename().string() + "." + std::to_string(i) + ".rules";
    std::ofstream rf(base.parent_path() / ref);
    if (!rf) throw ValidationError("cannot write " + ref);
    rf << print_system(m.system(i));
    refs.push_back(ref);
  }
  std::ofstream mf(path);
  if (!mf) throw ValidationError("cannot write " + path);
  mf << print_model(m, refs);
}

}  // namespace dedukt
