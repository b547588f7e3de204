#include "alp/proofs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "alp/parser.hpp"

namespace alp {

const char* to_string(SchemaName name) {
  switch (name) {
    case SchemaName::TAUT: return "TAUT";
    case SchemaName::AN: return "AN";
    case SchemaName::AC: return "AC";
    case SchemaName::AA: return "AA";
    case SchemaName::AEQ: return "AEQ";
    case SchemaName::ACM: return "ACM";
    case SchemaName::AL: return "AL";
    case SchemaName::AK: return "AK";
    case SchemaName::ANEQ: return "ANEQ";
    case SchemaName::K_L: return "K_L";
    case SchemaName::T_L: return "T_L";
    case SchemaName::Five_L: return "5_L";
    case SchemaName::K_EQ: return "K_EQ";
    case SchemaName::T_EQ: return "T_EQ";
    case SchemaName::Five_EQ: return "5_EQ";
    case SchemaName::K_C: return "K_C";
    case SchemaName::MIX: return "MIX";
    case SchemaName::IND: return "IND";
    case SchemaName::KAC: return "KAC";
  }
  return "?";
}

std::optional<SchemaName> schema_from_string(const std::string& name) {
  for (int k = 0; k < kSchemaCount; ++k) {
    SchemaName s = static_cast<SchemaName>(k);
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Schema patterns
// ---------------------------------------------------------------------------

namespace {

// Pattern nodes mirror formulas, with metavariables for formulas (MetaF),
// atomic propositions (MetaP) and agent slots (by name).
struct Pat {
  enum class K { MetaF, MetaP, Not, And, Imp, Iff, Aware, L, EqBox, CBox, ExplicitK } kind;
  std::string meta;       // MetaF / MetaP
  std::string ag1, ag2;   // agent metavariables
  const Pat* c1 = nullptr;
  const Pat* c2 = nullptr;
};

// Patterns are built once and live forever.
const Pat* pat(Pat p) { return new Pat(std::move(p)); }
const Pat* MF(const char* name) { return pat({Pat::K::MetaF, name, "", "", nullptr, nullptr}); }
const Pat* MP_(const char* name) { return pat({Pat::K::MetaP, name, "", "", nullptr, nullptr}); }
const Pat* PNot(const Pat* a) { return pat({Pat::K::Not, "", "", "", a, nullptr}); }
const Pat* PAnd(const Pat* a, const Pat* b) { return pat({Pat::K::And, "", "", "", a, b}); }
const Pat* PImp(const Pat* a, const Pat* b) { return pat({Pat::K::Imp, "", "", "", a, b}); }
const Pat* PIff(const Pat* a, const Pat* b) { return pat({Pat::K::Iff, "", "", "", a, b}); }
const Pat* PAware(const char* i, const char* j, const Pat* a) {
  return pat({Pat::K::Aware, "", i, j, a, nullptr});
}
const Pat* PL(const char* j, const Pat* a) { return pat({Pat::K::L, "", "", j, a, nullptr}); }
const Pat* PEq(const char* i, const char* j, const Pat* a) {
  return pat({Pat::K::EqBox, "", i, j, a, nullptr});
}
const Pat* PC(const char* i, const char* j, const Pat* a) {
  return pat({Pat::K::CBox, "", i, j, a, nullptr});
}
const Pat* PK(const char* i, const char* j, const Pat* a) {
  return pat({Pat::K::ExplicitK, "", i, j, a, nullptr});
}

const Pat* schema_pattern(SchemaName name) {
  static const Pat* table[kSchemaCount] = {};
  static const bool built = [] {
    auto phi = [] { return MF("phi"); };
    auto psi = [] { return MF("psi"); };
    auto p = [] { return MP_("p"); };
    table[(int)SchemaName::AN] = PIff(PAware("i", "j", phi()), PAware("i", "j", PNot(phi())));
    table[(int)SchemaName::AC] = PIff(PAware("i", "j", PAnd(phi(), psi())),
                                      PAnd(PAware("i", "j", phi()), PAware("i", "j", psi())));
    table[(int)SchemaName::AA] =
        PIff(PAware("i", "j", phi()), PAware("i", "j", PAware("k", "l", phi())));
    table[(int)SchemaName::AEQ] =
        PIff(PAware("i", "j", phi()), PAware("i", "j", PEq("k", "l", phi())));
    table[(int)SchemaName::ACM] =
        PIff(PAware("i", "j", phi()), PAware("i", "j", PC("k", "l", phi())));
    table[(int)SchemaName::AL] = PIff(PAware("i", "j", phi()), PAware("i", "j", PL("k", phi())));
    table[(int)SchemaName::AK] =
        PIff(PAware("i", "j", phi()), PAware("i", "j", PK("k", "l", phi())));
    table[(int)SchemaName::ANEQ] =
        PImp(PAnd(PAware("i", "j", p()), p()), PEq("i", "j", p()));
    table[(int)SchemaName::K_L] =
        PImp(PL("j", PImp(phi(), psi())), PImp(PL("j", phi()), PL("j", psi())));
    table[(int)SchemaName::T_L] = PImp(PL("j", phi()), phi());
    table[(int)SchemaName::Five_L] = PImp(PNot(PL("j", phi())), PL("j", PNot(PL("j", phi()))));
    table[(int)SchemaName::K_EQ] =
        PImp(PEq("i", "j", PImp(phi(), psi())), PImp(PEq("i", "j", phi()), PEq("i", "j", psi())));
    table[(int)SchemaName::T_EQ] = PImp(PEq("i", "j", phi()), phi());
    table[(int)SchemaName::Five_EQ] =
        PImp(PNot(PEq("i", "j", phi())), PEq("i", "j", PNot(PEq("i", "j", phi()))));
    table[(int)SchemaName::K_C] =
        PImp(PC("i", "j", PImp(phi(), psi())), PImp(PC("i", "j", phi()), PC("i", "j", psi())));
    table[(int)SchemaName::MIX] = PImp(
        PC("i", "j", phi()), PAnd(phi(), PEq("i", "j", PL("j", PC("i", "j", phi())))));
    table[(int)SchemaName::IND] = PImp(PC("i", "j", PImp(phi(), PEq("i", "j", PL("j", phi())))),
                                       PImp(phi(), PC("i", "j", phi())));
    table[(int)SchemaName::KAC] =
        PIff(PK("i", "j", phi()), PAnd(PAware("i", "j", phi()), PC("i", "j", phi())));
    return true;
  }();
  (void)built;
  return table[(int)name];
}

bool bind_agent(Substitution& s, const std::string& meta, const AgentId& value) {
  auto [it, fresh] = s.agents.emplace(meta, value);
  return fresh || it->second == value;
}

bool bind_formula(Substitution& s, const std::string& meta, const Formula& value) {
  auto [it, fresh] = s.formulas.emplace(meta, value);
  return fresh || it->second == value;
}

bool unify(const Pat* p, const Formula& f, Substitution& s) {
  if (!f) return false;
  switch (p->kind) {
    case Pat::K::MetaF:
      return bind_formula(s, p->meta, f);
    case Pat::K::MetaP:
      return f.kind() == Kind::Prop && bind_formula(s, p->meta, f);
    case Pat::K::Not:
      return f.kind() == Kind::Not && unify(p->c1, f.lhs(), s);
    case Pat::K::And:
      return f.kind() == Kind::And && unify(p->c1, f.lhs(), s) && unify(p->c2, f.rhs(), s);
    case Pat::K::Imp:
      return f.kind() == Kind::Imp && unify(p->c1, f.lhs(), s) && unify(p->c2, f.rhs(), s);
    case Pat::K::Iff:
      return f.kind() == Kind::Iff && unify(p->c1, f.lhs(), s) && unify(p->c2, f.rhs(), s);
    case Pat::K::L:
      return f.kind() == Kind::ImplicitK && bind_agent(s, p->ag2, f.subject()) &&
             unify(p->c1, f.lhs(), s);
    case Pat::K::Aware:
      if (f.kind() != Kind::Aware) return false;
      break;
    case Pat::K::EqBox:
      if (f.kind() != Kind::EqBox) return false;
      break;
    case Pat::K::CBox:
      if (f.kind() != Kind::CBox) return false;
      break;
    case Pat::K::ExplicitK:
      if (f.kind() != Kind::ExplicitK) return false;
      break;
  }
  return bind_agent(s, p->ag1, f.viewpoint()) && bind_agent(s, p->ag2, f.subject()) &&
         unify(p->c1, f.lhs(), s);
}

Formula build(const Pat* p, const Substitution& s) {
  auto agent = [&](const std::string& meta) {
    auto it = s.agents.find(meta);
    if (it == s.agents.end()) throw std::invalid_argument("unbound agent metavariable " + meta);
    return it->second;
  };
  auto formula = [&](const std::string& meta) {
    auto it = s.formulas.find(meta);
    if (it == s.formulas.end())
      throw std::invalid_argument("unbound formula metavariable " + meta);
    return it->second;
  };
  switch (p->kind) {
    case Pat::K::MetaF: return formula(p->meta);
    case Pat::K::MetaP: {
      Formula f = formula(p->meta);
      if (f.kind() != Kind::Prop)
        throw std::invalid_argument("metavariable " + p->meta + " must be atomic");
      return f;
    }
    case Pat::K::Not: return Not(build(p->c1, s));
    case Pat::K::And: return And(build(p->c1, s), build(p->c2, s));
    case Pat::K::Imp: return Imp(build(p->c1, s), build(p->c2, s));
    case Pat::K::Iff: return Iff(build(p->c1, s), build(p->c2, s));
    case Pat::K::Aware: return Aware(agent(p->ag1), agent(p->ag2), build(p->c1, s));
    case Pat::K::L: return L(agent(p->ag2), build(p->c1, s));
    case Pat::K::EqBox: return EqBox(agent(p->ag1), agent(p->ag2), build(p->c1, s));
    case Pat::K::CBox: return CBox(agent(p->ag1), agent(p->ag2), build(p->c1, s));
    case Pat::K::ExplicitK: return K(agent(p->ag1), agent(p->ag2), build(p->c1, s));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

// ---------------------------------------------------------------------------
// Tautology check
// ---------------------------------------------------------------------------

namespace {

bool is_boolean_connective(Kind k) {
  return k == Kind::Not || k == Kind::And || k == Kind::Or || k == Kind::Imp || k == Kind::Iff;
}

struct Skeleton {
  std::vector<Formula> letters;
  std::unordered_map<const void*, int> letter_of;  // node id -> letter

  void collect(const Formula& f, FormulaSet& seen) {
    if (is_boolean_connective(f.kind())) {
      collect(f.lhs(), seen);
      if (f.rhs()) collect(f.rhs(), seen);
      return;
    }
    for (std::size_t k = 0; k < letters.size(); ++k) {
      if (letters[k] == f) {
        letter_of[f.id()] = static_cast<int>(k);
        return;
      }
    }
    letter_of[f.id()] = static_cast<int>(letters.size());
    letters.push_back(f);
    (void)seen;
  }

  bool eval(const Formula& f, unsigned assignment) const {
    switch (f.kind()) {
      case Kind::Not: return !eval(f.lhs(), assignment);
      case Kind::And: return eval(f.lhs(), assignment) && eval(f.rhs(), assignment);
      case Kind::Or: return eval(f.lhs(), assignment) || eval(f.rhs(), assignment);
      case Kind::Imp: return !eval(f.lhs(), assignment) || eval(f.rhs(), assignment);
      case Kind::Iff: return eval(f.lhs(), assignment) == eval(f.rhs(), assignment);
      default:
        return (assignment >> letter_of.at(f.id())) & 1u;
    }
  }
};

constexpr int kMaxLetters = 22;

}  // namespace

bool is_tautology(const Formula& f) {
  if (contains_dynamic(f))
    throw std::invalid_argument("update operators are not allowed in axioms");
  Skeleton skel;
  FormulaSet seen;
  skel.collect(f, seen);
  const int n = static_cast<int>(skel.letters.size());
  if (n > kMaxLetters)
    throw std::invalid_argument("tautology check exceeds " + std::to_string(kMaxLetters) +
                                " distinct letters");
  for (unsigned long long a = 0; a < (1ull << n); ++a)
    if (!skel.eval(f, static_cast<unsigned>(a))) return false;
  return true;
}

std::optional<Substitution> match_schema(SchemaName name, const Formula& f) {
  if (contains_dynamic(f)) return std::nullopt;
  if (name == SchemaName::TAUT) {
    if (is_tautology(f)) return Substitution{};
    return std::nullopt;
  }
  Substitution s;
  if (unify(schema_pattern(name), f, s)) return s;
  return std::nullopt;
}

std::optional<SchemaMatch> match_axiom(const Formula& f) {
  if (contains_dynamic(f))
    throw std::invalid_argument("update operators are not allowed in axioms");
  for (int k = 0; k < kSchemaCount; ++k) {
    SchemaName name = static_cast<SchemaName>(k);
    if (auto s = match_schema(name, f)) return SchemaMatch{name, std::move(*s)};
  }
  return std::nullopt;
}

Formula instantiate(SchemaName name, const Substitution& subst) {
  if (name == SchemaName::TAUT)
    throw std::invalid_argument("TAUT has no single pattern to instantiate");
  return build(schema_pattern(name), subst);
}

// ---------------------------------------------------------------------------
// Proof scripts
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

ProofScript parse_script(const std::string& text) {
  ProofScript script;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (trimmed.empty() || trimmed[0] == '#') continue;

    ProofLine pl;
    std::size_t dot = trimmed.find('.');
    if (dot == std::string::npos) throw ScriptError(lineno, "missing '.' after the line number");
    try {
      pl.number = std::stoi(trimmed.substr(0, dot));
    } catch (const std::exception&) {
      throw ScriptError(lineno, "line must start with a number");
    }
    std::size_t semi = trimmed.find(';', dot + 1);
    if (semi == std::string::npos)
      throw ScriptError(lineno, "missing ';' between formula and justification");
    std::string ftext = trimmed.substr(dot + 1, semi - dot - 1);
    try {
      pl.formula = parse(ftext);
    } catch (const ParseError& e) {
      throw ScriptError(lineno, e.what());
    }

    std::vector<std::string> just = split_ws(trimmed.substr(semi + 1));
    auto need = [&](std::size_t n, const char* shape) {
      if (just.size() != n) throw ScriptError(lineno, std::string("justification must be '") + shape + "'");
    };
    auto as_int = [&](const std::string& s) {
      try {
        return std::stoi(s);
      } catch (const std::exception&) {
        throw ScriptError(lineno, "'" + s + "' is not a line number");
      }
    };
    if (just.empty()) throw ScriptError(lineno, "missing justification");
    const std::string& head = just[0];
    if (head == "AX") {
      need(2, "AX <name>");
      auto name = schema_from_string(just[1]);
      if (!name) throw ScriptError(lineno, "unknown axiom schema '" + just[1] + "'");
      pl.kind = JustKind::Axiom;
      pl.axiom = *name;
    } else if (head == "MP") {
      need(3, "MP <n> <n>");
      pl.kind = JustKind::MP;
      pl.ref1 = as_int(just[1]);
      pl.ref2 = as_int(just[2]);
    } else if (head == "LG") {
      need(3, "LG <n> <agent>");
      pl.kind = JustKind::LG;
      pl.ref1 = as_int(just[1]);
      pl.agent1 = just[2];
    } else if (head == "EQG") {
      need(4, "EQG <n> <agent> <agent>");
      pl.kind = JustKind::EqG;
      pl.ref1 = as_int(just[1]);
      pl.agent1 = just[2];
      pl.agent2 = just[3];
    } else if (head == "CG") {
      need(4, "CG <n> <agent> <agent>");
      pl.kind = JustKind::CG;
      pl.ref1 = as_int(just[1]);
      pl.agent1 = just[2];
      pl.agent2 = just[3];
    } else if (head == "PREMISE") {
      need(1, "PREMISE");
      pl.kind = JustKind::Premise;
    } else {
      throw ScriptError(lineno, "unknown justification '" + head + "'");
    }
    script.lines.push_back(std::move(pl));
  }
  return script;
}

std::string render_script(const ProofScript& script) {
  std::ostringstream os;
  for (const ProofLine& pl : script.lines) {
    os << pl.number << ". " << render(pl.formula) << " ; ";
    switch (pl.kind) {
      case JustKind::Axiom: os << "AX " << to_string(pl.axiom); break;
      case JustKind::MP: os << "MP " << pl.ref1 << " " << pl.ref2; break;
      case JustKind::LG: os << "LG " << pl.ref1 << " " << pl.agent1; break;
      case JustKind::EqG: os << "EQG " << pl.ref1 << " " << pl.agent1 << " " << pl.agent2; break;
      case JustKind::CG: os << "CG " << pl.ref1 << " " << pl.agent1 << " " << pl.agent2; break;
      case JustKind::Premise: os << "PREMISE"; break;
    }
    os << "\n";
  }
  return os.str();
}

Verdict check_proof(const ProofScript& script) {
  std::map<int, Formula> by_number;
  auto reject = [](int line, std::string reason) {
    return Verdict{false, line, std::move(reason)};
  };

  int prev = 0;
  for (const ProofLine& pl : script.lines) {
    if (pl.number <= prev)
      return reject(pl.number, "line numbers must be strictly increasing");
    prev = pl.number;
    if (contains_dynamic(pl.formula))
      return reject(pl.number, "update operators cannot appear in derivations");

    auto cited = [&](int ref) -> const Formula* {
      auto it = by_number.find(ref);
      return it == by_number.end() ? nullptr : &it->second;
    };
    auto check_ref = [&](int ref) -> std::string {
      if (ref >= pl.number) return "reference to line " + std::to_string(ref) + " is not strictly earlier";
      if (!cited(ref)) return "reference to missing line " + std::to_string(ref);
      return "";
    };

    switch (pl.kind) {
      case JustKind::Premise:
        break;
      case JustKind::Axiom: {
        if (!match_schema(pl.axiom, pl.formula))
          return reject(pl.number,
                        std::string("formula is not an instance of ") + to_string(pl.axiom));
        break;
      }
      case JustKind::MP: {
        for (int r : {pl.ref1, pl.ref2})
          if (auto err = check_ref(r); !err.empty()) return reject(pl.number, err);
        Formula expected = Imp(*cited(pl.ref1), pl.formula);
        if (*cited(pl.ref2) != expected)
          return reject(pl.number, "line " + std::to_string(pl.ref2) +
                                       " is not the implication from line " +
                                       std::to_string(pl.ref1) + " to this formula");
        break;
      }
      case JustKind::LG: {
        if (auto err = check_ref(pl.ref1); !err.empty()) return reject(pl.number, err);
        if (pl.formula != L(pl.agent1, *cited(pl.ref1)))
          return reject(pl.number, "formula is not L[" + pl.agent1 + "] applied to line " +
                                       std::to_string(pl.ref1));
        break;
      }
      case JustKind::EqG: {
        if (auto err = check_ref(pl.ref1); !err.empty()) return reject(pl.number, err);
        if (pl.formula != EqBox(pl.agent1, pl.agent2, *cited(pl.ref1)))
          return reject(pl.number, "formula is not E[" + pl.agent1 + "," + pl.agent2 +
                                       "] applied to line " + std::to_string(pl.ref1));
        break;
      }
      case JustKind::CG: {
        if (auto err = check_ref(pl.ref1); !err.empty()) return reject(pl.number, err);
        if (pl.formula != CBox(pl.agent1, pl.agent2, *cited(pl.ref1)))
          return reject(pl.number, "formula is not C[" + pl.agent1 + "," + pl.agent2 +
                                       "] applied to line " + std::to_string(pl.ref1));
        break;
      }
    }
    by_number.emplace(pl.number, pl.formula);
  }
  if (script.lines.empty()) return {false, 0, "empty script"};
  return {true, 0, ""};
}

ProofScript derive_factivity(const AgentId& i, const AgentId& j, const Formula& f) {
  if (contains_dynamic(f))
    throw std::invalid_argument("factivity scripts require an update-free formula");
  Formula k = K(i, j, f);
  Formula a = Aware(i, j, f);
  Formula c = CBox(i, j, f);
  Formula elc = EqBox(i, j, L(j, c));
  Formula kac = Iff(k, And(a, c));
  Formula mix = Imp(c, And(f, elc));
  Formula goal = Imp(k, f);
  Formula bridge = Imp(mix, goal);

  ProofScript s;
  s.lines.push_back({1, kac, JustKind::Axiom, SchemaName::KAC, -1, -1, "", ""});
  s.lines.push_back({2, mix, JustKind::Axiom, SchemaName::MIX, -1, -1, "", ""});
  s.lines.push_back({3, Imp(kac, bridge), JustKind::Axiom, SchemaName::TAUT, -1, -1, "", ""});
  s.lines.push_back({4, bridge, JustKind::MP, SchemaName::TAUT, 1, 3, "", ""});
  s.lines.push_back({5, goal, JustKind::MP, SchemaName::TAUT, 2, 4, "", ""});
  return s;
}

}  // namespace alp
