#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alp/formula.hpp"

namespace alp {

// Axiom schemas, in table order. Matching tries them in this order.
enum class SchemaName {
  TAUT,
  AN,
  AC,
  AA,
  AEQ,
  ACM,
  AL,
  AK,
  ANEQ,
  K_L,
  T_L,
  Five_L,
  K_EQ,
  T_EQ,
  Five_EQ,
  K_C,
  MIX,
  IND,
  KAC,
};

inline constexpr int kSchemaCount = 19;

const char* to_string(SchemaName name);
std::optional<SchemaName> schema_from_string(const std::string& name);

// Witnessing substitution: formula metavariables ("phi", "psi", "p") and
// agent metavariables ("i", "j", "k", "l").
struct Substitution {
  std::map<std::string, Formula> formulas;
  std::map<std::string, AgentId> agents;
};

struct SchemaMatch {
  SchemaName name;
  Substitution subst;
};

// First schema (in table order) that f instantiates, if any. TAUT covers all
// propositional tautologies, decided by truth tables over the boolean
// skeleton with modal subformulas abstracted as letters.
// Requires f free of update operators.
std::optional<SchemaMatch> match_axiom(const Formula& f);

// Match against one named schema.
std::optional<Substitution> match_schema(SchemaName name, const Formula& f);

// Builds the schema instance for a substitution; the substitution must bind
// every metavariable of the schema. Not defined for TAUT.
Formula instantiate(SchemaName name, const Substitution& subst);

// Propositional tautology over the boolean skeleton.
bool is_tautology(const Formula& f);

// Hilbert-style derivation scripts.
enum class JustKind { Axiom, MP, LG, EqG, CG, Premise };

struct ProofLine {
  int number = 0;  // as written in the script; strictly increasing
  Formula formula;
  JustKind kind = JustKind::Premise;
  SchemaName axiom = SchemaName::TAUT;  // Axiom lines
  int ref1 = -1, ref2 = -1;             // cited line numbers
  AgentId agent1, agent2;               // rule indices
};

struct ProofScript {
  std::vector<ProofLine> lines;
};

struct Verdict {
  bool accepted = false;
  int failed_line = 0;  // line number of the first failure; 0 if accepted
  std::string reason;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Line format:  <n>. <formula> ; <JUST>
// with JUST one of  AX <name> | MP <n> <n> | LG <n> <agent>
//                 | EQG <n> <agent> <agent> | CG <n> <agent> <agent> | PREMISE
// Blank lines and lines starting with '#' are skipped.
ProofScript parse_script(const std::string& text);
std::string render_script(const ProofScript& script);

// Checks every line: axiom instances, premises, and rule applications whose
// cited lines exist, come strictly earlier, and have the required shape.
Verdict check_proof(const ProofScript& script);

// Emits a script deriving "K[i,j] f -> f" that check_proof accepts.
ProofScript derive_factivity(const AgentId& i, const AgentId& j, const Formula& f);

}  // namespace alp
