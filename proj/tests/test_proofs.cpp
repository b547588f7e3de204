#include <random>

#include "alp/checker.hpp"
#include "alp/parser.hpp"
#include "alp/proofs.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace alp;

namespace {

// Small independent tautology oracle: abstract non-boolean subtrees into
// letters and grind the truth table.
void collect_letters(const Formula& f, std::vector<Formula>& letters) {
  switch (f.kind()) {
    case Kind::Not:
      collect_letters(f.lhs(), letters);
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
    case Kind::Iff:
      collect_letters(f.lhs(), letters);
      collect_letters(f.rhs(), letters);
      return;
    default:
      for (const Formula& l : letters)
        if (l == f) return;
      letters.push_back(f);
  }
}

bool eval_skeleton(const Formula& f, const std::vector<Formula>& letters, unsigned bits) {
  switch (f.kind()) {
    case Kind::Not: return !eval_skeleton(f.lhs(), letters, bits);
    case Kind::And: return eval_skeleton(f.lhs(), letters, bits) && eval_skeleton(f.rhs(), letters, bits);
    case Kind::Or: return eval_skeleton(f.lhs(), letters, bits) || eval_skeleton(f.rhs(), letters, bits);
    case Kind::Imp: return !eval_skeleton(f.lhs(), letters, bits) || eval_skeleton(f.rhs(), letters, bits);
    case Kind::Iff: return eval_skeleton(f.lhs(), letters, bits) == eval_skeleton(f.rhs(), letters, bits);
    default:
      for (std::size_t k = 0; k < letters.size(); ++k)
        if (letters[k] == f) return (bits >> k) & 1u;
      FAIL("letter not found");
      return false;
  }
}

bool taut_oracle(const Formula& f) {
  std::vector<Formula> letters;
  collect_letters(f, letters);
  REQUIRE(letters.size() <= 10);
  for (unsigned bits = 0; bits < (1u << letters.size()); ++bits)
    if (!eval_skeleton(f, letters, bits)) return false;
  return true;
}

}  // namespace

TEST_CASE("match_axiom identifies table rows") {
  auto kac = match_axiom(parse("K[a,b] p <-> A[a,b] p & C[a,b] p"));
  REQUIRE(kac.has_value());
  CHECK(kac->name == SchemaName::KAC);
  CHECK(kac->subst.formulas.at("phi") == Prop("p"));
  CHECK(kac->subst.agents.at("i") == "a");
  CHECK(kac->subst.agents.at("j") == "b");

  auto an = match_axiom(parse("A[a,b] p <-> A[a,b] ~p"));
  REQUIRE(an.has_value());
  CHECK(an->name == SchemaName::AN);
  CHECK(an->subst.formulas.at("phi") == Prop("p"));

  CHECK_FALSE(match_axiom(parse("~L[b] p -> L[b] p")).has_value());

  auto taut = match_axiom(parse("p -> (q -> p)"));
  REQUIRE(taut.has_value());
  CHECK(taut->name == SchemaName::TAUT);
}

TEST_CASE("agent metavariables must bind consistently, collisions allowed") {
  CHECK_FALSE(match_schema(SchemaName::KAC, parse("K[a,b] p <-> A[a,a] p & C[a,b] p")));
  CHECK_FALSE(match_schema(SchemaName::AN, parse("A[a,b] p <-> A[b,a] ~p")));
  CHECK(match_schema(SchemaName::KAC, parse("K[a,a] p <-> A[a,a] p & C[a,a] p")));
  // AA with fully independent inner pair
  CHECK(match_schema(SchemaName::AA, parse("A[a,b] p <-> A[a,b] A[b,a] p")));
  // ANEQ requires an atomic proposition
  CHECK(match_schema(SchemaName::ANEQ, parse("A[a,b] p & p -> E[a,b] p")));
  CHECK_FALSE(match_schema(SchemaName::ANEQ, parse("A[a,b] ~p & ~p -> E[a,b] ~p")));
}

TEST_CASE("substitution reproduces the matched formula") {
  std::mt19937 rng(71);
  oracle::Sig sig{{"a", "b"}, {"p", "q"}};
  for (int schema = 1; schema < kSchemaCount; ++schema) {
    for (int rep = 0; rep < 50; ++rep) {
      Formula inst = oracle::random_schema_instance(rng, schema, sig, 1);
      auto match = match_axiom(inst);
      REQUIRE(match.has_value());
      if (match->name != SchemaName::TAUT)
        CHECK(instantiate(match->name, match->subst) == inst);
    }
  }
}

TEST_CASE("no false TAUT against the truth-table oracle") {
  std::mt19937 rng(72);
  oracle::Sig sig{{"a", "b"}, {"p", "q"}};
  int taut_count = 0;
  for (int rep = 0; rep < 400; ++rep) {
    Formula f = oracle::random_formula(rng, sig, 3);
    bool expect = taut_oracle(f);
    CHECK(is_tautology(f) == expect);
    taut_count += expect;
  }
  // the corpus must also contain some honest tautologies
  for (int rep = 0; rep < 50; ++rep) {
    Formula f = oracle::random_schema_instance(rng, 0, sig, 2);
    CHECK(is_tautology(f));
    CHECK(taut_oracle(f));
  }
  (void)taut_count;
}

TEST_CASE("a three-line modus ponens chain checks") {
  ProofScript s = parse_script(R"(
1. K[a,b] p <-> A[a,b] p & C[a,b] p ; AX KAC
2. (K[a,b] p <-> A[a,b] p & C[a,b] p) -> (K[a,b] p -> C[a,b] p) ; AX TAUT
3. K[a,b] p -> C[a,b] p ; MP 1 2
)");
  Verdict v = check_proof(s);
  CHECK(v.accepted);

  // corrupt the conclusion: the MP shape no longer fits
  ProofScript bad = s;
  bad.lines[2].formula = parse("K[a,b] p -> A[a,b] q");
  Verdict vb = check_proof(bad);
  CHECK_FALSE(vb.accepted);
  CHECK(vb.failed_line == 3);
}

TEST_CASE("necessitation wraps an earlier line") {
  ProofScript s = parse_script(R"(
1. p -> p ; AX TAUT
2. L[a] (p -> p) ; LG 1 a
3. E[a,b] L[a] (p -> p) ; EQG 2 a b
4. C[b,b] E[a,b] L[a] (p -> p) ; CG 3 b b
)");
  Verdict v = check_proof(s);
  CHECK(v.accepted);

  ProofScript wrong_agent = s;
  wrong_agent.lines[1].agent1 = "b";
  CHECK_FALSE(check_proof(wrong_agent).accepted);
  CHECK(check_proof(wrong_agent).failed_line == 2);
}

TEST_CASE("premises certify derivations from assumptions") {
  ProofScript s = parse_script(R"(
1. p ; PREMISE
2. p -> (q -> p) ; AX TAUT
3. q -> p ; MP 1 2
)");
  CHECK(check_proof(s).accepted);
}

TEST_CASE("citations must point strictly backwards") {
  ProofScript self = parse_script("1. p -> p ; AX TAUT\n2. L[a] (p -> p) ; LG 2 a\n");
  Verdict v = check_proof(self);
  CHECK_FALSE(v.accepted);
  CHECK(v.failed_line == 2);

  ProofScript forward = parse_script("1. q ; MP 2 3\n2. p ; PREMISE\n3. p -> q ; PREMISE\n");
  CHECK_FALSE(check_proof(forward).accepted);

  ProofScript missing = parse_script("1. p -> p ; AX TAUT\n3. L[a] (p -> p) ; LG 2 a\n");
  CHECK_FALSE(check_proof(missing).accepted);
}

TEST_CASE("update operators are rejected in proofs") {
  ProofScript s = parse_script("1. [+p][a,a] p ; PREMISE\n");
  Verdict v = check_proof(s);
  CHECK_FALSE(v.accepted);
  CHECK(v.failed_line == 1);
}

TEST_CASE("script parsing errors") {
  CHECK_THROWS_AS(parse_script("1 p ; AX TAUT\n"), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p AX TAUT\n"), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p ; AX BOGUS\n"), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p ; MP one 2\n"), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p & ; PREMISE\n"), ScriptError);
}

TEST_CASE("factivity scripts are accepted and survive a round-trip") {
  for (const AgentId& i : {"a", "b"}) {
    for (const AgentId& j : {"a", "b"}) {
      ProofScript s = derive_factivity(i, j, Prop("p"));
      CHECK(check_proof(s).accepted);
      CHECK(s.lines.back().formula == Imp(K(i, j, Prop("p")), Prop("p")));

      ProofScript reparsed = parse_script(render_script(s));
      CHECK(check_proof(reparsed).accepted);
    }
  }
  CHECK(check_proof(derive_factivity("b", "b", Prop("p_a"))).accepted);
}

TEST_CASE("corrupting any justification of a factivity script is caught") {
  ProofScript s = derive_factivity("a", "b", Prop("p"));
  for (std::size_t k = 0; k < s.lines.size(); ++k) {
    if (s.lines[k].kind == JustKind::Axiom) {
      ProofScript bad = s;
      bad.lines[k].axiom =
          static_cast<SchemaName>((static_cast<int>(bad.lines[k].axiom) + 1) % kSchemaCount);
      Verdict v = check_proof(bad);
      CHECK_FALSE(v.accepted);
      CHECK(v.failed_line == bad.lines[k].number);
    } else if (s.lines[k].kind == JustKind::MP) {
      ProofScript swapped = s;
      std::swap(swapped.lines[k].ref1, swapped.lines[k].ref2);
      CHECK_FALSE(check_proof(swapped).accepted);

      ProofScript self = s;
      self.lines[k].ref2 = self.lines[k].number;
      CHECK_FALSE(check_proof(self).accepted);
    }
  }
}

TEST_CASE("axiom instances are valid on random models") {
  std::mt19937 rng(73);
  oracle::Sig sig{{"a", "b", "c"}, {"p", "q", "r"}};
  std::vector<Model> models;
  for (int k = 0; k < 12; ++k) models.push_back(oracle::random_model(rng, sig, 5));
  for (int schema = 0; schema < kSchemaCount; ++schema) {
    for (int rep = 0; rep < 25; ++rep) {
      Formula inst = oracle::random_schema_instance(rng, schema, sig, 1);
      for (const Model& m : models) {
        CAPTURE(render(inst));
        CHECK(valid_in_model(m, inst));
      }
    }
  }
}

TEST_CASE("rules preserve validity within a model") {
  std::mt19937 rng(74);
  oracle::Sig sig{{"a", "b"}, {"p", "q"}};
  for (int iter = 0; iter < 40; ++iter) {
    Model m = oracle::random_model(rng, sig, 5);
    Formula alpha = oracle::random_schema_instance(rng, 1 + (int)(rng() % (kSchemaCount - 1)), sig, 1);
    Formula beta = oracle::random_formula(rng, sig, 2);
    REQUIRE(valid_in_model(m, alpha));

    // modus ponens through a tautological implication
    Formula imp = Imp(alpha, Imp(beta, alpha));
    REQUIRE(valid_in_model(m, imp));
    CHECK(valid_in_model(m, Imp(beta, alpha)));

    // necessitation in all three flavours
    CHECK(valid_in_model(m, L("a", alpha)));
    CHECK(valid_in_model(m, EqBox("a", "b", alpha)));
    CHECK(valid_in_model(m, CBox("b", "a", alpha)));
  }
}
