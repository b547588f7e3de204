#include <random>

#include "alp/checker.hpp"
#include "alp/decide.hpp"
#include "alp/parser.hpp"
#include "alp/proofs.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace alp;

namespace {

DecideOptions opts_ab() {
  DecideOptions o;
  o.agents = {"a", "b"};
  return o;
}

DecideOptions opts_a() {
  DecideOptions o;
  o.agents = {"a"};
  return o;
}

}  // namespace

TEST_CASE("atoms decide every member exactly once") {
  auto atoms = build_atoms(Prop("p"), opts_a());
  CHECK(atoms.size() > 1);
  for (const Atom& atom : atoms) {
    CHECK(atom.contains(Prop("p")) != atom.contains(Not(Prop("p"))));
    CHECK((atom.contains(Prop("p")) || atom.contains(Not(Prop("p")))));
  }
}

TEST_CASE("atoms respect the explicit-knowledge definition") {
  auto atoms = build_atoms(K("a", "a", Prop("p")), opts_a());
  CHECK(!atoms.empty());
  for (const Atom& atom : atoms) {
    if (atom.contains(K("a", "a", Prop("p")))) {
      CHECK(atom.contains(Aware("a", "a", Prop("p"))));
      CHECK(atom.contains(CBox("a", "a", Prop("p"))));
    }
  }
}

TEST_CASE("atoms respect reflexivity of C") {
  auto atoms = build_atoms(CBox("a", "a", Prop("p")), opts_a());
  CHECK(!atoms.empty());
  for (const Atom& atom : atoms)
    if (atom.contains(CBox("a", "a", Prop("p")))) CHECK(atom.contains(Prop("p")));
}

TEST_CASE("basic satisfiability verdicts") {
  auto unsat = satisfiable(parse("p & ~p"), opts_ab());
  CHECK_FALSE(unsat.satisfiable);

  auto t_l = satisfiable(parse("~(L[b] p -> p)"), opts_ab());
  CHECK_FALSE(t_l.satisfiable);

  auto sat = satisfiable(parse("~K[b,b] n & A[b,b] p_b"), opts_ab());
  CHECK(sat.satisfiable);
  CHECK(sat.certified);
  REQUIRE(sat.witness.has_value());
  CHECK(satisfies(*sat.witness, sat.witness_world, parse("~K[b,b] n & A[b,b] p_b")));
  CHECK(oracle::satisfies(*sat.witness, sat.witness_world, parse("~K[b,b] n & A[b,b] p_b")));
}

TEST_CASE("every schema instance over one prop and two agents is valid") {
  std::mt19937 rng(81);
  oracle::Sig sig{{"a", "b"}, {"p"}};
  for (int schema = 0; schema < kSchemaCount; ++schema) {
    Formula inst = oracle::random_schema_instance(rng, schema, sig, 0);
    CAPTURE(render(inst));
    auto v = valid(inst, opts_ab());
    CHECK(v.valid);
  }
}

TEST_CASE("unguarded negative introspection for K fails with a counterexample") {
  auto v = valid(parse("~K[a,a] p -> K[a,a] ~K[a,a] p"), opts_a());
  CHECK_FALSE(v.valid);
  REQUIRE(v.counterexample.witness.has_value());
  CHECK(v.counterexample.certified);
  CHECK(satisfies(*v.counterexample.witness, v.counterexample.witness_world,
                  parse("~(~K[a,a] p -> K[a,a] ~K[a,a] p)")));

  auto guarded = valid(parse("~K[a,a] p & A[a,a] ~K[a,a] p -> K[a,a] ~K[a,a] p"), opts_a());
  CHECK(guarded.valid);
}

TEST_CASE("bounded search") {
  CHECK_FALSE(bounded_search(parse("p & ~p"), 3, 2, {"a", "b"}).has_value());

  auto witness = bounded_search(parse("~A[a,b] p"), 2, 2, {"a", "b"});
  REQUIRE(witness.has_value());
  const Model& m = witness->first;
  CHECK_FALSE(m.aware(m.require_agent("a"), m.require_agent("b"), m.require_prop("p")));
  CHECK(satisfies(m, witness->second, parse("~A[a,b] p")));

  CHECK_FALSE(bounded_search(parse("K[a,a] p & ~p"), 3, 2, {"a", "b"}).has_value());

  CHECK_THROWS_AS(bounded_search(parse("[+p][a,a] p"), 2, 2, {"a"}), std::invalid_argument);
}

TEST_CASE("filtration verdicts agree with exhaustive search on a small corpus") {
  std::mt19937 rng(82);
  oracle::Sig sig{{"a", "b"}, {"p", "q"}};
  DecideOptions opts = opts_ab();
  int sat_count = 0, unsat_count = 0;
  for (int iter = 0; iter < 60; ++iter) {
    Formula f = oracle::random_formula(rng, sig, 2);
    CAPTURE(render(f));
    SatResult res = satisfiable(f, opts);
    auto found = bounded_search(f, 3, 2, {"a", "b"});
    if (found.has_value()) {
      CHECK(res.satisfiable);
      ++sat_count;
    } else {
      ++unsat_count;
    }
    if (res.satisfiable) {
      CHECK(res.certified);
      REQUIRE(res.witness.has_value());
      CHECK(satisfies(*res.witness, res.witness_world, f));
      CHECK(oracle::satisfies(*res.witness, res.witness_world, f));
    }
  }
  CHECK(sat_count > 10);
}

TEST_CASE("budget errors report the closure size") {
  DecideOptions tiny = opts_ab();
  tiny.max_atoms = 2;
  try {
    satisfiable(parse("K[a,b] p | K[b,a] q"), tiny);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.closure_size() > 0);
  }
}

TEST_CASE("decide rejects update operators and undeclared agents") {
  CHECK_THROWS_AS(satisfiable(parse("[+p][a,a] p"), opts_a()), std::invalid_argument);
  CHECK_THROWS_AS(satisfiable(parse("K[a,b] p"), opts_a()), std::invalid_argument);
}
