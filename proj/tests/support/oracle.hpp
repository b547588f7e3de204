#pragma once

// Independent reference implementations used only by tests. Everything here
// recomputes derived data (indistinguishability, reach sets, closures) from
// the raw model components, without touching the cached partitions or the
// production evaluator.

#include <random>
#include <set>
#include <vector>

#include "alp/checker.hpp"
#include "alp/formula.hpp"
#include "alp/model.hpp"

namespace oracle {

// (w,v) agree on every proposition j attends to from i's viewpoint.
bool indist_related(const alp::Model& m, int i, int j, int w, int v);

// Reach set of the transitive closure of (indist step; access step), by BFS.
std::vector<int> c_reach(const alp::Model& m, int i, int j, int w);

// Same BFS but stepping access first, then indist.
std::vector<int> c_reach_swapped(const alp::Model& m, int i, int j, int w);

// Naive recursive satisfaction: no memoisation, no cached partitions.
bool satisfies(const alp::Model& m, int w, const alp::Formula& f,
               alp::UpdateMode mode = alp::UpdateMode::Targeted);
bool satisfies(const alp::Model& m, const alp::WorldId& w, const alp::Formula& f,
               alp::UpdateMode mode = alp::UpdateMode::Targeted);

// Signature shared by random models and random formulas.
struct Sig {
  std::vector<alp::AgentId> agents;
  std::vector<alp::PropId> props;
};

alp::Model random_model(std::mt19937& rng, const Sig& sig, int max_worlds);

// Random update-free formula of the given depth budget.
alp::Formula random_formula(std::mt19937& rng, const Sig& sig, int depth);

// Random formula that may also contain update operators.
alp::Formula random_formula_dynamic(std::mt19937& rng, const Sig& sig, int depth);

// Random instance of an axiom schema over the signature. TAUT instances are
// drawn from a list of tautology shapes filled with random formulas.
alp::Formula random_schema_instance(std::mt19937& rng, int schema, const Sig& sig, int depth);

}  // namespace oracle
