#pragma once

#include <set>
#include <vector>

#include "alp/formula.hpp"

namespace alp {

// Least set containing f that is closed under the closure rules, with index
// pairs instantiated over the declared agent set. Result is finite and sorted
// by structural order. Introspection seeding for plain L/E formulas keys off
// the subformulas of f; every other rule re-fires on closure members until
// fixpoint (firing those two on arbitrary members would regress forever:
// L[a]p -> L[a]L[a]p -> ...).
//
// Requires: agents nonempty and covering every agent mentioned in f;
// f free of update operators. Throws std::invalid_argument otherwise.
std::vector<Formula> closure(const Formula& f, const std::set<AgentId>& agents);

}  // namespace alp
