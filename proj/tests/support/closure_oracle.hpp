#pragma once

#include <set>
#include <vector>

#include "alp/formula.hpp"

namespace oracle {

// Literal one-pass application of the eleven closure rules to S. The two
// introspection rules keyed to plain L/E formulas range over sub_f. Returns
// only the formulas mandated but missing from S.
alp::FormulaSet closure_rule_additions(const alp::FormulaSet& S,
                                       const std::vector<alp::Formula>& sub_f,
                                       const std::set<alp::AgentId>& agents);

// Independent fixpoint iteration of the rules, for comparison with the
// production closure.
std::vector<alp::Formula> closure_fixpoint(const alp::Formula& f,
                                           const std::set<alp::AgentId>& agents);

}  // namespace oracle
