#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "alp/formula.hpp"
#include "alp/model.hpp"

namespace alp {

class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string message, std::size_t closure_size)
      : std::runtime_error(std::move(message)), closure_size_(closure_size) {}
  std::size_t closure_size() const { return closure_size_; }

 private:
  std::size_t closure_size_;
};

struct DecideOptions {
  std::set<AgentId> agents;
  std::size_t max_atoms = 1u << 16;  // cap on enumerated atom candidates
  int fallback_worlds = 4;           // bounded search used when no extracted witness verifies
  bool use_fallback = true;
};

// A maximal locally-coherent subset of the signed closure: exactly one of
// b / ~b for every non-negated closure member b.
struct Atom {
  FormulaSet members;
  bool contains(const Formula& f) const { return members.count(f) > 0; }
};

// All saturated candidate atoms for f's closure, in deterministic order.
// Throws BudgetError when the candidate count exceeds the configured cap.
std::vector<Atom> build_atoms(const Formula& f, const DecideOptions& opts);

struct SatResult {
  bool satisfiable = false;
  // A true verdict is certified when the witness below was checked
  // semantically; the test corpus requires this to always hold.
  bool certified = false;
  std::optional<Model> witness;
  WorldId witness_world;
  std::size_t closure_size = 0;
  std::size_t atom_count = 0;
};

// Satisfiability for update-free formulas: candidate atoms are pruned until
// every surviving negated box is fulfilled by a reachable surviving atom,
// then a concrete model is extracted from the survivors and re-checked.
SatResult satisfiable(const Formula& f, const DecideOptions& opts);

struct ValidityResult {
  bool valid = false;
  SatResult counterexample;  // satisfiability outcome for the negation
};

ValidityResult valid(const Formula& f, const DecideOptions& opts);

// Exhaustive enumeration of models up to the bounds; returns the first
// pointed model satisfying f. Proposition set is atoms_of(f), padded with
// fresh letters up to max_props.
std::optional<std::pair<Model, WorldId>> bounded_search(const Formula& f, int max_worlds,
                                                        int max_props,
                                                        const std::set<AgentId>& agents);

}  // namespace alp
