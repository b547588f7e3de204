#pragma once

#include <string>
#include <vector>

#include "alp/dynamics.hpp"
#include "alp/formula.hpp"
#include "alp/model.hpp"

namespace alp {

// One record per C-operator evaluation: the reach set the verdict was read
// from (the composed-closure block of the evaluation world).
struct TraceEntry {
  std::string formula;
  WorldId world;
  std::vector<WorldId> block;
  bool holds;
};

struct EvalOptions {
  UpdateMode mode = UpdateMode::Targeted;
  std::vector<TraceEntry>* trace = nullptr;
};

// Satisfaction at a pointed model. Throws ModelError when the formula or the
// world refers to something the model does not declare, and UpdateError when
// an update inside the formula is inadmissible.
bool satisfies(const Model& m, const WorldId& w, const Formula& f, const EvalOptions& opts = {});

// Worlds where f holds, in declaration order.
std::vector<WorldId> extension(const Model& m, const Formula& f, const EvalOptions& opts = {});

// True iff f holds at every world of m.
bool valid_in_model(const Model& m, const Formula& f, const EvalOptions& opts = {});

// Scope check only: every proposition and agent in f is declared in m.
void check_scope(const Model& m, const Formula& f);

}  // namespace alp
