#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alp/formula.hpp"

namespace alp {

using WorldId = std::string;

enum class ModelErrorCode {
  BadFormat,
  EmptyWorlds,
  NotEquivalence,
  EmptyAwareness,
  AwarenessNotSubset,
  UnknownAgent,
  UnknownProp,
  UnknownWorld,
  MissingValuation,
  MissingAwareness,
  ExplicitIndist,
  DuplicateName,
};

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ModelErrorCode code() const { return code_; }

 private:
  ModelErrorCode code_;
};

const char* to_string(ModelErrorCode code);

// Disjoint blocks covering all world indices. Blocks are sorted internally
// and ordered by least member.
struct Partition {
  std::vector<int> block_of;
  std::vector<std::vector<int>> blocks;

  int size() const { return static_cast<int>(block_of.size()); }
  int block_count() const { return static_cast<int>(blocks.size()); }
  bool same_block(int w, int v) const { return block_of[w] == block_of[v]; }
  bool is_identity() const { return blocks.size() == block_of.size(); }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.block_of == b.block_of ? a.blocks == b.blocks : false;
  }

  // Builds a partition from a block-id assignment (ids need not be dense).
  static Partition from_assignment(const std::vector<int>& assignment);
};

// Validated epistemic model with awareness. Immutable after construction;
// indistinguishability and composed-closure partitions are derived from the
// valuation and awareness sets at validation time, never taken as input.
class Model {
 public:
  // Unvalidated description, as read from a model file or built in code.
  struct Raw {
    std::vector<AgentId> agents;
    std::vector<PropId> props;
    std::vector<WorldId> worlds;
    std::vector<std::vector<bool>> valuation;  // [world][prop]
    // Per agent: listed edges and whether to take the equivalence closure
    // (reflexive-symmetric-transitive) before validating.
    std::vector<std::vector<std::pair<int, int>>> edges;
    std::vector<bool> close_equivalence;
    // [viewpoint][subject] -> aware props, flattened by viewpoint-major index.
    std::vector<std::vector<bool>> awareness;
  };

  static Model validate(Raw raw);
  static Model from_json_text(const std::string& text);
  static Model from_file(const std::string& path);

  const std::vector<AgentId>& agents() const { return agents_; }
  const std::vector<PropId>& props() const { return props_; }
  const std::vector<WorldId>& worlds() const { return worlds_; }

  int agent_index(const AgentId& a) const;
  int prop_index(const PropId& p) const;
  int world_index(const WorldId& w) const;
  // Throwing variants for query surfaces.
  int require_agent(const AgentId& a) const;
  int require_prop(const PropId& p) const;
  int require_world(const WorldId& w) const;

  int num_agents() const { return static_cast<int>(agents_.size()); }
  int num_props() const { return static_cast<int>(props_.size()); }
  int num_worlds() const { return static_cast<int>(worlds_.size()); }

  bool val(int world, int prop) const { return valuation_[world][prop]; }
  const std::vector<std::vector<bool>>& valuation() const { return valuation_; }

  // R_j as a partition of worlds.
  const Partition& access(int agent) const { return access_[agent]; }
  bool aware(int viewpoint, int subject, int prop) const {
    return awareness_[pair_index(viewpoint, subject)][prop];
  }
  const std::vector<bool>& awareness_set(int viewpoint, int subject) const {
    return awareness_[pair_index(viewpoint, subject)];
  }

  // Indistinguishability partition for subject j from viewpoint i: worlds in
  // the same block agree on every proposition j is aware of from i's view.
  const Partition& indist(int viewpoint, int subject) const {
    return indist_[pair_index(viewpoint, subject)];
  }
  const Partition& indist(const AgentId& i, const AgentId& j) const {
    return indist_[pair_index(require_agent(i), require_agent(j))];
  }

  // Partition of the transitive closure of one indistinguishability step
  // followed by one accessibility step.
  const Partition& composed(int viewpoint, int subject) const {
    return composed_[pair_index(viewpoint, subject)];
  }
  const Partition& composed(const AgentId& i, const AgentId& j) const {
    return composed_[pair_index(require_agent(i), require_agent(j))];
  }

  std::string to_json_text() const;

  friend bool operator==(const Model& a, const Model& b);

 private:
  Model() = default;
  int pair_index(int i, int j) const { return i * num_agents() + j; }

  std::vector<AgentId> agents_;
  std::vector<PropId> props_;
  std::vector<WorldId> worlds_;
  std::map<std::string, int> agent_idx_, prop_idx_, world_idx_;
  std::vector<std::vector<bool>> valuation_;
  std::vector<Partition> access_;
  std::vector<std::vector<bool>> awareness_;
  std::vector<Partition> indist_;
  std::vector<Partition> composed_;
};

// Blocks as world names, ordered by least world name; block members sorted.
std::vector<std::vector<WorldId>> classes(const Model& m, const Partition& p);

// Graphviz export: worlds with their valuations, accessibility edges per
// agent, and optionally the blocks of one derived partition as clusters.
enum class DotPartition { None, Indist, Composed };
std::string to_dot(const Model& m, DotPartition which = DotPartition::None,
                   const AgentId& viewpoint = "", const AgentId& subject = "");

}  // namespace alp
