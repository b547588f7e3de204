#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace alp {

using AgentId = std::string;
using PropId = std::string;

enum class Kind : std::uint8_t {
  Prop,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Aware,       // A[i,j]
  ImplicitK,   // L[j]
  EqBox,       // E[i,j]
  CBox,        // C[i,j]
  ExplicitK,   // K[i,j]
  PlusUpdate,  // [+content][i,j] body
  MinusUpdate  // [-content][i,j] body
};

// Immutable formula tree. Copies are cheap (shared nodes); structural
// equality is hash-accelerated. A default-constructed Formula is null and
// only valid as a placeholder.
class Formula {
 public:
  Formula() = default;

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_ && node_->kind == k; }

  // Prop only.
  const PropId& prop() const { return node_->name; }
  // Viewpoint agent i (Aware/EqBox/CBox/ExplicitK/updates).
  const AgentId& viewpoint() const { return node_->name; }
  // Subject agent j (all indexed operators incl. ImplicitK).
  const AgentId& subject() const { return node_->name2; }

  // Unary operand, left child of a binary connective, or update content.
  Formula lhs() const { return Formula(node_->child1); }
  // Right child of a binary connective, or update body.
  Formula rhs() const { return Formula(node_->child2); }

  std::size_t hash() const { return node_ ? node_->hash : 0; }
  int size() const { return node_ ? node_->size : 0; }

  // Node identity; stable for the lifetime of any copy of this formula.
  const void* id() const { return node_.get(); }

  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.node_->hash != b.node_->hash) return false;
    return deep_equal(*a.node_, *b.node_);
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;    // prop name, or viewpoint agent i
    std::string name2;   // subject agent j
    std::shared_ptr<const Node> child1;
    std::shared_ptr<const Node> child2;
    std::size_t hash = 0;
    int size = 1;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static bool deep_equal(const Node& a, const Node& b);
  static Formula make(Kind k, std::string name, std::string name2, Formula c1, Formula c2);

  std::shared_ptr<const Node> node_;

  friend Formula Prop(PropId name);
  friend Formula Not(Formula f);
  friend Formula And(Formula l, Formula r);
  friend Formula Or(Formula l, Formula r);
  friend Formula Imp(Formula l, Formula r);
  friend Formula Iff(Formula l, Formula r);
  friend Formula Aware(AgentId i, AgentId j, Formula f);
  friend Formula L(AgentId j, Formula f);
  friend Formula EqBox(AgentId i, AgentId j, Formula f);
  friend Formula CBox(AgentId i, AgentId j, Formula f);
  friend Formula K(AgentId i, AgentId j, Formula f);
  friend Formula Plus(AgentId i, AgentId j, Formula content, Formula body);
  friend Formula Minus(AgentId i, AgentId j, Formula content, Formula body);
};

Formula Prop(PropId name);
Formula Not(Formula f);
Formula And(Formula l, Formula r);
Formula Or(Formula l, Formula r);
Formula Imp(Formula l, Formula r);
Formula Iff(Formula l, Formula r);
Formula Aware(AgentId i, AgentId j, Formula f);
Formula L(AgentId j, Formula f);
Formula EqBox(AgentId i, AgentId j, Formula f);
Formula CBox(AgentId i, AgentId j, Formula f);
Formula K(AgentId i, AgentId j, Formula f);
Formula Plus(AgentId i, AgentId j, Formula content, Formula body);
Formula Minus(AgentId i, AgentId j, Formula content, Formula body);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::unordered_set<Formula, FormulaHash>;

// Total order: by node count, then structure. Deterministic across runs.
int compare(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};

// Atomic propositions occurring anywhere in f, including update contents.
std::set<PropId> atoms_of(const Formula& f);

// Agents occurring anywhere in f.
std::set<AgentId> agents_of(const Formula& f);

// f and all its proper subformulas, deduplicated, in DFS discovery order.
std::vector<Formula> subformulas(const Formula& f);

bool contains_dynamic(const Formula& f);

// Concrete syntax with minimal parentheses; parse(render(f)) == f.
std::string render(const Formula& f);

}  // namespace alp
