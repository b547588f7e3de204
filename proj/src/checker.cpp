#include "alp/checker.hpp"

#include <unordered_map>

namespace alp {

namespace {

struct MemoKey {
  const void* node;
  int world;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>{}(k.node) * 1000003u + static_cast<std::size_t>(k.world);
  }
};

class Evaluator {
 public:
  Evaluator(const Model& m, const EvalOptions& opts) : m_(m), opts_(opts) {}

  bool eval(int w, const Formula& f) {
    MemoKey key{f.id(), w};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool value = compute(w, f);
    memo_.emplace(key, value);
    return value;
  }

 private:
  bool block_all(const Partition& part, int w, const Formula& body) {
    for (int v : part.blocks[part.block_of[w]])
      if (!eval(v, body)) return false;
    return true;
  }

  bool compute(int w, const Formula& f) {
    switch (f.kind()) {
      case Kind::Prop:
        return m_.val(w, m_.require_prop(f.prop()));
      case Kind::Not:
        return !eval(w, f.lhs());
      case Kind::And:
        return eval(w, f.lhs()) && eval(w, f.rhs());
      case Kind::Or:
        return eval(w, f.lhs()) || eval(w, f.rhs());
      case Kind::Imp:
        return !eval(w, f.lhs()) || eval(w, f.rhs());
      case Kind::Iff:
        return eval(w, f.lhs()) == eval(w, f.rhs());
      case Kind::Aware: {
        const int i = m_.require_agent(f.viewpoint());
        const int j = m_.require_agent(f.subject());
        for (const PropId& p : atoms_of(f.lhs()))
          if (!m_.aware(i, j, m_.require_prop(p))) return false;
        return true;
      }
      case Kind::ImplicitK:
        return block_all(m_.access(m_.require_agent(f.subject())), w, f.lhs());
      case Kind::EqBox:
        return block_all(
            m_.indist(m_.require_agent(f.viewpoint()), m_.require_agent(f.subject())), w, f.lhs());
      case Kind::CBox: {
        const Partition& part =
            m_.composed(m_.require_agent(f.viewpoint()), m_.require_agent(f.subject()));
        bool holds = block_all(part, w, f.lhs());
        if (opts_.trace) {
          TraceEntry entry;
          entry.formula = render(f);
          entry.world = m_.worlds()[w];
          for (int v : part.blocks[part.block_of[w]]) entry.block.push_back(m_.worlds()[v]);
          entry.holds = holds;
          opts_.trace->push_back(std::move(entry));
        }
        return holds;
      }
      case Kind::ExplicitK: {
        const int i = m_.require_agent(f.viewpoint());
        const int j = m_.require_agent(f.subject());
        for (const PropId& p : atoms_of(f.lhs()))
          if (!m_.aware(i, j, m_.require_prop(p))) return false;
        return block_all(m_.composed(i, j), w, f.lhs());
      }
      case Kind::PlusUpdate:
      case Kind::MinusUpdate: {
        // The body is evaluated in the updated model, rebuilt per occurrence.
        Model updated = f.kind() == Kind::PlusUpdate
                            ? update_plus(m_, f.viewpoint(), f.subject(), f.lhs(), opts_.mode)
                            : update_minus(m_, f.viewpoint(), f.subject(), f.lhs(), opts_.mode);
        Evaluator inner(updated, opts_);
        return inner.eval(w, f.rhs());
      }
    }
    return false;
  }

  const Model& m_;
  const EvalOptions& opts_;
  std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
};

}  // namespace

void check_scope(const Model& m, const Formula& f) {
  if (!f) return;
  switch (f.kind()) {
    case Kind::Prop:
      m.require_prop(f.prop());
      return;
    case Kind::ImplicitK:
      m.require_agent(f.subject());
      break;
    case Kind::Aware:
    case Kind::EqBox:
    case Kind::CBox:
    case Kind::ExplicitK:
    case Kind::PlusUpdate:
    case Kind::MinusUpdate:
      m.require_agent(f.viewpoint());
      m.require_agent(f.subject());
      break;
    default:
      break;
  }
  check_scope(m, f.lhs());
  check_scope(m, f.rhs());
}

bool satisfies(const Model& m, const WorldId& w, const Formula& f, const EvalOptions& opts) {
  const int wi = m.require_world(w);
  check_scope(m, f);
  Evaluator ev(m, opts);
  return ev.eval(wi, f);
}

std::vector<WorldId> extension(const Model& m, const Formula& f, const EvalOptions& opts) {
  check_scope(m, f);
  Evaluator ev(m, opts);
  std::vector<WorldId> out;
  for (int w = 0; w < m.num_worlds(); ++w)
    if (ev.eval(w, f)) out.push_back(m.worlds()[w]);
  return out;
}

bool valid_in_model(const Model& m, const Formula& f, const EvalOptions& opts) {
  check_scope(m, f);
  Evaluator ev(m, opts);
  for (int w = 0; w < m.num_worlds(); ++w)
    if (!ev.eval(w, f)) return false;
  return true;
}

}  // namespace alp
