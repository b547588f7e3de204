#include "alp/decide.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "alp/checker.hpp"
#include "alp/closure.hpp"

namespace alp {

namespace {

// Signed reference into the base (non-negated) closure members.
struct SRef {
  int idx = -1;
  bool pos = true;
};

bool world_constant(const Formula& f) {
  switch (f.kind()) {
    case Kind::Aware:
      return true;
    case Kind::Not:
      return world_constant(f.lhs());
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
    case Kind::Iff:
      return world_constant(f.lhs()) && world_constant(f.rhs());
    default:
      return false;
  }
}

Formula strip_negations(Formula f, bool& pos) {
  pos = true;
  while (f.is(Kind::Not)) {
    f = f.lhs();
    pos = !pos;
  }
  return f;
}

// How the value of one base member follows from earlier ones.
struct Det {
  enum class Rule {
    Free,            // branch on both values
    Bool,            // connective over children
    AwareComposite,  // conjunction of atomic awareness members
    AwareAtomic,     // subset law against the viewpoint's own set
    KDef,            // awareness && C
    Mirror,          // box whose operand is constant on the box's blocks
    Guarded,         // box with only the reflexivity guard
    EqAtomic,        // E over an atomic literal: reflexivity + awareness agreement
  };
  Rule rule = Rule::Free;
  SRef operand;            // Mirror/Guarded/EqAtomic literal, Bool lhs
  SRef operand2;           // Bool rhs
  Kind op = Kind::And;     // Bool connective
  std::vector<int> conj;   // AwareComposite members; AwareAtomic siblings
  int own_idx = -1;        // AwareAtomic: index of the viewpoint's own member
  int a_idx = -1, c_idx = -1;  // KDef
  int aneq_a = -1, aneq_p = -1;  // EqAtomic: awareness member and prop
  bool aneq_pos = true;          // literal polarity
};

struct BoxInfo {
  int box_idx;
  SRef operand;
};

class Engine {
 public:
  Engine(const Formula& f, const DecideOptions& opts) : goal_(f), opts_(opts) {
    if (contains_dynamic(f))
      throw std::invalid_argument("satisfiability requires an update-free formula");
    if (opts.agents.empty()) throw std::invalid_argument("empty agent set");
    agents_.assign(opts.agents.begin(), opts.agents.end());

    for (const Formula& g : closure(f, opts.agents))
      if (!g.is(Kind::Not)) base_.push_back(g);
    // closure() returns the members sorted ascending by structural order, so
    // every operand of a base member precedes it.
    for (std::size_t k = 0; k < base_.size(); ++k) index_.emplace(base_[k], (int)k);

    prepare();
  }

  const std::vector<Formula>& base() const { return base_; }
  std::size_t closure_size() const { return base_.size(); }

  SRef sref(const Formula& f) const {
    bool pos;
    Formula core = strip_negations(f, pos);
    auto it = index_.find(core);
    if (it == index_.end()) return {};
    return {it->second, pos};
  }

  bool sval(const std::vector<std::int8_t>& val, const SRef& r) const {
    return r.pos ? val[r.idx] == 1 : val[r.idx] == 0;
  }

  // Enumerates all saturated assignments.
  std::vector<std::vector<std::int8_t>> enumerate() {
    std::vector<std::vector<std::int8_t>> atoms;
    std::vector<std::int8_t> val(base_.size(), -1);
    std::size_t visited = 0;
    const std::size_t visit_cap = opts_.max_atoms * 64;
    dfs(0, val, atoms, visited, visit_cap);
    return atoms;
  }

  // --- canonical relations -------------------------------------------------

  int agent_count() const { return (int)agents_.size(); }
  const std::vector<AgentId>& agents() const { return agents_; }

  const std::vector<BoxInfo>& l_boxes(int j) const { return l_boxes_[j]; }
  const std::vector<BoxInfo>& e_boxes(int i, int j) const {
    return e_boxes_[i * agent_count() + j];
  }
  const std::vector<BoxInfo>& c_boxes(int i, int j) const {
    return c_boxes_[i * agent_count() + j];
  }
  // (prop base idx, awareness base idx) pairs for the agreement condition
  const std::vector<std::pair<int, int>>& eq_props(int i, int j) const {
    return eq_props_[i * agent_count() + j];
  }
  const std::vector<int>& aware_atomics() const { return aware_atomics_; }
  const std::vector<int>& prop_indices() const { return prop_indices_; }

  bool rel_l(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b, int j) const {
    for (const BoxInfo& box : l_boxes_[j])
      if (a[box.box_idx] == 1 && !sval(b, box.operand)) return false;
    return true;
  }

  bool rel_eq(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b, int i,
              int j) const {
    for (const BoxInfo& box : e_boxes_[i * agent_count() + j])
      if (a[box.box_idx] == 1 && !sval(b, box.operand)) return false;
    for (const auto& [p_idx, a_idx] : eq_props_[i * agent_count() + j])
      if (a[a_idx] == 1 && a[p_idx] != b[p_idx]) return false;
    return true;
  }

 private:
  void dfs(std::size_t t, std::vector<std::int8_t>& val,
           std::vector<std::vector<std::int8_t>>& atoms, std::size_t& visited,
           std::size_t visit_cap) {
    if (++visited > visit_cap)
      throw BudgetError("atom search budget exceeded (closure size " +
                            std::to_string(base_.size()) + ")",
                        base_.size());
    if (t == base_.size()) {
      atoms.push_back(val);
      if (atoms.size() > opts_.max_atoms)
        throw BudgetError("atom count exceeds the configured cap (closure size " +
                              std::to_string(base_.size()) + ")",
                          base_.size());
      return;
    }
    int forced = determine(t, val);
    if (forced == 2) {
      val[t] = 0;
      dfs(t + 1, val, atoms, visited, visit_cap);
      val[t] = 1;
      dfs(t + 1, val, atoms, visited, visit_cap);
    } else {
      val[t] = (std::int8_t)forced;
      dfs(t + 1, val, atoms, visited, visit_cap);
    }
    val[t] = -1;
  }

  // 0 = forced false, 1 = forced true, 2 = free.
  int determine(std::size_t t, const std::vector<std::int8_t>& val) const {
    const Det& d = det_[t];
    switch (d.rule) {
      case Det::Rule::Free:
        return 2;
      case Det::Rule::Bool: {
        bool l = sval(val, d.operand), r = sval(val, d.operand2);
        switch (d.op) {
          case Kind::And: return l && r;
          case Kind::Or: return l || r;
          case Kind::Imp: return !l || r;
          default: return l == r;
        }
      }
      case Det::Rule::AwareComposite: {
        for (int k : d.conj)
          if (val[k] != 1) return 0;
        return 1;
      }
      case Det::Rule::AwareAtomic: {
        if (d.own_idx == (int)t) {
          // own set: forced once any subject's set claims the proposition
          for (int k : d.conj)
            if (k < (int)t && val[k] == 1) return 1;
          return 2;
        }
        if (d.own_idx < (int)t && val[d.own_idx] == 0) return 0;
        return 2;
      }
      case Det::Rule::KDef:
        return (val[d.a_idx] == 1 && val[d.c_idx] == 1) ? 1 : 0;
      case Det::Rule::Mirror:
        return sval(val, d.operand) ? 1 : 0;
      case Det::Rule::Guarded:
        return sval(val, d.operand) ? 2 : 0;
      case Det::Rule::EqAtomic: {
        bool lit = d.aneq_pos ? val[d.aneq_p] == 1 : val[d.aneq_p] == 0;
        if (!lit) return 0;                    // reflexivity
        if (val[d.aneq_a] == 1) return 1;      // aware literal propagates to the block
        return 2;
      }
    }
    return 2;
  }

  void prepare() {
    const int na = agent_count();
    auto agent_idx = [&](const AgentId& a) {
      return (int)(std::lower_bound(agents_.begin(), agents_.end(), a) - agents_.begin());
    };

    det_.resize(base_.size());
    l_boxes_.resize(na);
    e_boxes_.resize(na * na);
    c_boxes_.resize(na * na);
    eq_props_.resize(na * na);

    // atomic awareness lookup: (i, j, p base idx) -> base idx
    std::unordered_map<long long, int> aware_at;
    auto aware_key = [&](int i, int j, int p) {
      return ((long long)i * na + j) * (long long)base_.size() + p;
    };
    for (std::size_t t = 0; t < base_.size(); ++t) {
      const Formula& g = base_[t];
      if (g.is(Kind::Aware) && g.lhs().is(Kind::Prop)) {
        SRef p = sref(g.lhs());
        aware_at[aware_key(agent_idx(g.viewpoint()), agent_idx(g.subject()), p.idx)] = (int)t;
      }
      if (g.is(Kind::Prop)) prop_indices_.push_back((int)t);
    }

    for (std::size_t t = 0; t < base_.size(); ++t) {
      const Formula& g = base_[t];
      Det& d = det_[t];
      switch (g.kind()) {
        case Kind::Prop:
          d.rule = Det::Rule::Free;
          break;
        case Kind::And:
        case Kind::Or:
        case Kind::Imp:
        case Kind::Iff:
          d.rule = Det::Rule::Bool;
          d.op = g.kind();
          d.operand = sref(g.lhs());
          d.operand2 = sref(g.rhs());
          break;
        case Kind::Aware: {
          const int i = agent_idx(g.viewpoint()), j = agent_idx(g.subject());
          if (g.lhs().is(Kind::Prop)) {
            d.rule = Det::Rule::AwareAtomic;
            SRef p = sref(g.lhs());
            d.own_idx = aware_at.at(aware_key(i, i, p.idx));
            if (d.own_idx == (int)t)
              for (int j2 = 0; j2 < na; ++j2) {
                if (j2 == i) continue;
                auto it = aware_at.find(aware_key(i, j2, p.idx));
                if (it != aware_at.end()) d.conj.push_back(it->second);
              }
            aware_atomics_.push_back((int)t);
          } else {
            d.rule = Det::Rule::AwareComposite;
            for (const PropId& p : atoms_of(g.lhs())) {
              SRef pr = sref(Prop(p));
              d.conj.push_back(aware_at.at(aware_key(i, j, pr.idx)));
            }
          }
          break;
        }
        case Kind::ExplicitK: {
          d.rule = Det::Rule::KDef;
          d.a_idx = sref(Aware(g.viewpoint(), g.subject(), g.lhs())).idx;
          d.c_idx = sref(CBox(g.viewpoint(), g.subject(), g.lhs())).idx;
          break;
        }
        case Kind::ImplicitK: {
          const int j = agent_idx(g.subject());
          d.operand = sref(g.lhs());
          bool pos;
          Formula core = strip_negations(g.lhs(), pos);
          bool mirror = world_constant(g.lhs()) ||
                        (core.is(Kind::ImplicitK) && core.subject() == g.subject()) ||
                        (core.is(Kind::CBox) && core.subject() == g.subject());
          d.rule = mirror ? Det::Rule::Mirror : Det::Rule::Guarded;
          l_boxes_[j].push_back({(int)t, d.operand});
          break;
        }
        case Kind::EqBox: {
          const int i = agent_idx(g.viewpoint()), j = agent_idx(g.subject());
          d.operand = sref(g.lhs());
          bool pos;
          Formula core = strip_negations(g.lhs(), pos);
          bool same_pair_eq = core.is(Kind::EqBox) && core.viewpoint() == g.viewpoint() &&
                              core.subject() == g.subject();
          bool same_pair_c = core.is(Kind::CBox) && core.viewpoint() == g.viewpoint() &&
                             core.subject() == g.subject();
          bool lc = core.is(Kind::ImplicitK) && core.subject() == g.subject() &&
                    core.lhs().is(Kind::CBox) && core.lhs().viewpoint() == g.viewpoint() &&
                    core.lhs().subject() == g.subject();
          if (world_constant(g.lhs()) || same_pair_eq || same_pair_c || lc) {
            d.rule = Det::Rule::Mirror;
          } else if (core.is(Kind::Prop)) {
            d.rule = Det::Rule::EqAtomic;
            d.aneq_p = sref(core).idx;
            d.aneq_pos = pos;
            d.aneq_a = aware_at.at(aware_key(i, j, d.aneq_p));
          } else {
            d.rule = Det::Rule::Guarded;
          }
          e_boxes_[i * na + j].push_back({(int)t, d.operand});
          break;
        }
        case Kind::CBox: {
          const int i = agent_idx(g.viewpoint()), j = agent_idx(g.subject());
          d.operand = sref(g.lhs());
          bool pos;
          Formula core = strip_negations(g.lhs(), pos);
          bool same_pair_c = core.is(Kind::CBox) && core.viewpoint() == g.viewpoint() &&
                             core.subject() == g.subject();
          bool lc = core.is(Kind::ImplicitK) && core.subject() == g.subject() &&
                    core.lhs().is(Kind::CBox) && core.lhs().viewpoint() == g.viewpoint() &&
                    core.lhs().subject() == g.subject();
          d.rule = (world_constant(g.lhs()) || same_pair_c || lc) ? Det::Rule::Mirror
                                                                  : Det::Rule::Guarded;
          c_boxes_[i * na + j].push_back({(int)t, d.operand});
          break;
        }
        default:
          d.rule = Det::Rule::Free;
          break;
      }
    }

    // agreement pairs for the EqBox relation
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        for (int p : prop_indices_) {
          auto it = aware_at.find(aware_key(i, j, p));
          if (it != aware_at.end()) eq_props_[i * na + j].push_back({p, it->second});
        }
  }

  Formula goal_;
  DecideOptions opts_;
  std::vector<AgentId> agents_;
  std::vector<Formula> base_;
  std::unordered_map<Formula, int, FormulaHash> index_;
  std::vector<Det> det_;
  std::vector<std::vector<BoxInfo>> l_boxes_;       // per agent
  std::vector<std::vector<BoxInfo>> e_boxes_;       // per pair
  std::vector<std::vector<BoxInfo>> c_boxes_;       // per pair
  std::vector<std::vector<std::pair<int, int>>> eq_props_;
  std::vector<int> aware_atomics_;
  std::vector<int> prop_indices_;
};

// --- pruning ---------------------------------------------------------------

using Assignment = std::vector<std::int8_t>;

// Bitsets over the local member indices of one group.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  void set(int k) { w[k >> 6] |= 1ull << (k & 63); }
  bool test(int k) const { return (w[k >> 6] >> (k & 63)) & 1ull; }
  void clear(int k) { w[k >> 6] &= ~(1ull << (k & 63)); }
  void or_with(const Bits& o) {
    for (std::size_t t = 0; t < w.size(); ++t) w[t] |= o.w[t];
  }
  bool intersects(const Bits& o) const {
    for (std::size_t t = 0; t < w.size(); ++t)
      if (w[t] & o.w[t]) return true;
    return false;
  }
  bool intersects2(const Bits& o, const Bits& o2) const {
    for (std::size_t t = 0; t < w.size(); ++t)
      if (w[t] & o.w[t] & o2.w[t]) return true;
    return false;
  }
  bool any() const {
    for (std::uint64_t x : w)
      if (x) return true;
    return false;
  }
  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::size_t t = 0; t < w.size(); ++t)
      for (std::uint64_t x = w[t]; x; x &= x - 1)
        out.push_back((int)(t * 64 + __builtin_ctzll(x)));
    return out;
  }
};

// Per-group pruning state: fixed relation rows over local indices plus a
// shrinking alive set.
class GroupPruner {
 public:
  GroupPruner(const Engine& eng, const std::vector<Assignment>& atoms, std::vector<int> members)
      : eng_(eng), atoms_(atoms), members_(std::move(members)), n_((int)members_.size()) {
    const int na = eng.agent_count();
    lrows_.resize(na);
    eqrows_.resize(na * na);
  }

  // Returns surviving global atom ids, in the original member order.
  std::vector<int> run() {
    Bits alive(n_);
    for (int u = 0; u < n_; ++u) alive.set(u);
    const int na = eng_.agent_count();

    // Pairs that carry a refuted C box anywhere in the group, with the
    // distinct operands involved.
    std::vector<std::vector<SRef>> c_ops(na * na);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        for (const BoxInfo& box : eng_.c_boxes(i, j)) {
          bool seen_false = false;
          for (int u = 0; u < n_ && !seen_false; ++u)
            seen_false = atoms_[members_[u]][box.box_idx] == 0;
          if (!seen_false) continue;
          auto& ops = c_ops[i * na + j];
          bool dup = false;
          for (const SRef& o : ops) dup = dup || (o.idx == box.operand.idx && o.pos == box.operand.pos);
          if (!dup) ops.push_back(box.operand);
        }

    bool changed = true;
    while (changed) {
      changed = false;

      // For every pair with refuted C boxes: the set of atoms from which some
      // refuter of each operand is reachable along (eq ; l) steps through
      // alive atoms. Computed backwards from the refuters.
      std::map<std::pair<int, std::pair<int, bool>>, Bits> good;
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
          const int pair = i * na + j;
          if (c_ops[pair].empty()) continue;
          // step rows through currently alive atoms
          std::vector<Bits> step(n_, Bits(n_));
          const auto& eqr = eqrow(i, j);
          const auto& lr = lrow(j);
          for (int x = 0; x < n_; ++x) {
            if (!alive.test(x)) continue;
            for (int mid : eqr[x].indices()) {
              if (!alive.test(mid)) continue;
              step[x].or_with(lr[mid]);
            }
            for (std::size_t t = 0; t < step[x].w.size(); ++t) step[x].w[t] &= alive.w[t];
          }
          for (const SRef& op : c_ops[pair]) {
            Bits g(n_);
            for (std::size_t t = 0; t < g.w.size(); ++t)
              g.w[t] = refuters(op).w[t] & alive.w[t];
            bool grew = true;
            while (grew) {
              grew = false;
              for (int v = 0; v < n_; ++v) {
                if (!alive.test(v) || g.test(v)) continue;
                if (step[v].intersects(g)) {
                  g.set(v);
                  grew = true;
                }
              }
            }
            good.emplace(std::make_pair(pair, std::make_pair(op.idx, op.pos)), std::move(g));
          }
        }

      for (int u = 0; u < n_; ++u) {
        if (!alive.test(u)) continue;
        if (fulfilled(u, alive, good)) continue;
        alive.clear(u);
        changed = true;
      }
    }
    std::vector<int> out;
    for (int u : alive.indices()) out.push_back(members_[u]);
    return out;
  }

 private:
  const std::vector<Bits>& lrow(int j) {
    if (lrows_[j].empty()) {
      lrows_[j].assign(n_, Bits(n_));
      for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
          if (eng_.rel_l(atoms_[members_[u]], atoms_[members_[v]], j)) lrows_[j][u].set(v);
    }
    return lrows_[j];
  }

  const std::vector<Bits>& eqrow(int i, int j) {
    const int pair = i * eng_.agent_count() + j;
    if (eqrows_[pair].empty()) {
      eqrows_[pair].assign(n_, Bits(n_));
      for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
          if (eng_.rel_eq(atoms_[members_[u]], atoms_[members_[v]], i, j))
            eqrows_[pair][u].set(v);
    }
    return eqrows_[pair];
  }

  const Bits& refuters(const SRef& op) {
    auto key = std::make_pair(op.idx, op.pos);
    auto it = refuters_.find(key);
    if (it == refuters_.end()) {
      Bits b(n_);
      for (int v = 0; v < n_; ++v)
        if (!eng_.sval(atoms_[members_[v]], op)) b.set(v);
      it = refuters_.emplace(key, std::move(b)).first;
    }
    return it->second;
  }

  bool fulfilled(int u, const Bits& alive,
                 const std::map<std::pair<int, std::pair<int, bool>>, Bits>& good) {
    const Assignment& a = atoms_[members_[u]];
    const int na = eng_.agent_count();

    for (int j = 0; j < na; ++j) {
      for (const BoxInfo& box : eng_.l_boxes(j)) {
        if (a[box.box_idx] != 0) continue;
        if (!lrow(j)[u].intersects2(alive, refuters(box.operand))) return false;
      }
    }
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        for (const BoxInfo& box : eng_.e_boxes(i, j)) {
          if (a[box.box_idx] != 0) continue;
          if (!eqrow(i, j)[u].intersects2(alive, refuters(box.operand))) return false;
        }
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) {
        const int pair = i * na + j;
        for (const BoxInfo& box : eng_.c_boxes(i, j)) {
          if (a[box.box_idx] != 0) continue;
          auto it = good.find(std::make_pair(pair, std::make_pair(box.operand.idx, box.operand.pos)));
          if (it == good.end() || !it->second.test(u)) return false;
        }
      }
    return true;
  }

  const Engine& eng_;
  const std::vector<Assignment>& atoms_;
  std::vector<int> members_;
  int n_;
  std::vector<std::vector<Bits>> lrows_;   // per agent, lazily built
  std::vector<std::vector<Bits>> eqrows_;  // per pair, lazily built
  std::map<std::pair<int, bool>, Bits> refuters_;
};

std::vector<int> prune_group(const Engine& eng, const std::vector<Assignment>& atoms,
                             std::vector<int> members) {
  return GroupPruner(eng, atoms, std::move(members)).run();
}

// --- witness extraction ------------------------------------------------------

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int k = 0; k < n; ++k) parent[k] = k;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

Model extract_model(const Engine& eng, const std::vector<Assignment>& atoms,
                    const std::vector<int>& members) {
  const int n = (int)members.size();
  const int na = eng.agent_count();

  std::vector<PropId> props;
  for (int p : eng.prop_indices()) props.push_back(eng.base()[p].prop());

  // awareness profile is shared across the group
  const Assignment& rep = atoms[members[0]];
  std::vector<std::vector<bool>> awareness(na * na, std::vector<bool>(props.size(), false));
  bool need_padding = false;
  {
    std::unordered_map<int, int> prop_pos;
    for (std::size_t k = 0; k < eng.prop_indices().size(); ++k)
      prop_pos[eng.prop_indices()[k]] = (int)k;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) {
        bool any = false;
        for (const auto& [p_idx, a_idx] : eng.eq_props(i, j))
          if (rep[a_idx] == 1) {
            awareness[i * na + j][prop_pos[p_idx]] = true;
            any = true;
          }
        if (!any) need_padding = true;
      }
  }

  // pad with a fresh always-true proposition so every awareness set is
  // non-empty; a constant never splits any block
  if (need_padding) {
    std::string pad = "aux";
    while (std::find(props.begin(), props.end(), pad) != props.end()) pad += "_";
    props.push_back(pad);
    for (auto& set : awareness) set.push_back(!set.empty() && false);
    for (int i = 0; i < na * na; ++i) awareness[i].back() = true;
  }

  Model::Raw raw;
  raw.agents = eng.agents();
  raw.props = props;
  for (int k = 0; k < n; ++k) raw.worlds.push_back("w" + std::to_string(k + 1));
  for (int k = 0; k < n; ++k) {
    std::vector<bool> row;
    for (int p : eng.prop_indices()) row.push_back(atoms[members[k]][p] == 1);
    if (need_padding) row.push_back(true);
    raw.valuation.push_back(std::move(row));
  }
  raw.edges.resize(na);
  raw.close_equivalence.assign(na, true);
  for (int j = 0; j < na; ++j) {
    UnionFind uf(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && eng.rel_l(atoms[members[x]], atoms[members[y]], j)) uf.unite(x, y);
    for (int x = 0; x < n; ++x)
      if (uf.find(x) != x) raw.edges[j].emplace_back(uf.find(x), x);
  }
  raw.awareness = std::move(awareness);
  return Model::validate(std::move(raw));
}

std::vector<AgentId> sorted_agents(const std::set<AgentId>& agents) {
  return {agents.begin(), agents.end()};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Atom> build_atoms(const Formula& f, const DecideOptions& opts) {
  Engine eng(f, opts);
  std::vector<Atom> out;
  for (const Assignment& a : eng.enumerate()) {
    Atom atom;
    for (std::size_t t = 0; t < eng.base().size(); ++t)
      atom.members.insert(a[t] == 1 ? eng.base()[t] : Not(eng.base()[t]));
    out.push_back(std::move(atom));
  }
  return out;
}

SatResult satisfiable(const Formula& f, const DecideOptions& opts) {
  Engine eng(f, opts);
  SatResult result;
  result.closure_size = eng.closure_size();

  std::vector<Assignment> atoms = eng.enumerate();
  result.atom_count = atoms.size();

  SRef goal = eng.sref(f);

  // group by awareness profile
  std::map<std::vector<std::int8_t>, std::vector<int>> groups;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    std::vector<std::int8_t> key;
    for (int t : eng.aware_atomics()) key.push_back(atoms[k][t]);
    groups[std::move(key)].push_back((int)k);
  }

  bool any_survivor = false;
  for (auto& [key, members] : groups) {
    bool has_goal = false;
    for (int g : members) has_goal = has_goal || eng.sval(atoms[g], goal);
    if (!has_goal) continue;

    std::vector<int> alive = prune_group(eng, atoms, members);
    std::vector<int> goal_atoms;
    for (int g : alive)
      if (eng.sval(atoms[g], goal)) goal_atoms.push_back(g);
    if (goal_atoms.empty()) continue;
    any_survivor = true;

    Model candidate = extract_model(eng, atoms, alive);
    for (int g : goal_atoms) {
      int pos = (int)(std::find(alive.begin(), alive.end(), g) - alive.begin());
      WorldId w = candidate.worlds()[pos];
      try {
        if (satisfies(candidate, w, f)) {
          result.satisfiable = true;
          result.certified = true;
          result.witness = std::move(candidate);
          result.witness_world = w;
          return result;
        }
      } catch (const ModelError&) {
        break;  // formula out of scope for the extracted model; fall through
      }
    }
  }

  if (!any_survivor) {
    result.satisfiable = false;
    return result;
  }

  // Survivors exist but none of the extracted witnesses checked out; fall
  // back to exhaustive search before conceding an uncertified verdict.
  if (opts.use_fallback) {
    int max_props = (int)atoms_of(f).size() + 1;
    if (auto found = bounded_search(f, opts.fallback_worlds, max_props, opts.agents)) {
      result.satisfiable = true;
      result.certified = true;
      result.witness = std::move(found->first);
      result.witness_world = found->second;
      return result;
    }
  }
  result.satisfiable = true;
  result.certified = false;
  return result;
}

ValidityResult valid(const Formula& f, const DecideOptions& opts) {
  ValidityResult out;
  out.counterexample = satisfiable(Not(f), opts);
  out.valid = !out.counterexample.satisfiable;
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive small-model search
// ---------------------------------------------------------------------------

namespace {

// Candidate model during enumeration: up to 5 worlds as bitmasks.
struct Candidate {
  int nw = 0;
  int na = 0;
  int np = 0;
  std::vector<std::uint32_t> val;                  // per prop: true-worlds mask
  std::vector<const std::vector<int>*> access;     // per agent: block id per world
  std::vector<int> indist;                         // [pair][world] block key
  std::vector<int> composed;                       // [pair][world] block id
  std::vector<std::uint32_t> aware;                // per pair: prop mask

  std::uint32_t full() const { return (nw == 32) ? ~0u : ((1u << nw) - 1); }

  void derive() {
    indist.assign(na * na * nw, 0);
    composed.assign(na * na * nw, 0);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j) {
        const int pair = i * na + j;
        // indist: group worlds by valuation restricted to aware props
        for (int w = 0; w < nw; ++w) {
          int key = 0;
          for (int p = 0; p < np; ++p)
            if ((aware[pair] >> p) & 1u) key = key * 2 + (int)((val[p] >> w) & 1u);
          indist[pair * nw + w] = key;
        }
        // composed: join with the access partition
        UnionFind uf(nw);
        for (int w = 0; w < nw; ++w)
          for (int v = w + 1; v < nw; ++v) {
            if (indist[pair * nw + w] == indist[pair * nw + v]) uf.unite(w, v);
            if ((*access[j])[w] == (*access[j])[v]) uf.unite(w, v);
          }
        for (int w = 0; w < nw; ++w) composed[pair * nw + w] = uf.find(w);
      }
  }
};

struct FastEval {
  const Candidate* cand = nullptr;
  const std::vector<AgentId>* agents = nullptr;
  const std::vector<PropId>* props = nullptr;

  int agent_idx(const AgentId& a) const {
    return (int)(std::find(agents->begin(), agents->end(), a) - agents->begin());
  }
  int prop_idx(const PropId& p) const {
    return (int)(std::find(props->begin(), props->end(), p) - props->begin());
  }

  std::uint32_t blocks_all(const Formula& body, const std::vector<int>& block_of) const {
    const std::uint32_t inner = eval(body);
    std::uint32_t out = 0;
    for (int w = 0; w < cand->nw; ++w) {
      bool all = true;
      for (int v = 0; v < cand->nw; ++v)
        if (block_of[v] == block_of[w] && !((inner >> v) & 1u)) {
          all = false;
          break;
        }
      if (all) out |= 1u << w;
    }
    return out;
  }

  std::uint32_t eval(const Formula& f) const {
    switch (f.kind()) {
      case Kind::Prop:
        return cand->val[prop_idx(f.prop())];
      case Kind::Not:
        return ~eval(f.lhs()) & cand->full();
      case Kind::And:
        return eval(f.lhs()) & eval(f.rhs());
      case Kind::Or:
        return eval(f.lhs()) | eval(f.rhs());
      case Kind::Imp:
        return (~eval(f.lhs()) | eval(f.rhs())) & cand->full();
      case Kind::Iff:
        return ~(eval(f.lhs()) ^ eval(f.rhs())) & cand->full();
      case Kind::Aware: {
        const int pair = agent_idx(f.viewpoint()) * cand->na + agent_idx(f.subject());
        for (const PropId& p : atoms_of(f.lhs()))
          if (!((cand->aware[pair] >> prop_idx(p)) & 1u)) return 0;
        return cand->full();
      }
      case Kind::ImplicitK: {
        const int j = agent_idx(f.subject());
        return blocks_all(f.lhs(), *cand->access[j]);
      }
      case Kind::EqBox: {
        const int pair = agent_idx(f.viewpoint()) * cand->na + agent_idx(f.subject());
        std::vector<int> ids(cand->indist.begin() + pair * cand->nw,
                             cand->indist.begin() + (pair + 1) * cand->nw);
        return blocks_all(f.lhs(), ids);
      }
      case Kind::CBox: {
        const int pair = agent_idx(f.viewpoint()) * cand->na + agent_idx(f.subject());
        std::vector<int> ids(cand->composed.begin() + pair * cand->nw,
                             cand->composed.begin() + (pair + 1) * cand->nw);
        return blocks_all(f.lhs(), ids);
      }
      case Kind::ExplicitK: {
        const int pair = agent_idx(f.viewpoint()) * cand->na + agent_idx(f.subject());
        for (const PropId& p : atoms_of(f.lhs()))
          if (!((cand->aware[pair] >> prop_idx(p)) & 1u)) return 0;
        std::vector<int> ids(cand->composed.begin() + pair * cand->nw,
                             cand->composed.begin() + (pair + 1) * cand->nw);
        return blocks_all(f.lhs(), ids);
      }
      default:
        throw std::invalid_argument("bounded search requires an update-free formula");
    }
  }
};

// Partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  while (true) {
    out.push_back(a);
    int k = n - 1;
    for (; k > 0; --k) {
      int mx = 0;
      for (int t = 0; t < k; ++t) mx = std::max(mx, a[t]);
      if (a[k] <= mx) {
        ++a[k];
        for (int t = k + 1; t < n; ++t) a[t] = 0;
        break;
      }
      a[k] = 0;
    }
    if (k == 0) break;
  }
  return out;
}

std::vector<std::uint32_t> nonempty_submasks(std::uint32_t mask) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = mask; s; s = (s - 1) & mask) out.push_back(s);
  std::reverse(out.begin(), out.end());
  return out;
}

Model candidate_to_model(const Candidate& cand, const std::vector<AgentId>& agents,
                         const std::vector<PropId>& props) {
  Model::Raw raw;
  raw.agents = agents;
  raw.props = props;
  for (int w = 0; w < cand.nw; ++w) raw.worlds.push_back("w" + std::to_string(w + 1));
  for (int w = 0; w < cand.nw; ++w) {
    std::vector<bool> row(props.size());
    for (int p = 0; p < cand.np; ++p) row[p] = (cand.val[p] >> w) & 1u;
    raw.valuation.push_back(std::move(row));
  }
  raw.edges.resize(agents.size());
  raw.close_equivalence.assign(agents.size(), true);
  for (int a = 0; a < cand.na; ++a) {
    std::vector<int> last(cand.nw, -1);
    for (int w = 0; w < cand.nw; ++w) {
      int b = (*cand.access[a])[w];
      if (last[b] >= 0) raw.edges[a].emplace_back(last[b], w);
      last[b] = w;
    }
  }
  for (int i = 0; i < cand.na; ++i)
    for (int j = 0; j < cand.na; ++j) {
      std::vector<bool> set(props.size(), false);
      for (int p = 0; p < cand.np; ++p) set[p] = (cand.aware[i * cand.na + j] >> p) & 1u;
      raw.awareness.push_back(std::move(set));
    }
  return Model::validate(std::move(raw));
}

}  // namespace

std::optional<std::pair<Model, WorldId>> bounded_search(const Formula& f, int max_worlds,
                                                        int max_props,
                                                        const std::set<AgentId>& agents) {
  if (contains_dynamic(f))
    throw std::invalid_argument("bounded search requires an update-free formula");
  if (agents.empty()) throw std::invalid_argument("empty agent set");
  for (const AgentId& a : agents_of(f))
    if (!agents.count(a))
      throw std::invalid_argument("formula mentions undeclared agent '" + a + "'");
  if (max_worlds < 1 || max_worlds > 16)
    throw std::invalid_argument("world bound must be between 1 and 16");

  const std::vector<AgentId> agent_list = sorted_agents(agents);
  std::vector<PropId> props(atoms_of(f).begin(), atoms_of(f).end());
  for (int k = 1; (int)props.size() < max_props; ++k) {
    std::string fresh = "q" + std::to_string(k);
    if (std::find(props.begin(), props.end(), fresh) == props.end()) props.push_back(fresh);
  }
  const int na = (int)agent_list.size();
  const int np = (int)props.size();
  if (np > 20) throw std::invalid_argument("too many propositions for exhaustive search");

  std::optional<std::pair<Model, WorldId>> found;

  for (int nw = 1; nw <= max_worlds && !found; ++nw) {
    const auto partitions = all_partitions(nw);
    const std::uint32_t all_props = (np == 32) ? ~0u : ((1u << np) - 1);
    const auto own_options = nonempty_submasks(all_props);

    // odometer over the per-agent partition choice
    std::vector<std::size_t> pchoice(na, 0);
    while (!found) {
      Candidate cand;
      cand.nw = nw;
      cand.na = na;
      cand.np = np;
      cand.access.resize(na);
      for (int a = 0; a < na; ++a) cand.access[a] = &partitions[pchoice[a]];

      std::vector<std::uint32_t> aware(na * na, 0);

      auto try_valuations = [&]() -> bool {
        cand.aware = aware;
        const std::uint64_t vmax = 1ull << (static_cast<std::uint64_t>(nw) * np);
        for (std::uint64_t v = 0; v < vmax; ++v) {
          cand.val.assign(np, 0);
          for (int p = 0; p < np; ++p)
            cand.val[p] = (std::uint32_t)((v >> (p * nw)) & ((1u << nw) - 1));
          cand.derive();
          FastEval ev{&cand, &agent_list, &props};
          std::uint32_t sat = ev.eval(f);
          if (sat) {
            int w = 0;
            while (!((sat >> w) & 1u)) ++w;
            found = {candidate_to_model(cand, agent_list, props), "w" + std::to_string(w + 1)};
            return true;
          }
        }
        return false;
      };

      // awareness: own set per viewpoint, then subsets for the other agents
      std::function<bool(int)> visit_awareness = [&](int i) -> bool {
        if (i == na) return try_valuations();
        for (std::uint32_t own : own_options) {
          aware[i * na + i] = own;
          const auto sub_options = nonempty_submasks(own);
          std::vector<int> others;
          for (int j = 0; j < na; ++j)
            if (j != i) others.push_back(j);
          std::function<bool(std::size_t)> visit_subjects = [&](std::size_t k) -> bool {
            if (k == others.size()) return visit_awareness(i + 1);
            for (std::uint32_t sub : sub_options) {
              aware[i * na + others[k]] = sub;
              if (visit_subjects(k + 1)) return true;
            }
            return false;
          };
          if (visit_subjects(0)) return true;
        }
        return false;
      };
      if (visit_awareness(0)) break;

      // advance the odometer
      int a = 0;
      for (; a < na; ++a) {
        if (++pchoice[a] < partitions.size()) break;
        pchoice[a] = 0;
      }
      if (a == na) break;
    }
  }
  return found;
}

}  // namespace alp
