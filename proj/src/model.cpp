#include "alp/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace alp {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ModelErrorCode code) {
  switch (code) {
    case ModelErrorCode::BadFormat: return "bad-format";
    case ModelErrorCode::EmptyWorlds: return "empty-worlds";
    case ModelErrorCode::NotEquivalence: return "not-equivalence";
    case ModelErrorCode::EmptyAwareness: return "empty-awareness";
    case ModelErrorCode::AwarenessNotSubset: return "awareness-not-subset";
    case ModelErrorCode::UnknownAgent: return "unknown-agent";
    case ModelErrorCode::UnknownProp: return "unknown-prop";
    case ModelErrorCode::UnknownWorld: return "unknown-world";
    case ModelErrorCode::MissingValuation: return "missing-valuation";
    case ModelErrorCode::MissingAwareness: return "missing-awareness";
    case ModelErrorCode::ExplicitIndist: return "explicit-indist";
    case ModelErrorCode::DuplicateName: return "duplicate-name";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(ModelErrorCode code, const std::string& detail) {
  throw ModelError(code, std::string(to_string(code)) + ": " + detail);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

Partition partition_of_union_find(UnionFind& uf) {
  std::vector<int> assignment(uf.parent.size());
  for (std::size_t w = 0; w < uf.parent.size(); ++w) assignment[w] = uf.find(static_cast<int>(w));
  return Partition::from_assignment(assignment);
}

// Coarsest partition finer than none: join of two partitions, i.e. connected
// components when blocks of both are merged.
Partition join(const Partition& a, const Partition& b) {
  UnionFind uf(a.size());
  for (const auto& blk : a.blocks)
    for (std::size_t k = 1; k < blk.size(); ++k) uf.unite(blk[0], blk[k]);
  for (const auto& blk : b.blocks)
    for (std::size_t k = 1; k < blk.size(); ++k) uf.unite(blk[0], blk[k]);
  return partition_of_union_find(uf);
}

}  // namespace

Partition Partition::from_assignment(const std::vector<int>& assignment) {
  Partition p;
  p.block_of.assign(assignment.size(), -1);
  std::map<int, int> remap;  // first-seen order by world index
  for (std::size_t w = 0; w < assignment.size(); ++w) {
    auto it = remap.find(assignment[w]);
    int id;
    if (it == remap.end()) {
      id = static_cast<int>(p.blocks.size());
      remap.emplace(assignment[w], id);
      p.blocks.emplace_back();
    } else {
      id = it->second;
    }
    p.block_of[w] = id;
    p.blocks[id].push_back(static_cast<int>(w));
  }
  return p;
}

int Model::agent_index(const AgentId& a) const {
  auto it = agent_idx_.find(a);
  return it == agent_idx_.end() ? -1 : it->second;
}
int Model::prop_index(const PropId& p) const {
  auto it = prop_idx_.find(p);
  return it == prop_idx_.end() ? -1 : it->second;
}
int Model::world_index(const WorldId& w) const {
  auto it = world_idx_.find(w);
  return it == world_idx_.end() ? -1 : it->second;
}
int Model::require_agent(const AgentId& a) const {
  int k = agent_index(a);
  if (k < 0) fail(ModelErrorCode::UnknownAgent, "agent '" + a + "' is not declared");
  return k;
}
int Model::require_prop(const PropId& p) const {
  int k = prop_index(p);
  if (k < 0) fail(ModelErrorCode::UnknownProp, "proposition '" + p + "' is not declared");
  return k;
}
int Model::require_world(const WorldId& w) const {
  int k = world_index(w);
  if (k < 0) fail(ModelErrorCode::UnknownWorld, "world '" + w + "' is not declared");
  return k;
}

Model Model::validate(Raw raw) {
  Model m;
  const int na = static_cast<int>(raw.agents.size());
  const int np = static_cast<int>(raw.props.size());
  const int nw = static_cast<int>(raw.worlds.size());

  if (na == 0) fail(ModelErrorCode::BadFormat, "no agents declared");
  if (nw == 0) fail(ModelErrorCode::EmptyWorlds, "the world set must be non-empty");

  auto index_names = [](const std::vector<std::string>& names, std::map<std::string, int>& idx,
                        const char* what) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (names[k].empty()) fail(ModelErrorCode::BadFormat, std::string(what) + " name is empty");
      if (!idx.emplace(names[k], static_cast<int>(k)).second)
        fail(ModelErrorCode::DuplicateName, std::string(what) + " '" + names[k] + "' declared twice");
    }
  };
  index_names(raw.agents, m.agent_idx_, "agent");
  index_names(raw.props, m.prop_idx_, "proposition");
  index_names(raw.worlds, m.world_idx_, "world");

  if (static_cast<int>(raw.valuation.size()) != nw)
    fail(ModelErrorCode::BadFormat, "valuation rows do not match the world count");
  for (int w = 0; w < nw; ++w)
    if (static_cast<int>(raw.valuation[w].size()) != np)
      fail(ModelErrorCode::MissingValuation,
           "world '" + raw.worlds[w] + "' must assign every declared proposition");

  if (static_cast<int>(raw.edges.size()) != na || static_cast<int>(raw.close_equivalence.size()) != na)
    fail(ModelErrorCode::BadFormat, "relation entries do not match the agent count");

  m.agents_ = std::move(raw.agents);
  m.props_ = std::move(raw.props);
  m.worlds_ = std::move(raw.worlds);
  m.valuation_ = std::move(raw.valuation);

  // Accessibility relations: close or strictly check, then store as partitions.
  m.access_.reserve(na);
  for (int a = 0; a < na; ++a) {
    for (const auto& [x, y] : raw.edges[a]) {
      if (x < 0 || x >= nw || y < 0 || y >= nw)
        fail(ModelErrorCode::UnknownWorld, "relation for agent '" + m.agents_[a] +
                                               "' references an undeclared world");
    }
    if (raw.close_equivalence[a]) {
      UnionFind uf(nw);
      for (const auto& [x, y] : raw.edges[a]) uf.unite(x, y);
      m.access_.push_back(partition_of_union_find(uf));
    } else {
      std::vector<std::vector<bool>> adj(nw, std::vector<bool>(nw, false));
      for (const auto& [x, y] : raw.edges[a]) adj[x][y] = true;
      for (int w = 0; w < nw; ++w)
        if (!adj[w][w])
          fail(ModelErrorCode::NotEquivalence, "relation for agent '" + m.agents_[a] +
                                                   "' is not reflexive at (" + m.worlds_[w] + "," +
                                                   m.worlds_[w] + ")");
      for (int w = 0; w < nw; ++w)
        for (int v = 0; v < nw; ++v)
          if (adj[w][v] && !adj[v][w])
            fail(ModelErrorCode::NotEquivalence, "relation for agent '" + m.agents_[a] +
                                                     "' is not symmetric: (" + m.worlds_[w] + "," +
                                                     m.worlds_[v] + ") lacks its converse");
      for (int u = 0; u < nw; ++u)
        for (int v = 0; v < nw; ++v)
          if (adj[u][v])
            for (int x = 0; x < nw; ++x)
              if (adj[v][x] && !adj[u][x])
                fail(ModelErrorCode::NotEquivalence,
                     "relation for agent '" + m.agents_[a] + "' is not transitive: (" +
                         m.worlds_[u] + "," + m.worlds_[x] + ") is missing");
      UnionFind uf(nw);
      for (const auto& [x, y] : raw.edges[a]) uf.unite(x, y);
      m.access_.push_back(partition_of_union_find(uf));
    }
  }

  // Awareness sets: non-empty and included in the viewpoint's own set.
  if (static_cast<int>(raw.awareness.size()) != na * na)
    fail(ModelErrorCode::MissingAwareness, "awareness sets must cover every (viewpoint, subject) pair");
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      const auto& set = raw.awareness[i * na + j];
      if (static_cast<int>(set.size()) != np)
        fail(ModelErrorCode::BadFormat, "awareness set size mismatch");
      bool any = false;
      for (bool b : set) any = any || b;
      if (!any)
        fail(ModelErrorCode::EmptyAwareness, "awareness set for (" + m.agents_[i] + "," +
                                                 m.agents_[j] + ") must be non-empty");
    }
    const auto& own = raw.awareness[i * na + i];
    for (int j = 0; j < na; ++j) {
      const auto& set = raw.awareness[i * na + j];
      for (int p = 0; p < np; ++p)
        if (set[p] && !own[p])
          fail(ModelErrorCode::AwarenessNotSubset,
               "awareness set for (" + m.agents_[i] + "," + m.agents_[j] + ") contains '" +
                   m.props_[p] + "' which (" + m.agents_[i] + "," + m.agents_[i] + ") lacks");
    }
  }
  m.awareness_ = std::move(raw.awareness);

  // Derived partitions, computed once.
  m.indist_.resize(na * na);
  m.composed_.resize(na * na);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      const auto& set = m.awareness_[i * na + j];
      // Group worlds by valuation restricted to the aware props.
      std::map<std::vector<bool>, int> groups;
      std::vector<int> assignment(nw);
      for (int w = 0; w < nw; ++w) {
        std::vector<bool> key(np, false);
        for (int p = 0; p < np; ++p) key[p] = set[p] && m.valuation_[w][p];
        auto [it, fresh] = groups.emplace(std::move(key), static_cast<int>(groups.size()));
        assignment[w] = it->second;
      }
      m.indist_[i * na + j] = Partition::from_assignment(assignment);
      // An indistinguishability step and an accessibility step both contain
      // the identity, so the transitive closure of their composition is the
      // join of the two partitions.
      m.composed_[i * na + j] = join(m.indist_[i * na + j], m.access_[j]);
    }
  }
  return m;
}

bool operator==(const Model& a, const Model& b) {
  return a.agents_ == b.agents_ && a.props_ == b.props_ && a.worlds_ == b.worlds_ &&
         a.valuation_ == b.valuation_ &&
         std::equal(a.access_.begin(), a.access_.end(), b.access_.begin(), b.access_.end()) &&
         a.awareness_ == b.awareness_;
}

namespace {

const ordered_json& expect_object(const ordered_json& j, const std::string& what) {
  if (!j.is_object()) fail(ModelErrorCode::BadFormat, what + " must be a JSON object");
  return j;
}

std::vector<std::string> read_name_array(const ordered_json& j, const std::string& what) {
  if (!j.is_array()) fail(ModelErrorCode::BadFormat, what + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) fail(ModelErrorCode::BadFormat, what + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

Model Model::from_json_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(ModelErrorCode::BadFormat, std::string("invalid JSON: ") + e.what());
  }
  expect_object(doc, "model file");

  static const char* kIndistKeys[] = {"indist", "indistinguishability", "equiv", "equivalence",
                                      "partitions"};
  for (const auto& [key, value] : doc.items()) {
    if (key == "agents" || key == "props" || key == "worlds" || key == "relations" ||
        key == "awareness")
      continue;
    for (const char* k : kIndistKeys)
      if (key == k)
        fail(ModelErrorCode::ExplicitIndist,
             "indistinguishability relations are derived from the valuation and awareness "
             "sets and cannot be listed in a model file (key '" +
                 key + "')");
    fail(ModelErrorCode::BadFormat, "unknown top-level key '" + key + "'");
  }
  for (const char* k : {"agents", "props", "worlds", "relations", "awareness"})
    if (!doc.contains(k)) fail(ModelErrorCode::BadFormat, std::string("missing '") + k + "' section");

  Raw raw;
  raw.agents = read_name_array(doc["agents"], "'agents'");
  raw.props = read_name_array(doc["props"], "'props'");

  std::map<std::string, int> agent_idx, prop_idx, world_idx;
  for (std::size_t k = 0; k < raw.agents.size(); ++k)
    if (!agent_idx.emplace(raw.agents[k], static_cast<int>(k)).second)
      fail(ModelErrorCode::DuplicateName, "agent '" + raw.agents[k] + "' declared twice");
  for (std::size_t k = 0; k < raw.props.size(); ++k)
    if (!prop_idx.emplace(raw.props[k], static_cast<int>(k)).second)
      fail(ModelErrorCode::DuplicateName, "proposition '" + raw.props[k] + "' declared twice");

  const auto& worlds = expect_object(doc["worlds"], "'worlds'");
  for (const auto& [name, vals] : worlds.items()) {
    if (!world_idx.emplace(name, static_cast<int>(raw.worlds.size())).second)
      fail(ModelErrorCode::DuplicateName, "world '" + name + "' declared twice");
    raw.worlds.push_back(name);
    expect_object(vals, "valuation of world '" + name + "'");
    std::vector<bool> row(raw.props.size(), false);
    std::vector<bool> assigned(raw.props.size(), false);
    for (const auto& [pname, pval] : vals.items()) {
      auto it = prop_idx.find(pname);
      if (it == prop_idx.end())
        fail(ModelErrorCode::UnknownProp,
             "world '" + name + "' assigns undeclared proposition '" + pname + "'");
      if (!pval.is_boolean())
        fail(ModelErrorCode::BadFormat, "valuation of '" + pname + "' at '" + name + "' must be a boolean");
      row[it->second] = pval.get<bool>();
      assigned[it->second] = true;
    }
    for (std::size_t p = 0; p < raw.props.size(); ++p)
      if (!assigned[p])
        fail(ModelErrorCode::MissingValuation,
             "world '" + name + "' does not assign proposition '" + raw.props[p] + "'");
    raw.valuation.push_back(std::move(row));
  }
  if (raw.worlds.empty()) fail(ModelErrorCode::EmptyWorlds, "the world set must be non-empty");

  raw.edges.resize(raw.agents.size());
  raw.close_equivalence.assign(raw.agents.size(), true);
  const auto& relations = expect_object(doc["relations"], "'relations'");
  for (const auto& [aname, rel] : relations.items()) {
    auto it = agent_idx.find(aname);
    if (it == agent_idx.end())
      fail(ModelErrorCode::UnknownAgent, "relation declared for undeclared agent '" + aname + "'");
    expect_object(rel, "relation of agent '" + aname + "'");
    for (const auto& [key, value] : rel.items()) {
      if (key != "edges" && key != "closure")
        fail(ModelErrorCode::BadFormat, "unknown key '" + key + "' in relation of '" + aname + "'");
    }
    if (rel.contains("closure")) {
      const auto& c = rel["closure"];
      if (!c.is_string() || (c != "equivalence" && c != "none"))
        fail(ModelErrorCode::BadFormat, "closure mode must be \"equivalence\" or \"none\"");
      raw.close_equivalence[it->second] = (c == "equivalence");
    }
    if (rel.contains("edges")) {
      if (!rel["edges"].is_array())
        fail(ModelErrorCode::BadFormat, "edges of '" + aname + "' must be an array of pairs");
      for (const auto& e : rel["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
          fail(ModelErrorCode::BadFormat, "edges of '" + aname + "' must be pairs of world names");
        auto wx = world_idx.find(e[0].get<std::string>());
        auto wy = world_idx.find(e[1].get<std::string>());
        if (wx == world_idx.end())
          fail(ModelErrorCode::UnknownWorld, "edge references undeclared world '" +
                                                 e[0].get<std::string>() + "'");
        if (wy == world_idx.end())
          fail(ModelErrorCode::UnknownWorld, "edge references undeclared world '" +
                                                 e[1].get<std::string>() + "'");
        raw.edges[it->second].emplace_back(wx->second, wy->second);
      }
    }
  }

  raw.awareness.assign(raw.agents.size() * raw.agents.size(), {});
  const auto& awareness = expect_object(doc["awareness"], "'awareness'");
  std::vector<bool> seen(raw.agents.size() * raw.agents.size(), false);
  for (const auto& [iname, row] : awareness.items()) {
    auto i = agent_idx.find(iname);
    if (i == agent_idx.end())
      fail(ModelErrorCode::UnknownAgent, "awareness declared for undeclared agent '" + iname + "'");
    expect_object(row, "awareness row of '" + iname + "'");
    for (const auto& [jname, propsj] : row.items()) {
      auto j = agent_idx.find(jname);
      if (j == agent_idx.end())
        fail(ModelErrorCode::UnknownAgent,
             "awareness declared for undeclared agent '" + jname + "'");
      std::vector<bool> set(raw.props.size(), false);
      for (const std::string& p : read_name_array(propsj, "awareness of (" + iname + "," + jname + ")")) {
        auto it = prop_idx.find(p);
        if (it == prop_idx.end())
          fail(ModelErrorCode::UnknownProp, "awareness of (" + iname + "," + jname +
                                                ") lists undeclared proposition '" + p + "'");
        set[it->second] = true;
      }
      raw.awareness[i->second * raw.agents.size() + j->second] = std::move(set);
      seen[i->second * raw.agents.size() + j->second] = true;
    }
  }
  for (std::size_t i = 0; i < raw.agents.size(); ++i)
    for (std::size_t j = 0; j < raw.agents.size(); ++j)
      if (!seen[i * raw.agents.size() + j])
        fail(ModelErrorCode::MissingAwareness, "awareness set for (" + raw.agents[i] + "," +
                                                   raw.agents[j] + ") is missing");

  return validate(std::move(raw));
}

Model Model::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ModelErrorCode::BadFormat, "cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Model::to_json_text() const {
  ordered_json doc;
  doc["agents"] = agents_;
  doc["props"] = props_;
  ordered_json worlds = ordered_json::object();
  for (int w = 0; w < num_worlds(); ++w) {
    ordered_json row = ordered_json::object();
    for (int p = 0; p < num_props(); ++p) row[props_[p]] = static_cast<bool>(valuation_[w][p]);
    worlds[worlds_[w]] = std::move(row);
  }
  doc["worlds"] = std::move(worlds);
  ordered_json rels = ordered_json::object();
  for (int a = 0; a < num_agents(); ++a) {
    ordered_json edges = ordered_json::array();
    for (const auto& blk : access_[a].blocks)
      for (std::size_t k = 1; k < blk.size(); ++k)
        edges.push_back({worlds_[blk[k - 1]], worlds_[blk[k]]});
    rels[agents_[a]] = {{"edges", std::move(edges)}, {"closure", "equivalence"}};
  }
  doc["relations"] = std::move(rels);
  ordered_json aw = ordered_json::object();
  for (int i = 0; i < num_agents(); ++i) {
    ordered_json row = ordered_json::object();
    for (int j = 0; j < num_agents(); ++j) {
      ordered_json set = ordered_json::array();
      for (int p = 0; p < num_props(); ++p)
        if (aware(i, j, p)) set.push_back(props_[p]);
      row[agents_[j]] = std::move(set);
    }
    aw[agents_[i]] = std::move(row);
  }
  doc["awareness"] = std::move(aw);
  return doc.dump(2) + "\n";
}

std::vector<std::vector<WorldId>> classes(const Model& m, const Partition& p) {
  std::vector<std::vector<WorldId>> named;
  named.reserve(p.blocks.size());
  for (const auto& blk : p.blocks) {
    std::vector<WorldId> names;
    names.reserve(blk.size());
    for (int w : blk) names.push_back(m.worlds()[w]);
    std::sort(names.begin(), names.end());
    named.push_back(std::move(names));
  }
  std::sort(named.begin(), named.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return named;
}

std::string to_dot(const Model& m, DotPartition which, const AgentId& viewpoint,
                   const AgentId& subject) {
  std::ostringstream os;
  os << "graph model {\n  node [shape=box, fontname=\"monospace\"];\n";
  auto node_label = [&](int w) {
    std::string label = m.worlds()[w] + "\\n";
    bool first = true;
    for (int p = 0; p < m.num_props(); ++p) {
      if (!first) label += " ";
      first = false;
      if (!m.val(w, p)) label += "!";
      label += m.props()[p];
    }
    return label;
  };

  if (which != DotPartition::None) {
    const Partition& part = which == DotPartition::Indist ? m.indist(viewpoint, subject)
                                                          : m.composed(viewpoint, subject);
    const char* tag = which == DotPartition::Indist ? "indist" : "composed";
    for (std::size_t b = 0; b < part.blocks.size(); ++b) {
      os << "  subgraph cluster_" << b << " {\n    style=filled; color=lightgray;\n    label=\""
         << tag << "[" << viewpoint << "," << subject << "]\";\n";
      for (int w : part.blocks[b])
        os << "    \"" << m.worlds()[w] << "\" [label=\"" << node_label(w) << "\"];\n";
      os << "  }\n";
    }
  } else {
    for (int w = 0; w < m.num_worlds(); ++w)
      os << "  \"" << m.worlds()[w] << "\" [label=\"" << node_label(w) << "\"];\n";
  }

  for (int a = 0; a < m.num_agents(); ++a) {
    for (const auto& blk : m.access(a).blocks) {
      for (std::size_t x = 0; x < blk.size(); ++x)
        for (std::size_t y = x + 1; y < blk.size(); ++y)
          os << "  \"" << m.worlds()[blk[x]] << "\" -- \"" << m.worlds()[blk[y]] << "\" [label=\""
             << m.agents()[a] << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace alp
