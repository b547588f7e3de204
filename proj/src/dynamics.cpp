#include "alp/dynamics.hpp"

namespace alp {

UpdateMode update_mode_from_string(const std::string& s) {
  if (s == "targeted") return UpdateMode::Targeted;
  if (s == "viewpoint") return UpdateMode::ViewpointWide;
  throw std::invalid_argument("unknown update mode '" + s + "' (expected targeted or viewpoint)");
}

namespace {

Model::Raw raw_copy(const Model& m) {
  Model::Raw raw;
  raw.agents = m.agents();
  raw.props = m.props();
  raw.worlds = m.worlds();
  raw.valuation = m.valuation();
  raw.edges.resize(m.num_agents());
  raw.close_equivalence.assign(m.num_agents(), true);
  for (int a = 0; a < m.num_agents(); ++a)
    for (const auto& blk : m.access(a).blocks)
      for (std::size_t k = 1; k < blk.size(); ++k)
        raw.edges[a].emplace_back(blk[k - 1], blk[k]);
  raw.awareness.reserve(m.num_agents() * m.num_agents());
  for (int i = 0; i < m.num_agents(); ++i)
    for (int j = 0; j < m.num_agents(); ++j) raw.awareness.push_back(m.awareness_set(i, j));
  return raw;
}

std::vector<int> content_props(const Model& m, const Formula& content) {
  std::vector<int> out;
  for (const PropId& p : atoms_of(content)) {
    int k = m.prop_index(p);
    if (k < 0)
      throw UpdateError(UpdateErrorCode::UnknownProp,
                        "update content mentions undeclared proposition '" + p + "'");
    out.push_back(k);
  }
  return out;
}

int require_update_agent(const Model& m, const AgentId& a) {
  int k = m.agent_index(a);
  if (k < 0)
    throw UpdateError(UpdateErrorCode::UnknownAgent, "update names undeclared agent '" + a + "'");
  return k;
}

}  // namespace

Model update_plus(const Model& m, const AgentId& i, const AgentId& j, const Formula& content,
                  UpdateMode mode) {
  const int vi = require_update_agent(m, i);
  const int vj = require_update_agent(m, j);
  const std::vector<int> atoms = content_props(m, content);
  const int na = m.num_agents();

  Model::Raw raw = raw_copy(m);
  if (mode == UpdateMode::Targeted) {
    if (vj != vi) {
      for (int p : atoms)
        if (!m.aware(vi, vi, p))
          throw UpdateError(UpdateErrorCode::SubsetViolation,
                            "adding '" + m.props()[p] + "' to (" + i + "," + j +
                                ") would exceed the viewpoint's own awareness set");
    }
    for (int p : atoms) raw.awareness[vi * na + vj][p] = true;
  } else {
    for (int l = 0; l < na; ++l)
      for (int p : atoms) raw.awareness[vi * na + l][p] = true;
  }
  return Model::validate(std::move(raw));
}

Model update_minus(const Model& m, const AgentId& i, const AgentId& j, const Formula& content,
                   UpdateMode mode) {
  const int vi = require_update_agent(m, i);
  const int vj = require_update_agent(m, j);
  const std::vector<int> atoms = content_props(m, content);
  const int na = m.num_agents();
  const int np = m.num_props();

  Model::Raw raw = raw_copy(m);
  auto remove_from = [&](int l) {
    for (int p : atoms) raw.awareness[vi * na + l][p] = false;
  };
  if (mode == UpdateMode::Targeted) {
    remove_from(vj);
  } else {
    for (int l = 0; l < na; ++l) remove_from(l);
  }

  for (int l = 0; l < na; ++l) {
    bool any = false;
    for (int p = 0; p < np; ++p) any = any || raw.awareness[vi * na + l][p];
    if (!any)
      throw UpdateError(UpdateErrorCode::WouldBeEmpty,
                        "removal would leave the awareness set for (" + i + "," +
                            m.agents()[l] + ") empty");
  }
  if (mode == UpdateMode::Targeted && vj == vi) {
    for (int l = 0; l < na; ++l)
      for (int p = 0; p < np; ++p)
        if (raw.awareness[vi * na + l][p] && !raw.awareness[vi * na + vi][p])
          throw UpdateError(UpdateErrorCode::SubsetViolation,
                            "removing '" + m.props()[p] + "' from (" + i + "," + i +
                                ") would strand it in the set for (" + i + "," + m.agents()[l] +
                                ")");
  }
  return Model::validate(std::move(raw));
}

}  // namespace alp
