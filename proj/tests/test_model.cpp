#include <functional>
#include <random>

#include "alp/fixtures.hpp"
#include "alp/model.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace alp;

namespace {

std::vector<std::vector<WorldId>> block_names(const Model& m, const Partition& p) {
  return classes(m, p);
}

ModelErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ModelError& e) {
    return e.code();
  }
  FAIL("expected a ModelError");
  return ModelErrorCode::BadFormat;
}

}  // namespace

TEST_CASE("store fixture validates and reproduces the listed partitions") {
  const Model& m = fixture("store").model;
  CHECK(m.num_worlds() == 8);
  CHECK(m.num_agents() == 2);

  auto bb = block_names(m, m.indist("b", "b"));
  CHECK(bb == std::vector<std::vector<WorldId>>{{"w1", "w2"}, {"w3", "w4"}, {"w5", "w6"}, {"w7", "w8"}});
  CHECK(m.indist("b", "a") == m.indist("b", "b"));
  CHECK(m.indist("a", "a").is_identity());
  CHECK(m.indist("a", "b").is_identity());

  auto composed_of = [&](const AgentId& i, const AgentId& j, const WorldId& w) {
    const Partition& p = m.composed(i, j);
    std::vector<WorldId> names;
    for (int v : p.blocks[p.block_of[m.world_index(w)]]) names.push_back(m.worlds()[v]);
    return names;
  };
  CHECK(composed_of("b", "b", "w1") == std::vector<WorldId>{"w1", "w2", "w5", "w6"});
  CHECK(composed_of("b", "a", "w1") == std::vector<WorldId>{"w1", "w2", "w3", "w4"});
  CHECK(composed_of("a", "a", "w1") == std::vector<WorldId>{"w1"});
}

TEST_CASE("smallest model validates") {
  // closure "none" needs the reflexive loop listed
  Model m = Model::from_json_text(R"({
    "agents": ["i"], "props": ["p"],
    "worlds": {"w": {"p": true}},
    "relations": {"i": {"edges": [["w", "w"]], "closure": "none"}},
    "awareness": {"i": {"i": ["p"]}}
  })");
  CHECK(m.num_worlds() == 1);
}

TEST_CASE("strict relation mode demands a literal equivalence relation") {
  auto text = [](const std::string& edges) {
    return R"({
      "agents": ["i"], "props": ["p"],
      "worlds": {"u": {"p": true}, "v": {"p": false}, "x": {"p": false}},
      "relations": {"i": {"edges": )" +
           edges + R"(, "closure": "none"}},
      "awareness": {"i": {"i": ["p"]}}
    })";
  };
  // missing reflexive loops
  CHECK(code_of([&] { Model::from_json_text(text(R"([["u","v"],["v","u"]])")); }) ==
        ModelErrorCode::NotEquivalence);
  // reflexive but asymmetric
  CHECK(code_of([&] {
          Model::from_json_text(text(R"([["u","u"],["v","v"],["x","x"],["u","v"]])"));
        }) == ModelErrorCode::NotEquivalence);
  // reflexive, symmetric, not transitive
  CHECK(code_of([&] {
          Model::from_json_text(
              text(R"([["u","u"],["v","v"],["x","x"],["u","v"],["v","u"],["v","x"],["x","v"]])"));
        }) == ModelErrorCode::NotEquivalence);
  // full equivalence passes
  Model ok = Model::from_json_text(
      text(R"([["u","u"],["v","v"],["x","x"],["u","v"],["v","u"],
               ["v","x"],["x","v"],["u","x"],["x","u"]])"));
  CHECK(ok.access(0).block_count() == 1);
}

TEST_CASE("validation error codes") {
  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],"worlds":{},
            "relations":{},"awareness":{"i":{"i":["p"]}}})");
        }) == ModelErrorCode::EmptyWorlds);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{},"awareness":{"i":{"i":[]}}})");
        }) == ModelErrorCode::EmptyAwareness);

  // subset violation with witness prop in the message
  try {
    Model::from_json_text(R"({"agents":["a","b"],"props":["p","n"],
      "worlds":{"w":{"p":true,"n":false}},
      "relations":{},
      "awareness":{"a":{"a":["p"],"b":["p","n"]},"b":{"a":["p"],"b":["p"]}}})");
    FAIL("expected rejection");
  } catch (const ModelError& e) {
    CHECK(e.code() == ModelErrorCode::AwarenessNotSubset);
    CHECK(std::string(e.what()).find("'n'") != std::string::npos);
  }

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{"z":{"edges":[]}},"awareness":{"i":{"i":["p"]}}})");
        }) == ModelErrorCode::UnknownAgent);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{"i":{"edges":[["w","v"]]}},"awareness":{"i":{"i":["p"]}}})");
        }) == ModelErrorCode::UnknownWorld);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p","q"],
            "worlds":{"w":{"p":true}},
            "relations":{},"awareness":{"i":{"i":["p"]}}})");
        }) == ModelErrorCode::MissingValuation);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["a","b"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{},
            "awareness":{"a":{"a":["p"]},"b":{"a":["p"],"b":["p"]}}})");
        }) == ModelErrorCode::MissingAwareness);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{},"awareness":{"i":{"i":["p"]}},
            "indist":{}})");
        }) == ModelErrorCode::ExplicitIndist);

  CHECK(code_of([] {
          Model::from_json_text(R"({"agents":["i"],"props":["p"],
            "worlds":{"w":{"p":true}},
            "relations":{},"awareness":{"i":{"i":["p"]}},
            "banana":{}})");
        }) == ModelErrorCode::BadFormat);
}

TEST_CASE("classes are ordered by least world name") {
  Model m = Model::from_json_text(R"({
    "agents": ["i"], "props": ["p"],
    "worlds": {"w1": {"p": true}, "w2": {"p": false}},
    "relations": {"i": {"edges": []}},
    "awareness": {"i": {"i": ["p"]}}
  })");
  CHECK(classes(m, m.indist("i", "i")) == std::vector<std::vector<WorldId>>{{"w1"}, {"w2"}});
  CHECK(classes(m, m.composed("i", "i")) == std::vector<std::vector<WorldId>>{{"w1"}, {"w2"}});

  Model one = Model::from_json_text(R"({
    "agents": ["i"], "props": ["p"],
    "worlds": {"w1": {"p": true}, "w2": {"p": true}},
    "relations": {"i": {"edges": []}},
    "awareness": {"i": {"i": ["p"]}}
  })");
  CHECK(classes(one, one.indist("i", "i")) == std::vector<std::vector<WorldId>>{{"w1", "w2"}});
}

TEST_CASE("partition laws on random models") {
  std::mt19937 rng(4242);
  oracle::Sig sig{{"a", "b", "c"}, {"p", "q", "r"}};
  for (int iter = 0; iter < 120; ++iter) {
    Model m = oracle::random_model(rng, sig, 6);
    for (int i = 0; i < m.num_agents(); ++i) {
      for (int j = 0; j < m.num_agents(); ++j) {
        const Partition& own = m.indist(i, i);
        const Partition& ij = m.indist(i, j);
        const Partition& comp = m.composed(i, j);
        const Partition& acc = m.access(j);
        for (int w = 0; w < m.num_worlds(); ++w) {
          for (int v = 0; v < m.num_worlds(); ++v) {
            // own-view blocks refine subject-view blocks
            if (own.same_block(w, v)) CHECK(ij.same_block(w, v));
            // the composed partition coarsens both constituents
            if (ij.same_block(w, v)) CHECK(comp.same_block(w, v));
            if (acc.same_block(w, v)) CHECK(comp.same_block(w, v));
          }
        }
        // agreement with BFS reach sets, in both composition orders
        for (int w = 0; w < m.num_worlds(); ++w) {
          auto reach = oracle::c_reach(m, i, j, w);
          auto swapped = oracle::c_reach_swapped(m, i, j, w);
          CHECK(reach == swapped);
          std::vector<int> blk = comp.blocks[comp.block_of[w]];
          CHECK(reach == blk);
        }
        // separating awareness collapses the composed partition onto access
        if (ij.is_identity()) CHECK(comp == acc);
      }
    }
  }
}

TEST_CASE("derived partitions are pure functions of the inputs") {
  const Model& m = fixture("store").model;
  Model again = Model::from_json_text(m.to_json_text());
  CHECK(again == m);
  for (int i = 0; i < m.num_agents(); ++i)
    for (int j = 0; j < m.num_agents(); ++j) {
      CHECK(again.indist(i, j) == m.indist(i, j));
      CHECK(again.composed(i, j) == m.composed(i, j));
    }
}

TEST_CASE("dot export mentions every world") {
  const Model& m = fixture("store").model;
  std::string dot = to_dot(m, DotPartition::Indist, "b", "b");
  for (const WorldId& w : m.worlds()) CHECK(dot.find('"' + w + '"') != std::string::npos);
  CHECK(dot.find("cluster_") != std::string::npos);
}
