#include "alp/fixtures.hpp"

namespace alp {

namespace {

const char* kStoreJson = R"({
  "agents": ["a", "b"],
  "props": ["p_a", "p_b", "n"],
  "worlds": {
    "w1": {"p_a": true,  "p_b": true,  "n": true},
    "w2": {"p_a": true,  "p_b": true,  "n": false},
    "w3": {"p_a": true,  "p_b": false, "n": true},
    "w4": {"p_a": true,  "p_b": false, "n": false},
    "w5": {"p_a": false, "p_b": true,  "n": true},
    "w6": {"p_a": false, "p_b": true,  "n": false},
    "w7": {"p_a": false, "p_b": false, "n": true},
    "w8": {"p_a": false, "p_b": false, "n": false}
  },
  "relations": {
    "a": {"edges": [["w2", "w4"], ["w6", "w8"]], "closure": "equivalence"},
    "b": {"edges": [["w2", "w6"], ["w4", "w8"]], "closure": "equivalence"}
  },
  "awareness": {
    "a": {"a": ["p_a", "p_b", "n"], "b": ["p_a", "p_b", "n"]},
    "b": {"a": ["p_a", "p_b"], "b": ["p_a", "p_b"]}
  }
})";

const char* kStoreAwareJson = R"({
  "agents": ["a", "b"],
  "props": ["p_a", "p_b", "n"],
  "worlds": {
    "w1": {"p_a": true,  "p_b": true,  "n": true},
    "w2": {"p_a": true,  "p_b": true,  "n": false},
    "w3": {"p_a": true,  "p_b": false, "n": true},
    "w4": {"p_a": true,  "p_b": false, "n": false},
    "w5": {"p_a": false, "p_b": true,  "n": true},
    "w6": {"p_a": false, "p_b": true,  "n": false},
    "w7": {"p_a": false, "p_b": false, "n": true},
    "w8": {"p_a": false, "p_b": false, "n": false}
  },
  "relations": {
    "a": {"edges": [["w2", "w4"], ["w6", "w8"]], "closure": "equivalence"},
    "b": {"edges": [["w2", "w6"], ["w4", "w8"]], "closure": "equivalence"}
  },
  "awareness": {
    "a": {"a": ["p_a", "p_b", "n"], "b": ["p_a", "p_b"]},
    "b": {"a": ["p_a", "p_b"], "b": ["p_a", "p_b"]}
  }
})";

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = [] {
    std::vector<Fixture> fs;
    fs.push_back({"store", Model::from_json_text(kStoreJson),
                  "Two store owners weighing an expansion: p_a / p_b say that owner a / b "
                  "expands, n that a cheaper procurement route exists. Owner a attends to "
                  "all three facts and assumes b does too; b attends only to p_a and p_b."});
    fs.push_back({"store-aware", Model::from_json_text(kStoreAwareJson),
                  "Same scenario, except owner a correctly attributes the narrower "
                  "attention set {p_a, p_b} to b."});
    return fs;
  }();
  return all;
}

const Fixture& fixture(const std::string& name) {
  for (const Fixture& f : fixtures())
    if (f.name == name) return f;
  throw ModelError(ModelErrorCode::BadFormat, "unknown fixture '" + name + "'");
}

bool is_fixture_name(const std::string& name) {
  for (const Fixture& f : fixtures())
    if (f.name == name) return true;
  return false;
}

}  // namespace alp
