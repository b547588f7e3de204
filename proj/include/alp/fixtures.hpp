#pragma once

#include <string>
#include <vector>

#include "alp/model.hpp"

namespace alp {

// Bundled example models, embedded so runs never depend on external files.
struct Fixture {
  std::string name;
  Model model;
  std::string notes;
};

const std::vector<Fixture>& fixtures();

// Throws ModelError (unknown) if no fixture has that name.
const Fixture& fixture(const std::string& name);

bool is_fixture_name(const std::string& name);

}  // namespace alp
