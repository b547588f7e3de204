#pragma once

#include <stdexcept>
#include <string>

#include "alp/formula.hpp"
#include "alp/model.hpp"

namespace alp {

// Scope of an awareness update: Targeted changes the single pair (i,j);
// ViewpointWide changes every pair (i,l) sharing viewpoint i.
enum class UpdateMode { Targeted, ViewpointWide };

UpdateMode update_mode_from_string(const std::string& s);  // "targeted" | "viewpoint"

enum class UpdateErrorCode { SubsetViolation, WouldBeEmpty, UnknownAgent, UnknownProp };

class UpdateError : public std::runtime_error {
 public:
  UpdateError(UpdateErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  UpdateErrorCode code() const { return code_; }

 private:
  UpdateErrorCode code_;
};

// "j becomes aware of content in i's viewpoint": the awareness sets gain the
// atoms of content; worlds, relations and valuation are untouched, and the
// derived partitions are recomputed from the new awareness sets.
Model update_plus(const Model& m, const AgentId& i, const AgentId& j, const Formula& content,
                  UpdateMode mode);

// "j becomes unaware of content in i's viewpoint".
Model update_minus(const Model& m, const AgentId& i, const AgentId& j, const Formula& content,
                   UpdateMode mode);

}  // namespace alp
