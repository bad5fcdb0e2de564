#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "srnsens/model/network.hpp"

namespace srn {

/// Names of the bundled models: birth-death, circadian-clock,
/// gene-expression, toggle-switch.
std::vector<std::string> builtin_model_names();

/// Source text of a bundled model; throws ValidationError for unknown names.
std::string_view builtin_model_source(std::string_view name);

ReactionNetwork load_builtin(std::string_view name);

/// Loads "builtin:<name>" or a model file path.
ReactionNetwork load_model(std::string_view spec);

}  // namespace srn
