#include "srnsens/model/builtin.hpp"

#include <fstream>
#include <sstream>

#include "srnsens/embedded_models.hpp"
#include "srnsens/error.hpp"
#include "srnsens/model/parser.hpp"

namespace srn {

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& m : detail::kEmbeddedModels) names.emplace_back(m.name);
  return names;
}

std::string_view builtin_model_source(std::string_view name) {
  for (const auto& m : detail::kEmbeddedModels)
    if (m.name == name) return m.text;
  std::string known;
  for (const auto& m : detail::kEmbeddedModels) known += (known.empty() ? "" : ", ") + std::string(m.name);
  throw ValidationError("unknown built-in model '" + std::string(name) + "' (available: " + known + ")");
}

ReactionNetwork load_builtin(std::string_view name) { return parse_model(builtin_model_source(name)); }

ReactionNetwork load_model(std::string_view spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.substr(0, prefix.size()) == prefix) return load_builtin(spec.substr(prefix.size()));
  std::ifstream in{std::string(spec)};
  if (!in) throw ValidationError("cannot open model file '" + std::string(spec) + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

}  // namespace srn
