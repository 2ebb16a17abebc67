#pragma once

#include <string>

#include "json.hpp"

#include "hypersg/equilibrium.hpp"
#include "hypersg/model.hpp"
#include "hypersg/robustness.hpp"
#include "hypersg/stability.hpp"

namespace hypersg {

using Json = nlohmann::ordered_json;

/// Game-spec document. Strict: unknown keys are rejected, shapes must match.
Json game_to_json(const SecurityGameSpec& spec);
SecurityGameSpec game_from_json(const Json& j);

SecurityGameSpec load_game_file(const std::string& path);
void save_game_file(const SecurityGameSpec& spec, const std::string& path);

/// Equilibrium result document (schema_version 1).
Json equilibrium_to_json(const EquilibriumResult& res, const std::string& mode);
EquilibriumResult equilibrium_from_json(const SecurityGameSpec& spec, const Json& j);

Json hne_to_json(const HneCertificate& cert);
Json stability_to_json(const StabilityReport& rep);
Json robustness_to_json(const RobustnessReport& rep);

std::string json_to_string(const Json& j);
Json parse_json(const std::string& text);

/// Fixed-format float for CSV cells: round-trippable decimal text.
std::string format_float(double v);

}  // namespace hypersg
