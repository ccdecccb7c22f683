#pragma once

#include <json.hpp>
#include <string>

#include "lanecurate/config.hpp"

namespace lanecurate::detail {

nlohmann::json config_to_json(const PipelineConfig& c);
/// Throws ParseError naming `where` on unknown keys or bad values.
PipelineConfig config_from_json(const nlohmann::json& j, const std::string& where);

/// Throws ParseError if `j` holds a key outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where);

}  // namespace lanecurate::detail
