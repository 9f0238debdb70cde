#pragma once

#include <json.hpp>

#include <string>

namespace limitset {

/// JSON serialization with every number printed as a 17-significant-digit
/// decimal, so reports are byte-stable and round-trip doubles exactly.
std::string dump_json17(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace limitset
