#pragma once

#include <string>

#include "json.hpp"

namespace schur {

extern const char* kVersion;

/// Pretty rendering of a report: the human view is derived from the same
/// JSON object the machine view serializes.
std::string render_pretty(const nlohmann::ordered_json& j, int indent = 0);

}  // namespace schur
