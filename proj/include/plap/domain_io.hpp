#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "plap/geometry.hpp"

namespace plap {

/// Parses {"kind": ..., "vertices"|"interval"|"center"+"radius": ...}.
/// Errors are InputError and start with the offending field name.
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& domain);

/// Reads a domain spec file; a missing file raises "domain spec not found".
Domain load_domain(const std::filesystem::path& path);

}  // namespace plap
