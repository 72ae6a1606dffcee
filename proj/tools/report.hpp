#pragma once

#include <string>

#include <json.hpp>

#include "hrmod/elliptope.hpp"
#include "hrmod/independence.hpp"

namespace hrmod::cli {

inline constexpr const char* kVersion = "hrmod 0.1.0";

nlohmann::json to_json(const ModularityReport& r);
nlohmann::json to_json(const CIVerdict& v);
nlohmann::json to_json(const MarkovGraph& g);
nlohmann::json to_json(const GlobalMarkovReport& r);
nlohmann::json to_json(const ElliptopeClassification& c);

/// JSON number, or null for NaN / infinity (JSON has no encoding for them).
nlohmann::json number_or_null(double x);

/// Checks the common report envelope and that every verdict-like field uses
/// the fixed vocabulary. Returns an empty string when valid, else the first
/// problem found.
std::string check_report_schema(const nlohmann::json& report);

}  // namespace hrmod::cli
