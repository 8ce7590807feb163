#pragma once

// Versioned JSON documents for reports and evaluation results. Doubles are
// written with 17 significant digits through std::to_chars (locale-free), so
// parsing the output recovers every value bit for bit.

#include <string>

#include <nlohmann/json.hpp>

#include "qdigamma/inequalities.hpp"
#include "qdigamma/limits.hpp"
#include "qdigamma/params.hpp"

namespace qdigamma::json {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

/// 17 significant digits, shortest exponent form; "null" for non-finite values.
std::string format_number(double x);

/// Serialises with format_number for every floating-point value.
/// indent < 0 gives a single line.
std::string dump(const Json& doc, int indent = 2);

Json to_json(const DeformParams& params);
Json to_json(const RatioSpec& spec);
Json to_json(const EvalResult& result);
Json to_json(const GridSpec& grid);
Json to_json(const Threshold& threshold);
Json to_json(const VerificationReport& report);
Json to_json(const limits::ConvergenceReport& report);
Json to_json(const limits::KSubstitutionCheck& check);

/// Wraps a body into a document: {"schema_version", "kind", ...body}.
Json document(const std::string& kind, const Json& body);

}  // namespace qdigamma::json
