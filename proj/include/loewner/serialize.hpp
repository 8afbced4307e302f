// JSON encodings for measures, conjugacies, and circle maps, plus plain-text
// table output. Maps are stored as grid samples and refit on load, so a
// round trip reproduces the map to the fitting tolerance (~1e-12 on the
// circle) and exactly on its metadata; measure density samples and atoms
// round-trip bit-exactly, with spectral data recomputed to rounding.
// All output is locale-independent and deterministic.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "loewner/circlemap.hpp"
#include "loewner/measures.hpp"

namespace loewner {

nlohmann::json toJson(const CircleMeasure& mu);
CircleMeasure circleMeasureFromJson(const nlohmann::json& j);

nlohmann::json toJson(const ConformalConjugacy& h);
ConformalConjugacy conjugacyFromJson(const nlohmann::json& j);

nlohmann::json toJson(const CircleMap& g);
CircleMap circleMapFromJson(const nlohmann::json& j);

/// CSV with a header row, one row per entry, "%.17g" number formatting,
/// LF line endings. Empty optional cells are written as empty strings.
std::string csvTable(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// "%.17g" rendering of one double (shared by the CSV and JSON-lines paths).
std::string formatNumber(double x);

/// Writes content to path, creating parent directories; throws
/// std::runtime_error on I/O failure.
void writeTextFile(const std::string& path, const std::string& content);

}  // namespace loewner
