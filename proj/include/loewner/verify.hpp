// Named verification suites over the whole pipeline: each suite runs a
// fixed scenario, measures residuals, and reports them against pinned
// tolerances. The suites are shared by the command-line driver and the
// acceptance battery, so a pass/fail decision is computed in exactly one
// place. Reports separate numerical content (canonical, deterministic)
// from wall-clock timing (informational).
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loewner/circlemap.hpp"

namespace loewner {

struct VerifyConfig {
  int gridSize = 1024;           // power of two
  std::uint64_t seed = 20260824;  // recorded in every report
  double alpha;                   // rotation number (defaults to the golden mean)
  std::string family = "moebius";  // rotation | moebius | fourier | moebius_germ
  double moebiusA = 0.3;          // conjugacy parameter of the moebius family
  double germB = 0.2;             // parameter of the germ family
  CVector fourierCoeffs;          // half-spectrum c_1.. of the fourier family
  VerifyConfig();
};

struct CheckItem {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool below = true;  // pass means value < bound; otherwise value > bound
  bool pass = false;
};

struct CheckReport {
  std::string id;
  std::string title;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<CheckItem> items;
  double seconds = 0.0;  // excluded from the canonical encoding

  bool pass() const;
  CheckItem& add(std::string name, double value, double bound, bool below = true);
  void param(std::string key, std::string value);
};

/// Full report including timing (for artifacts).
nlohmann::json toJson(const CheckReport& report);
/// Canonical numerical content of a batch of reports, timing stripped; two
/// runs with the same configuration must produce identical strings.
std::string canonicalReportString(const std::vector<CheckReport>& reports);

CheckReport verifyMeasureSuite(const VerifyConfig& cfg = {});          // measure-oracle
CheckReport verifyFatouSuite(const VerifyConfig& cfg = {});            // fatou
CheckReport verifyPoltoratskiSuite(const VerifyConfig& cfg = {});      // poltoratski
CheckReport verifyExteriorSuite(const VerifyConfig& cfg = {});         // exterior-map
CheckReport verifyGeneratorSuite(const VerifyConfig& cfg = {});        // generator
CheckReport verifyDrivingMeasureSuite(const VerifyConfig& cfg = {});   // driving-measure
CheckReport verifySemigroupSuite(const VerifyConfig& cfg = {});        // semigroup
CheckReport verifyEulerSuite(const VerifyConfig& cfg = {});            // euler
CheckReport verifyBackwardSuite(const VerifyConfig& cfg = {});         // backward-limit
CheckReport verifyRadiusSuite(const VerifyConfig& cfg = {});           // radius-identities
CheckReport verifyHerglotzSuite(const VerifyConfig& cfg = {});         // herglotz-invariants

/// All suites above, in a fixed order.
std::vector<CheckReport> runVerifyBattery(const VerifyConfig& cfg = {});

/// The configured example family (rotation, moebius conjugacy, trigonometric
/// conjugacy, or the germ state at t = -1), at cfg.gridSize unless overridden.
CircleMap familyMap(const VerifyConfig& cfg, int gridSize = 0);

using SuiteRunner = CheckReport (*)(const VerifyConfig&);

/// Lookup by canonical id or accepted alias (T1.1, T1.2, T1.3, T1.5, P5.1,
/// T8.3, Fatou, Poltoratski; matching is case-insensitive). Returns nullptr
/// for unknown ids; fills canonicalId when given.
SuiteRunner findSuite(const std::string& idOrAlias,
                      std::string* canonicalId = nullptr);
std::vector<std::string> suiteIds();

}  // namespace loewner
