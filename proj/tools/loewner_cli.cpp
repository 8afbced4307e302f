// Command-line driver. Each verb exercises one stage of the pipeline --
// family maps, s-conformal measures, Herglotz boundary data, exterior
// Riemann maps, flow integration, conformal-radius traces, and the named
// verification suites -- and writes JSON/CSV artifacts that embed the
// resolved configuration together with a machine-readable pass/fail
// report. Identical configuration and seed produce byte-identical
// artifacts. Exit code: 0 when every check passes, 1 on a failed check,
// 2 on configuration or runtime errors.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loewner/circlemap.hpp"
#include "loewner/confmap.hpp"
#include "loewner/flow.hpp"
#include "loewner/germ.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/measures.hpp"
#include "loewner/radius.hpp"
#include "loewner/serialize.hpp"
#include "loewner/verify.hpp"

namespace {

using namespace loewner;
using nlohmann::json;

struct RunConfig {
  int N = 1024;
  std::uint64_t seed = 20260824;
  std::string alphaChoice = "golden";
  std::string family = "moebius";
  double a = 0.3;
  double b = 0.2;
  std::vector<double> coeffs;  // flat re,im pairs c_1, c_2, ...
  double s = 2.0;
  double t = -1.0;   // germ-state time for the moebius_germ family
  double tEnd = 0.1; // Euler horizon
  double dt = 1e-3;  // Euler step and derivative step
  double rho = 0.9;  // hull parameter in (0,1); the invariant curve sits at 1/rho
  std::string shape = "ellipse";
  double circleRadius = 2.0;
  std::vector<double> axes{2.0, 1.0};
  double tCenter = -1.0;
  int steps = 5;
  int runs = 1;
  std::string outDir = "out";
};

double resolveAlpha(const std::string& choice) {
  if (choice == "golden") return goldenMean();
  if (choice == "silver") return silverMean();
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(choice, &used);
    if (used != choice.size()) throw std::invalid_argument(choice);
  } catch (const std::exception&) {
    throw std::invalid_argument("--alpha must be golden, silver, or a decimal number, got '" +
                                choice + "'");
  }
  if (!isAdmissibleRotation(value))
    throw std::invalid_argument("alpha " + formatNumber(value) +
                                " fails the continued-fraction admissibility check");
  return value;
}

CVector coeffVector(const std::vector<double>& flat) {
  CVector c(static_cast<int>(flat.size()) / 2);
  for (int k = 0; k < c.size(); ++k) c[k] = Complex(flat[2 * k], flat[2 * k + 1]);
  return c;
}

void validateConfig(const RunConfig& rc) {
  if (rc.N < 64 || (rc.N & (rc.N - 1)) != 0)
    throw std::invalid_argument("--N must be a power of two, at least 64");
  if (!(rc.dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  if (!(rc.tEnd > 0.0)) throw std::invalid_argument("--t-end must be positive");
  if (rc.steps < 3) throw std::invalid_argument("--steps must be at least 3");
  if (rc.runs < 1) throw std::invalid_argument("--runs must be at least 1");
  if (rc.family != "rotation" && rc.family != "moebius" && rc.family != "fourier" &&
      rc.family != "moebius_germ")
    throw std::invalid_argument(
        "--family must be rotation, moebius, fourier, or moebius_germ");
  if (rc.coeffs.size() % 2 != 0)
    throw std::invalid_argument("--coeffs wants re,im pairs");
  if (rc.axes.size() != 2 || !(rc.axes[0] > 0.0) || !(rc.axes[1] > 0.0))
    throw std::invalid_argument("--axes wants two positive semi-axes a,b");
  if (rc.shape != "circle" && rc.shape != "ellipse" && rc.shape != "hull")
    throw std::invalid_argument("--shape must be circle, ellipse, or hull");
  if (!(rc.rho > 0.0 && rc.rho < 1.0))
    throw std::invalid_argument("--rho must lie in (0,1); the hull curve sits at 1/rho");
  if (!(rc.circleRadius > 0.0)) throw std::invalid_argument("--radius must be positive");
  resolveAlpha(rc.alphaChoice);
}

json configJson(const RunConfig& rc) {
  json j;
  j["N"] = rc.N;
  j["seed"] = rc.seed;
  j["alpha"] = rc.alphaChoice;
  j["alpha_value"] = resolveAlpha(rc.alphaChoice);
  j["family"] = rc.family;
  j["a"] = rc.a;
  j["b"] = rc.b;
  j["coeffs"] = rc.coeffs;
  j["s"] = rc.s;
  j["t"] = rc.t;
  j["t_end"] = rc.tEnd;
  j["dt"] = rc.dt;
  j["rho"] = rc.rho;
  j["shape"] = rc.shape;
  j["radius"] = rc.circleRadius;
  j["axes"] = rc.axes;
  j["t_center"] = rc.tCenter;
  j["steps"] = rc.steps;
  j["runs"] = rc.runs;
  j["out"] = rc.outDir;
  return j;
}

VerifyConfig toVerifyConfig(const RunConfig& rc) {
  VerifyConfig vc;
  vc.gridSize = rc.N;
  vc.seed = rc.seed;
  vc.alpha = resolveAlpha(rc.alphaChoice);
  vc.family = rc.family;
  vc.moebiusA = rc.a;
  vc.germB = rc.b;
  vc.fourierCoeffs = coeffVector(rc.coeffs);
  return vc;
}

/// The working map of the configured family; for the germ family this is the
/// evolved state at --t rather than the suite-pinned t = -1.
CircleMap buildMap(const RunConfig& rc) {
  if (rc.family == "moebius_germ") {
    PhiExactOptions opt;
    opt.gridSize = rc.N;
    return germFlowState(Germ::moebius(resolveAlpha(rc.alphaChoice), rc.b), rc.t, opt).map;
  }
  return familyMap(toVerifyConfig(rc), rc.N);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

double supCircleGap(const CircleMap& f, const CircleMap& g, int m) {
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / m);
    worst = std::max(worst, std::abs(f.eval(xi) - g.eval(xi)));
  }
  return worst;
}

void printReport(const CheckReport& r) {
  for (const CheckItem& item : r.items)
    std::printf("  [%s] %s: %s (%s %s)\n", item.pass ? "PASS" : "FAIL",
                item.name.c_str(), formatNumber(item.value).c_str(),
                item.below ? "<" : ">", formatNumber(item.bound).c_str());
  if (!r.pass())
    for (const auto& [key, value] : r.parameters)
      std::printf("    %s = %s\n", key.c_str(), value.c_str());
  std::printf("%s: %s (%.2f s)\n", r.id.c_str(), r.pass() ? "PASS" : "FAIL", r.seconds);
}

void writeArtifact(const RunConfig& rc, const std::string& name, json body) {
  body["config"] = configJson(rc);
  writeTextFile(rc.outDir + "/" + name, body.dump(2) + "\n");
}

void familyParams(CheckReport& r, const RunConfig& rc) {
  r.param("alpha", formatNumber(resolveAlpha(rc.alphaChoice)));
  r.param("grid_size", std::to_string(rc.N));
  r.param("seed", std::to_string(rc.seed));
  r.param("family", rc.family);
  if (rc.family == "moebius") r.param("a", formatNumber(rc.a));
  if (rc.family == "moebius_germ") {
    r.param("b", formatNumber(rc.b));
    r.param("t", formatNumber(rc.t));
  }
}

/// Validation items shared by every verb that constructs the family map:
/// the samples must sit on the unit circle, and an attached linearizer must
/// actually conjugate the rotation to the map.
void mapQualityItems(CheckReport& r, const CircleMap& g) {
  double circle = 0.0;
  const CVector dense = g.series().samplesOnCircle(2 * g.gridSize());
  for (int j = 0; j < dense.size(); ++j)
    circle = std::max(circle, std::abs(std::abs(dense[j]) - 1.0));
  r.add("unit circle residual", circle, 1e-9);
  if (g.linearizer()) {
    const Complex lambda = std::polar(1.0, kTwoPi * g.rotationNumber());
    double defect = 0.0;
    for (int j = 0; j < g.gridSize(); ++j) {
      const Complex w = std::polar(1.0, kTwoPi * j / g.gridSize());
      defect = std::max(defect, std::abs(g.eval(g.linearizer()->eval(w)) -
                                         g.linearizer()->eval(lambda * w)));
    }
    r.add("linearizer conjugacy defect", defect, 1e-8);
  }
}

// ---------------------------------------------------------------------------

int cmdDumpConfig(const RunConfig& rc) {
  const std::string text = configJson(rc).dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  writeTextFile(rc.outDir + "/config.json", text);
  return 0;
}

int cmdBuildMap(const RunConfig& rc) {
  CheckReport r;
  r.id = "build-map";
  r.title = "family map construction";
  familyParams(r, rc);
  const Stopwatch watch;
  const CircleMap g = buildMap(rc);
  r.param("rotation_number", formatNumber(g.rotationNumber()));
  mapQualityItems(r, g);
  r.seconds = watch.seconds();
  writeArtifact(rc, "map.json", json{{"report", toJson(r)}, {"map", toJson(g)}});
  printReport(r);
  return r.pass() ? 0 : 1;
}

int cmdMeasure(const RunConfig& rc) {
  CheckReport r;
  r.id = "measure";
  r.title = "s-conformal measure of the family map";
  familyParams(r, rc);
  const Stopwatch watch;
  r.param("s", formatNumber(rc.s));
  const CircleMap g = buildMap(rc);
  const SolveResult sol = conformalMeasureSolve(g, rc.s);
  r.param("route", sol.route == SolveResult::Route::Linearizer ? "linearizer" : "birkhoff");
  r.add("solver residual", sol.residual, 1e-8);
  r.add("total mass gap", std::abs(sol.measure.totalMass() - 1.0), 1e-10);
  const ConformalReport mc = verifyConformal(sol.measure, g, rc.s, 100, rc.seed);
  r.add("defining identity over random arcs", mc.maxDiscrepancy, 1e-8);
  if (g.linearizer()) {
    const CircleMeasure oracle = conformalMeasureOracle(g, rc.s);
    double gap = 0.0;
    for (int j = 0; j < 2 * rc.N; ++j) {
      const double theta = kTwoPi * j / (2 * rc.N);
      gap = std::max(gap, std::abs(sol.measure.densitySeries().eval(theta) -
                                   oracle.densitySeries().eval(theta)));
    }
    r.add("sup density gap to closed form", gap, 1e-8);
  }
  r.seconds = watch.seconds();
  writeArtifact(rc, "measure.json",
                json{{"report", toJson(r)}, {"measure", toJson(sol.measure)}});
  std::vector<std::vector<double>> rows;
  rows.reserve(rc.N);
  for (int j = 0; j < rc.N; ++j)
    rows.push_back({kTwoPi * j / rc.N, sol.measure.densitySamples()[j]});
  writeTextFile(rc.outDir + "/measure.csv", csvTable({"theta", "density"}, rows));
  printReport(r);
  return r.pass() ? 0 : 1;
}

int cmdHerglotz(const RunConfig& rc) {
  CheckReport r;
  r.id = "herglotz";
  r.title = "Herglotz transform of the s-conformal measure";
  familyParams(r, rc);
  const Stopwatch watch;
  r.param("s", formatNumber(rc.s));
  const CircleMap g = buildMap(rc);
  const SolveResult sol = conformalMeasureSolve(g, rc.s);
  const HerglotzField H(sol.measure);
  double minRe = 1e300;
  for (double rho : {1.001, 1.01, 1.1, 2.0, 10.0, 100.0})
    for (int j = 0; j < 256; ++j)
      minRe = std::min(minRe, H.eval(std::polar(rho, kTwoPi * j / 256)).real());
  r.add("min Re H on exterior samples", minRe, 0.0, /*below=*/false);
  r.add("mass gap at infinity", std::abs(sol.measure.totalMass() - 1.0), 1e-6);
  const auto bv = H.boundaryValues({1e-3, 5e-4}, rc.N);
  int flagged = 0;
  for (std::uint8_t f : bv.flagged) flagged += f;
  r.add("flagged boundary fraction", static_cast<double>(flagged) / rc.N, 0.01);
  r.seconds = watch.seconds();
  writeArtifact(rc, "herglotz.json", json{{"report", toJson(r)}});
  std::vector<std::vector<double>> rows;
  rows.reserve(rc.N);
  for (int j = 0; j < rc.N; ++j)
    rows.push_back({bv.theta[j], bv.P[j], bv.Q[j], static_cast<double>(bv.flagged[j])});
  writeTextFile(rc.outDir + "/herglotz.csv",
                csvTable({"theta", "P", "Q", "flagged"}, rows));
  printReport(r);
  return r.pass() ? 0 : 1;
}

int cmdMapExterior(const RunConfig& rc) {
  CheckReport r;
  r.id = "map-exterior";
  r.title = "exterior Riemann map and logarithmic capacity";
  familyParams(r, rc);
  const Stopwatch watch;
  r.param("shape", rc.shape);
  JordanCurveSamples curve;
  double expected = 0.0;
  bool haveOracle = false;
  if (rc.shape == "circle") {
    r.param("radius", formatNumber(rc.circleRadius));
    curve = JordanCurveSamples::circle(rc.circleRadius, 0.0, rc.N);
    expected = std::log(rc.circleRadius);
    haveOracle = true;
  } else if (rc.shape == "ellipse") {
    r.param("axes", formatNumber(rc.axes[0]) + "," + formatNumber(rc.axes[1]));
    curve = JordanCurveSamples::ellipse(rc.axes[0], rc.axes[1], rc.N);
    expected = std::log(0.5 * (rc.axes[0] + rc.axes[1]));
    haveOracle = true;
  } else {
    r.param("rho", formatNumber(rc.rho));
    const CircleMap g = buildMap(rc);
    if (!g.linearizer())
      throw std::invalid_argument("hull shape needs a linearizable family");
    curve = hullBoundaryFromInvariantCurve(g, rc.rho);
  }
  const ExteriorMap ext = exteriorMap(curve);
  r.param("capacity", formatNumber(ext.capacity()));
  r.param("iterations", std::to_string(ext.iterations()));
  r.add("converged", ext.converged() ? 1.0 : 0.0, 0.5, /*below=*/false);
  r.add("boundary correspondence residual", ext.boundaryResidual(), 1e-8);
  r.add("analyticity residual", ext.analyticityResidual(), 1e-8);
  if (haveOracle)
    r.add("capacity error vs closed form", std::abs(ext.capacity() - expected), 1e-8);
  r.seconds = watch.seconds();
  writeArtifact(rc, "exterior.json",
                json{{"report", toJson(r)}, {"capacity", ext.capacity()}});
  std::vector<std::vector<double>> rows;
  rows.reserve(rc.N);
  for (int j = 0; j < rc.N; ++j) {
    const double theta = kTwoPi * j / rc.N;
    const Complex w = ext.phi(std::polar(1.0, theta));
    rows.push_back({theta, ext.correspondence().lift(theta), w.real(), w.imag()});
  }
  writeTextFile(rc.outDir + "/exterior.csv",
                csvTable({"theta", "sigma_angle", "boundary_x", "boundary_y"}, rows));
  printReport(r);
  return r.pass() ? 0 : 1;
}

int cmdFlow(const RunConfig& rc) {
  CheckReport r;
  r.id = "flow";
  r.title = "explicit Euler integration of the evolution";
  familyParams(r, rc);
  const Stopwatch watch;
  r.param("t_end", formatNumber(rc.tEnd));
  r.param("dt", formatNumber(rc.dt));
  const CircleMap g0 = buildMap(rc);
  const FlowOptions options;
  const FlowTrajectory traj = integrateFlow(g0, rc.tEnd, rc.dt, options);
  r.param("steps", std::to_string(traj.steps.size()));
  std::string lines;
  double worstFit = 0.0, worstMeasure = 0.0;
  for (const FlowStepInfo& info : traj.steps) {
    worstFit = std::max(worstFit, info.postFitResidual);
    worstMeasure = std::max(worstMeasure, info.measureResidual);
    json line;
    line["t"] = info.time;
    // Hull capacity equals time along this parametrization of the flow;
    // Euler states carry no hulls of their own.
    line["capacity"] = info.time;
    line["fourier_distance_to_rotation"] = info.fourierDistanceToRotation;
    line["pre_projection_residual"] = info.preProjectionResidual;
    line["post_fit_residual"] = info.postFitResidual;
    line["measure_residual"] = info.measureResidual;
    line["rotation_mismatch"] = info.rotationMismatch;
    lines += line.dump() + "\n";
  }
  writeTextFile(rc.outDir + "/trajectory.jsonl", lines);
  r.add("max post-fit circle residual", worstFit, options.rejectResidual);
  r.add("max measure residual", worstMeasure, options.measure.tol);
  if (g0.linearizer()) {
    try {
      const FlowState exact = phiExact(g0, rc.tEnd);
      // First-order scheme: the endpoint gap scales like C dt with C ~ 0.1
      // for the desk-scale families, so one dt is a comfortable yet honest
      // bound.
      r.add("endpoint gap to exact flow", supCircleGap(traj.terminal.map, exact.map, 512),
            std::max(rc.dt, 1e-8));
    } catch (const std::exception& e) {
      r.param("exact endpoint comparison skipped", e.what());
    }
  }
  r.seconds = watch.seconds();
  writeArtifact(rc, "flow.json",
                json{{"report", toJson(r)}, {"terminal_map", toJson(traj.terminal.map)}});
  printReport(r);
  return r.pass() ? 0 : 1;
}

int cmdVerify(const RunConfig& rc, const std::vector<std::string>& ids) {
  bool all = false;
  std::vector<std::pair<std::string, SuiteRunner>> selected;
  for (const std::string& id : ids) {
    if (id == "all" || id == "battery") {
      all = true;
      continue;
    }
    std::string canonical;
    SuiteRunner runner = findSuite(id, &canonical);
    if (runner == nullptr) {
      std::string known;
      for (const std::string& k : suiteIds()) known += " " + k;
      throw std::invalid_argument("unknown verify id '" + id + "'; known suites:" + known +
                                  " (aliases T1.1 T1.2 T1.3 T1.5 P5.1 T8.3 Fatou Poltoratski, or 'all')");
    }
    if (std::none_of(selected.begin(), selected.end(),
                     [&](const auto& p) { return p.first == canonical; }))
      selected.emplace_back(canonical, runner);
  }
  const VerifyConfig vc = toVerifyConfig(rc);
  auto runOnce = [&]() {
    std::vector<CheckReport> reports;
    if (all) {
      reports = runVerifyBattery(vc);
    } else {
      reports.reserve(selected.size());
      for (const auto& [canonical, runner] : selected) reports.push_back(runner(vc));
    }
    return reports;
  };
  std::vector<CheckReport> reports = runOnce();
  if (rc.runs > 1) {
    const std::string first = canonicalReportString(reports);
    bool identical = true;
    for (int run = 1; run < rc.runs; ++run)
      identical = identical && canonicalReportString(runOnce()) == first;
    CheckReport det;
    det.id = "determinism";
    det.title = "canonical reports identical across repeated runs";
    det.param("runs", std::to_string(rc.runs));
    det.add("identical canonical reports", identical ? 1.0 : 0.0, 0.5, /*below=*/false);
    reports.push_back(det);
  }
  json summary = json::array();
  bool pass = true;
  for (const CheckReport& report : reports) {
    printReport(report);
    writeArtifact(rc, "verify_" + report.id + ".json", json{{"report", toJson(report)}});
    summary.push_back(toJson(report));
    pass = pass && report.pass();
  }
  writeArtifact(rc, "verify_summary.json", json{{"reports", summary}});
  std::printf("verify: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int cmdRadius(const RunConfig& rc) {
  CheckReport r;
  r.id = "radius";
  r.title = "conformal radius trace and boundary identities";
  familyParams(r, rc);
  const Stopwatch watch;
  r.param("t_center", formatNumber(rc.tCenter));
  r.param("dt", formatNumber(rc.dt));
  r.param("steps", std::to_string(rc.steps));
  if (rc.family != "moebius_germ" && rc.family != "rotation")
    throw std::invalid_argument("radius needs a germ family: moebius_germ or rotation");
  const double alpha = resolveAlpha(rc.alphaChoice);
  const Germ germ = rc.family == "rotation" ? Germ::linear(alpha)
                                            : Germ::moebius(alpha, rc.b);
  std::vector<double> times(rc.steps);
  for (int i = 0; i < rc.steps; ++i)
    times[i] = rc.tCenter + rc.dt * (i - 0.5 * (rc.steps - 1));
  const RadiusTrace trace = radiusTrace(germ, times, rc.N);
  const RadiusIdentityReport identities = verifyRadiusIdentities(trace);
  r.param("siegel_radius_bound", formatNumber(trace.siegelRadius));
  double minIncrement = 1e300;
  for (std::size_t i = 1; i < trace.radii.size(); ++i)
    minIncrement = std::min(minIncrement, trace.radii[i] - trace.radii[i - 1]);
  r.add("max real-identity residual", identities.maxRealResidual, 1e-4);
  r.add("max imag-identity residual", identities.maxImagResidual, 1e-4);
  r.add("max integral-identity residual", identities.maxIntegralResidual, 1e-4);
  r.add("min radius increment", minIncrement, 0.0, /*below=*/false);
  // Interior grid times only: the residuals use centered differences, so the
  // end times exist solely to anchor them.
  std::vector<std::vector<double>> rows;
  rows.reserve(identities.times.size());
  for (std::size_t i = 0; i < identities.times.size(); ++i)
    rows.push_back({identities.times[i], trace.radii[i + 1], trace.capacities[i + 1],
                    identities.realResidual[i], identities.imagResidual[i]});
  writeTextFile(rc.outDir + "/radius.csv",
                csvTable({"t", "r", "capacity", "residual_real_identity",
                          "residual_imag_identity"},
                         rows));
  r.seconds = watch.seconds();
  json body;
  body["report"] = toJson(r);
  body["times"] = trace.times;
  body["radii"] = trace.radii;
  body["capacities"] = trace.capacities;
  writeArtifact(rc, "radius_report.json", std::move(body));
  printReport(r);
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"Numerical laboratory for the Loewner evolution of analytic circle maps"};
  app.require_subcommand(1);

  app.add_option("--N", rc.N, "angular grid size, a power of two >= 64")
      ->capture_default_str();
  app.add_option("--seed", rc.seed, "PRNG seed, recorded in every artifact")
      ->capture_default_str();
  app.add_option("--alpha", rc.alphaChoice, "rotation number: golden | silver | <decimal>")
      ->capture_default_str();
  app.add_option("--family", rc.family, "rotation | moebius | fourier | moebius_germ")
      ->capture_default_str();
  app.add_option("--a", rc.a, "moebius conjugacy parameter")->capture_default_str();
  app.add_option("--b", rc.b, "moebius germ parameter")->capture_default_str();
  app.add_option("--coeffs", rc.coeffs,
                 "fourier family half-spectrum c_1,c_2,... as flat re,im pairs")
      ->delimiter(',');
  app.add_option("--s", rc.s, "conformal-measure exponent")->capture_default_str();
  app.add_option("--t", rc.t, "germ-state time for the moebius_germ family")
      ->capture_default_str();
  app.add_option("--t-end", rc.tEnd, "Euler integration horizon")->capture_default_str();
  app.add_option("--dt", rc.dt, "time step for integration and derivatives")
      ->capture_default_str();
  app.add_option("--rho", rc.rho, "hull parameter in (0,1); the curve sits at radius 1/rho")
      ->capture_default_str();
  app.add_option("--shape", rc.shape, "exterior target: circle | ellipse | hull")
      ->capture_default_str();
  app.add_option("--radius", rc.circleRadius, "circle shape radius")->capture_default_str();
  app.add_option("--axes", rc.axes, "ellipse semi-axes as a,b")->delimiter(',');
  app.add_option("--t-center", rc.tCenter, "center of the radius-trace time grid")
      ->capture_default_str();
  app.add_option("--steps", rc.steps, "radius-trace grid points (>= 3)")
      ->capture_default_str();
  app.add_option("--runs", rc.runs, "verify repetitions for the determinism check")
      ->capture_default_str();
  app.add_option("--out", rc.outDir, "artifact directory")->capture_default_str();

  CLI::App* cDump =
      app.add_subcommand("dump-config", "print and write the resolved configuration");
  CLI::App* cBuild =
      app.add_subcommand("build-map", "construct and validate the family map");
  CLI::App* cMeasure =
      app.add_subcommand("measure", "solve for the s-conformal measure");
  CLI::App* cHerglotz =
      app.add_subcommand("herglotz", "boundary values of the Herglotz transform");
  CLI::App* cExterior =
      app.add_subcommand("map-exterior", "exterior Riemann map of a target curve");
  CLI::App* cFlow = app.add_subcommand("flow", "integrate the evolution by explicit Euler");
  CLI::App* cVerify = app.add_subcommand("verify", "run named verification suites");
  CLI::App* cRadius =
      app.add_subcommand("radius", "conformal radius trace with identity residuals");
  std::vector<std::string> verifyIds;
  cVerify->add_option("ids", verifyIds, "suite ids or aliases; 'all' runs the battery")
      ->required();
  for (CLI::App* sub : {cDump, cBuild, cMeasure, cHerglotz, cExterior, cFlow, cVerify, cRadius})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    validateConfig(rc);
    if (cDump->parsed()) return cmdDumpConfig(rc);
    if (cBuild->parsed()) return cmdBuildMap(rc);
    if (cMeasure->parsed()) return cmdMeasure(rc);
    if (cHerglotz->parsed()) return cmdHerglotz(rc);
    if (cExterior->parsed()) return cmdMapExterior(rc);
    if (cFlow->parsed()) return cmdFlow(rc);
    if (cVerify->parsed()) return cmdVerify(rc, verifyIds);
    if (cRadius->parsed()) return cmdRadius(rc);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
