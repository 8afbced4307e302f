#include "loewner/verify.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "loewner/confmap.hpp"
#include "loewner/flow.hpp"
#include "loewner/germ.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/measures.hpp"
#include "loewner/radius.hpp"
#include "loewner/serialize.hpp"

namespace loewner {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CircleMap canonicalFamily(const VerifyConfig& cfg, int gridSize = 0) {
  const int m = gridSize > 0 ? gridSize : cfg.gridSize;
  if (cfg.family == "rotation") return makeRotation(cfg.alpha);
  if (cfg.family == "moebius")
    return makeLinearizable(
        cfg.alpha, ConformalConjugacy::moebius(Complex(cfg.moebiusA, 0.0)), m);
  if (cfg.family == "fourier") {
    CVector half(cfg.fourierCoeffs.size() + 1);
    half[0] = 0.0;
    for (int k = 0; k < cfg.fourierCoeffs.size(); ++k) half[k + 1] = cfg.fourierCoeffs[k];
    return makeLinearizable(
        cfg.alpha, ConformalConjugacy::fourierPerturbation(TrigSeries(half)), m);
  }
  if (cfg.family == "moebius_germ") {
    PhiExactOptions opt;
    opt.gridSize = m;
    return germFlowState(Germ::moebius(cfg.alpha, cfg.germB), -1.0, opt).map;
  }
  throw std::invalid_argument("unknown family: " + cfg.family);
}

/// Family selector and its parameters, recorded in every report that uses
/// the configured family.
void familyParams(CheckReport& r, const VerifyConfig& cfg) {
  r.param("family", cfg.family);
  if (cfg.family == "moebius") r.param("a", formatNumber(cfg.moebiusA));
  if (cfg.family == "moebius_germ") r.param("b", formatNumber(cfg.germB));
  if (cfg.family == "fourier") {
    std::string cs;
    for (int k = 0; k < cfg.fourierCoeffs.size(); ++k) {
      if (k > 0) cs += ";";
      cs += formatNumber(cfg.fourierCoeffs[k].real()) + "," +
            formatNumber(cfg.fourierCoeffs[k].imag());
    }
    r.param("coeffs", cs);
  }
}

double supCircleGap(const CircleMap& f, const CircleMap& g, int m) {
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / m);
    worst = std::max(worst, std::abs(f.eval(xi) - g.eval(xi)));
  }
  return worst;
}

double leastSquaresSlope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

void commonParams(CheckReport& r, const VerifyConfig& cfg) {
  r.param("alpha", formatNumber(cfg.alpha));
  r.param("grid_size", std::to_string(cfg.gridSize));
  r.param("seed", std::to_string(cfg.seed));
}

/// Positivity of Re H across the sampled exterior and normalization at
/// infinity, appended as two items labelled by the measure's name.
void herglotzInvariantItems(CheckReport& r, const std::string& label,
                            const CircleMeasure& mu) {
  const HerglotzField H(mu);
  double minRe = 1e300;
  for (double rho : {1.001, 1.01, 1.1, 2.0, 10.0, 100.0}) {
    for (int j = 0; j < 64; ++j) {
      minRe = std::min(minRe, H.eval(std::polar(rho, kTwoPi * j / 64)).real());
    }
  }
  r.add("min Re H, " + label, minRe, 0.0, /*below=*/false);
  r.add("mass gap at infinity, " + label, std::abs(mu.totalMass() - 1.0), 1e-6);
}

CircleMeasure mixedAtomMeasure(int gridSize) {
  const RVector f = RVector::Constant(gridSize, 0.5 / kTwoPi);
  return CircleMeasure::fromDensity(f, {Atom{Complex(1.0, 0.0), 0.5}}, false);
}

/// Runs a suite body, converting an escaped exception into a failing item so
/// a battery always completes with an honest report.
template <typename Body>
CheckReport runSuite(std::string id, std::string title, const VerifyConfig& cfg,
                     Body body) {
  CheckReport r;
  r.id = std::move(id);
  r.title = std::move(title);
  commonParams(r, cfg);
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.param("exception", e.what());
    r.add("completed without exception", 0.0, 0.5, /*below=*/false);
  }
  r.seconds = elapsed(t0);
  return r;
}

}  // namespace

VerifyConfig::VerifyConfig() : alpha(goldenMean()) {}

bool CheckReport::pass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& i) { return i.pass; });
}

CheckItem& CheckReport::add(std::string name, double value, double bound,
                            bool below) {
  CheckItem item;
  item.name = std::move(name);
  item.value = value;
  item.bound = bound;
  item.below = below;
  item.pass = below ? value < bound : value > bound;
  items.push_back(std::move(item));
  return items.back();
}

void CheckReport::param(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}

nlohmann::json toJson(const CheckReport& report) {
  nlohmann::json items = nlohmann::json::array();
  for (const CheckItem& i : report.items) {
    items.push_back({{"name", i.name},
                     {"value", i.value},
                     {"bound", i.bound},
                     {"relation", i.below ? "below" : "above"},
                     {"pass", i.pass}});
  }
  nlohmann::json params = nlohmann::json::array();
  for (const auto& [k, v] : report.parameters) params.push_back({k, v});
  return {{"id", report.id},     {"title", report.title}, {"parameters", params},
          {"items", items},      {"pass", report.pass()}, {"seconds", report.seconds}};
}

std::string canonicalReportString(const std::vector<CheckReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const CheckReport& r : reports) {
    nlohmann::json j = toJson(r);
    j.erase("seconds");
    out.push_back(std::move(j));
  }
  return out.dump();
}

// ---------------------------------------------------------------------------

CheckReport verifyMeasureSuite(const VerifyConfig& cfg) {
  return runSuite(
      "measure-oracle", "2-conformal measure solver against the closed form", cfg,
      [&](CheckReport& r) {
        familyParams(r, cfg);
        const CircleMap g = canonicalFamily(cfg);
        const SolveResult sol = conformalMeasureSolve(g, 2.0);
        const CircleMeasure oracle = conformalMeasureOracle(g, 2.0);
        r.param("route", sol.route == SolveResult::Route::Linearizer
                             ? "linearizer"
                             : "birkhoff");
        double supGap = 0.0;
        for (int j = 0; j < 2048; ++j) {
          const double t = kTwoPi * j / 2048;
          supGap = std::max(supGap, std::abs(sol.measure.densitySeries().eval(t) -
                                             oracle.densitySeries().eval(t)));
        }
        r.add("density sup gap to closed form", supGap, 1e-8);
        r.add("solver residual", sol.residual, 1e-8);
        const ConformalReport arcs = verifyConformal(sol.measure, g, 2.0, 100, cfg.seed);
        r.param("arcs", std::to_string(arcs.arcs));
        r.add("defining identity over seeded arcs", arcs.maxDiscrepancy, 1e-8);
      });
}

CheckReport verifyFatouSuite(const VerifyConfig& cfg) {
  return runSuite(
      "fatou", "radial limits recover an analytic density", cfg,
      [&](CheckReport& r) {
        familyParams(r, cfg);
        r.param("extrapolation_eps", "1e-3,5e-4");
        const CircleMeasure mu = conformalMeasureOracle(canonicalFamily(cfg), 2.0);
        const HerglotzField H(mu);
        const auto bv = H.boundaryValues({1e-3, 5e-4}, 2048);
        double sup = 0.0;
        int flagged = 0;
        for (int j = 0; j < 2048; ++j) {
          const double target = kTwoPi * mu.densitySeries().eval(-bv.theta[j]);
          sup = std::max(sup, std::abs(bv.P[j] - target));
          flagged += bv.flagged[j];
        }
        r.add("extrapolated radial-limit sup error", sup, 1e-6);
        r.add("flagged grid points", flagged, 0.5);
      });
}

CheckReport verifyPoltoratskiSuite(const VerifyConfig& cfg) {
  return runSuite(
      "poltoratski", "threshold reconstruction of a singular part", cfg,
      [&](CheckReport& r) {
        r.param("measure", "half Lebesgue plus half point mass at 1");
        r.param("thresholds", "1e2,1e3,1e4");
        const CircleMeasure mu = mixedAtomMeasure(2048);
        const PoltoratskiResult rec = poltoratskiReconstruct(mu, {1e2, 1e3, 1e4});
        const CircleMeasure target = CircleMeasure::fromDensity(
            RVector::Zero(64), {Atom{Complex(1.0, 0.0), 0.5}}, false);
        std::vector<double> massErr, dist;
        int minSupport = 1 << 30;
        for (std::size_t i = 0; i < rec.measures.size(); ++i) {
          massErr.push_back(std::abs(rec.measures[i].totalMass() - 0.5));
          dist.push_back(weakDistance(rec.measures[i], target, 8));
          minSupport = std::min(minSupport, rec.superlevelCounts[i]);
        }
        r.add("singular mass error at finest threshold", massErr.back(), 0.025);
        double worstMassStep = -1e300, worstDistStep = -1e300;
        for (std::size_t i = 1; i < massErr.size(); ++i) {
          worstMassStep = std::max(worstMassStep, massErr[i] - massErr[i - 1]);
          worstDistStep = std::max(worstDistStep, dist[i] - dist[i - 1]);
        }
        r.add("mass error increase across thresholds", worstMassStep, 1e-12);
        r.add("weak distance increase across thresholds", worstDistStep, 1e-12);
        r.add("superlevel support points", minSupport, 3.5, /*below=*/false);
      });
}

CheckReport verifyExteriorSuite(const VerifyConfig& cfg) {
  return runSuite(
      "exterior-map", "exterior maps of canonical hulls", cfg,
      [&](CheckReport& r) {
        const ExteriorMap circle = exteriorMap(JordanCurveSamples::circle(2.0));
        r.add("circle capacity error", std::abs(circle.capacity() - std::log(2.0)),
              1e-8);
        const ExteriorMap ell = exteriorMap(JordanCurveSamples::ellipse(2.0, 1.0));
        r.add("ellipse capacity error", std::abs(ell.capacity() - std::log(1.5)),
              1e-8);
        double worst = 0.0;
        for (double rho : {1.0, 1.4}) {
          for (int j = 0; j < 512; ++j) {
            const Complex z = std::polar(rho, kTwoPi * j / 512);
            worst = std::max(worst, std::abs(ell.phi(z) - (1.5 * z + 0.5 / z)));
          }
        }
        r.add("ellipse exterior-map residual vs closed form", worst, 1e-8);
        r.add("iterations converged", (circle.converged() && ell.converged()) ? 1.0 : 0.0,
              0.5, /*below=*/false);
      });
}

CheckReport verifyGeneratorSuite(const VerifyConfig& cfg) {
  return runSuite(
      "generator", "flow difference quotients against the generator field", cfg,
      [&](CheckReport& r) {
        familyParams(r, cfg);
        r.param("t_values", "1e-2,1e-3,1e-4");
        const CircleMap g = canonicalFamily(cfg);
        const GeneratorField X = generator(g);
        const int m = g.gridSize();
        std::vector<double> logT, logE;
        for (double t : {1e-2, 1e-3, 1e-4}) {
          const FlowState st = phiExact(g, t);
          double err = 0.0;
          for (int j = 0; j < m; ++j) {
            const Complex xi = std::polar(1.0, kTwoPi * j / m);
            const Complex dq = (st.map.eval(xi) - g.eval(xi)) / t;
            err = std::max(err, std::abs(dq - X.circleField()[j]));
          }
          r.param("error at t=" + formatNumber(t), formatNumber(err));
          logT.push_back(std::log(t));
          logE.push_back(std::log(err));
        }
        const double slope = leastSquaresSlope(logT, logE);
        r.add("log-log slope lower bound", slope, 0.8, /*below=*/false);
        r.add("log-log slope upper bound", slope, 1.2);
      });
}

CheckReport verifyDrivingMeasureSuite(const VerifyConfig& cfg) {
  return runSuite(
      "driving-measure", "extracted driving measure against the reflected "
                         "2-conformal measure",
      cfg, [&](CheckReport& r) {
        familyParams(r, cfg);
        r.param("t", "0.1");
        r.param("gaps", "4e-3,2e-3,1e-3");
        const CircleMap g = canonicalFamily(cfg);
        const FlowState base = phiExact(g, 0.1);
        const CircleMeasure oracle =
            conformalMeasureSolve(base.map, 2.0).measure.reflected();
        std::vector<double> dist;
        for (double dt : {4e-3, 2e-3, 1e-3}) {
          const FlowState late = phiExact(g, 0.1 + dt);
          dist.push_back(weakDistance(loewnerMeasure(base, late), oracle, 32));
        }
        r.add("weak distance at gap 1e-3", dist.back(), 1e-3);
        double worstStep = -1e300;
        for (std::size_t i = 1; i < dist.size(); ++i)
          worstStep = std::max(worstStep, dist[i] - dist[i - 1]);
        r.add("weak distance increase under refinement", worstStep, 0.0);
      });
}

CheckReport verifySemigroupSuite(const VerifyConfig& cfg) {
  return runSuite(
      "semigroup", "composition of two half steps against one full step", cfg,
      [&](CheckReport& r) {
        familyParams(r, cfg);
        r.param("times", "0.05+0.05 vs 0.1");
        const CircleMap g = canonicalFamily(cfg);
        const FlowState s1 = phiExact(g, 0.05);
        const FlowState s2 = phiExact(s1.map, 0.05);
        const FlowState sT = phiExact(g, 0.1);
        r.add("sup circle gap", supCircleGap(s2.map, sT.map, 512), 1e-7);
      });
}

CheckReport verifyEulerSuite(const VerifyConfig& cfg) {
  return runSuite(
      "euler", "Euler integration against the exact flow", cfg,
      [&](CheckReport& r) {
        familyParams(r, cfg);
        r.param("t_end", "0.1");
        r.param("dt_values", "1e-3,5e-4,2.5e-4");
        r.param("map_grid", "512");
        const CircleMap g = canonicalFamily(cfg, 512);
        const FlowState exact = phiExact(g, 0.1);
        std::vector<double> gaps;
        for (double dt : {1e-3, 5e-4, 2.5e-4}) {
          const FlowTrajectory traj = integrateFlow(g, 0.1, dt);
          gaps.push_back(supCircleGap(traj.terminal.map, exact.map, 512));
          r.param("gap at dt=" + formatNumber(dt), formatNumber(gaps.back()));
        }
        r.add("endpoint gap at dt=2.5e-4", gaps.back(), 1e-3);
        for (std::size_t i = 1; i < gaps.size(); ++i) {
          const double order = std::log2(gaps[i - 1] / gaps[i]);
          const std::string label = "halving order step " + std::to_string(i);
          r.add(label + " lower bound", order, 0.8, /*below=*/false);
          r.add(label + " upper bound", order, 1.2);
        }
      });
}

CheckReport verifyBackwardSuite(const VerifyConfig& cfg) {
  return runSuite(
      "backward-limit", "germ states approach the rotation as capacity falls",
      cfg, [&](CheckReport& r) {
        r.param("family", "moebius_germ");
        r.param("b", formatNumber(cfg.germB));
        r.param("t_values", "-1,-2,-3");
        const Germ germ = Germ::moebius(cfg.alpha, cfg.germB);
        const BackwardLimitReport rep =
            backwardLimitCheck(germ, {-1.0, -2.0, -3.0});
        for (std::size_t i = 0; i < rep.times.size(); ++i)
          r.param("deviation at t=" + formatNumber(rep.times[i]),
                  formatNumber(rep.supDistance[i]));
        double minDecrease = 1e300, maxHullGap = 0.0;
        for (std::size_t i = 1; i < rep.supDistance.size(); ++i)
          minDecrease = std::min(minDecrease,
                                 rep.supDistance[i - 1] - rep.supDistance[i]);
        for (double gap : rep.capacityGap) maxHullGap = std::max(maxHullGap, gap);
        r.add("deviation decrease per step", minDecrease, 0.0, /*below=*/false);
        r.add("capacity residual of accepted hulls", maxHullGap, 1e-8);
        r.add("deviation at t=-3", rep.supDistance.back(), 1e-3);
      });
}

CheckReport verifyRadiusSuite(const VerifyConfig& cfg) {
  return runSuite(
      "radius-identities", "welding and conformal-radius boundary identities",
      cfg, [&](CheckReport& r) {
        r.param("family", "moebius_germ");
        r.param("b", formatNumber(cfg.germB));
        r.param("t_center", "-1");
        r.param("dt", "1e-3 (order check: 2e-3 vs 1e-3)");
        const Germ germ = Germ::moebius(cfg.alpha, cfg.germB);
        const auto traceAt = [&](double dt) {
          return radiusTrace(germ, {-1.0 - dt, -1.0, -1.0 + dt}, cfg.gridSize);
        };
        const RadiusIdentityReport fine = verifyRadiusIdentities(traceAt(1e-3));
        r.add("real identity residual", fine.maxRealResidual, 1e-4);
        r.add("lift velocity identity residual", fine.maxImagResidual, 1e-4);
        r.add("integral consistency residual", fine.maxIntegralResidual, 1e-4);
        const RadiusIdentityReport coarse = verifyRadiusIdentities(traceAt(2e-3));
        const double ratio = coarse.maxImagResidual / fine.maxImagResidual;
        r.add("halving improvement lower bound", ratio, 3.0, /*below=*/false);
        r.add("halving improvement upper bound", ratio, 5.3);
      });
}

CheckReport verifyHerglotzSuite(const VerifyConfig& cfg) {
  return runSuite(
      "herglotz-invariants", "positivity and normalization across produced "
                             "measures",
      cfg, [&](CheckReport& r) {
        familyParams(r, cfg);
        herglotzInvariantItems(r, "Lebesgue", CircleMeasure::lebesgue(cfg.gridSize));
        const CircleMap g = canonicalFamily(cfg);
        const CircleMeasure oracle = conformalMeasureOracle(g, 2.0);
        herglotzInvariantItems(r, "closed-form 2-conformal", oracle);
        herglotzInvariantItems(r, "reflected 2-conformal", oracle.reflected());
        herglotzInvariantItems(r, "solved 2-conformal",
                               conformalMeasureSolve(g, 2.0).measure);
        TrigSeries bump(
            (CVector(3) << Complex(0.0, 0.0), Complex(0.04, 0.02), Complex(0.0, 0.03))
                .finished());
        herglotzInvariantItems(
            r, "2-conformal of a trigonometric conjugacy",
            conformalMeasureOracle(
                makeLinearizable(cfg.alpha,
                                 ConformalConjugacy::fourierPerturbation(bump),
                                 cfg.gridSize),
                2.0));
        herglotzInvariantItems(r, "mixed atomic", mixedAtomMeasure(cfg.gridSize));
        const Germ germ = Germ::moebius(cfg.alpha, cfg.germB);
        herglotzInvariantItems(
            r, "reflected 2-conformal of an evolved germ state",
            conformalMeasureOracle(germFlowState(germ, -1.0).map, 2.0).reflected());
        const FlowState base = phiExact(g, 0.1);
        const FlowState late = phiExact(g, 0.1 + 1e-3);
        CircleMeasure driving = loewnerMeasure(base, late);
        const double mass = driving.totalMass();
        r.param("driving measure normalization factor", formatNumber(mass));
        RVector scaled = driving.densitySamples() / mass;
        herglotzInvariantItems(
            r, "normalized driving measure",
            CircleMeasure::fromDensity(scaled, driving.atoms(), false));
      });
}

std::vector<CheckReport> runVerifyBattery(const VerifyConfig& cfg) {
  std::vector<CheckReport> reports;
  reports.push_back(verifyMeasureSuite(cfg));
  reports.push_back(verifyFatouSuite(cfg));
  reports.push_back(verifyPoltoratskiSuite(cfg));
  reports.push_back(verifyExteriorSuite(cfg));
  reports.push_back(verifyGeneratorSuite(cfg));
  reports.push_back(verifyDrivingMeasureSuite(cfg));
  reports.push_back(verifySemigroupSuite(cfg));
  reports.push_back(verifyEulerSuite(cfg));
  reports.push_back(verifyBackwardSuite(cfg));
  reports.push_back(verifyRadiusSuite(cfg));
  reports.push_back(verifyHerglotzSuite(cfg));
  return reports;
}

SuiteRunner findSuite(const std::string& idOrAlias, std::string* canonicalId) {
  std::string key;
  for (char c : idOrAlias) key += static_cast<char>(std::tolower(c));
  struct Entry {
    const char* key;
    const char* canonical;
    SuiteRunner runner;
  };
  static const Entry table[] = {
      {"measure-oracle", "measure-oracle", &verifyMeasureSuite},
      {"fatou", "fatou", &verifyFatouSuite},
      {"poltoratski", "poltoratski", &verifyPoltoratskiSuite},
      {"exterior-map", "exterior-map", &verifyExteriorSuite},
      {"generator", "generator", &verifyGeneratorSuite},
      {"t1.2", "generator", &verifyGeneratorSuite},
      {"driving-measure", "driving-measure", &verifyDrivingMeasureSuite},
      {"t1.1", "driving-measure", &verifyDrivingMeasureSuite},
      {"semigroup", "semigroup", &verifySemigroupSuite},
      {"p5.1", "semigroup", &verifySemigroupSuite},
      {"euler", "euler", &verifyEulerSuite},
      {"t1.3", "euler", &verifyEulerSuite},
      {"backward-limit", "backward-limit", &verifyBackwardSuite},
      {"t1.5", "backward-limit", &verifyBackwardSuite},
      {"radius-identities", "radius-identities", &verifyRadiusSuite},
      {"t8.3", "radius-identities", &verifyRadiusSuite},
      {"herglotz-invariants", "herglotz-invariants", &verifyHerglotzSuite},
  };
  for (const Entry& e : table) {
    if (key == e.key) {
      if (canonicalId) *canonicalId = e.canonical;
      return e.runner;
    }
  }
  return nullptr;
}

std::vector<std::string> suiteIds() {
  return {"measure-oracle", "fatou",     "poltoratski",    "exterior-map",
          "generator",      "driving-measure", "semigroup", "euler",
          "backward-limit", "radius-identities", "herglotz-invariants"};
}

CircleMap familyMap(const VerifyConfig& cfg, int gridSize) {
  return canonicalFamily(cfg, gridSize);
}

}  // namespace loewner
