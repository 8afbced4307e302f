#include "loewner/radius.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "loewner/herglotz.hpp"
#include "loewner/measures.hpp"

namespace loewner {
namespace {

double wrapToPrincipal(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

}  // namespace

RadiusTrace radiusTrace(const Germ& germ, const std::vector<double>& tList,
                        int gridSize, const PhiExactOptions& options) {
  const int n = static_cast<int>(tList.size());
  if (n < 3) {
    throw std::invalid_argument("radiusTrace: need at least three times");
  }
  if (gridSize < 64) {
    throw std::invalid_argument("radiusTrace: gridSize must be at least 64");
  }
  const double dt = tList[1] - tList[0];
  if (!(dt > 0.0)) {
    throw std::invalid_argument("radiusTrace: times must be strictly increasing");
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (std::abs(tList[i + 1] - tList[i] - dt) > 1e-12 * (1.0 + std::abs(dt))) {
      throw std::invalid_argument("radiusTrace: times must be uniformly spaced");
    }
  }

  PhiExactOptions opt = options;
  opt.gridSize = gridSize;

  RadiusTrace trace;
  trace.times = tList;
  trace.gridSize = gridSize;
  trace.siegelRadius = germ.conformalScale() * germ.domainRadius();
  trace.radii.reserve(n);
  trace.capacities.reserve(n);
  trace.states.reserve(n);
  trace.weldings.reserve(n);
  for (int i = 0; i < n; ++i) {
    FlowState st = germFlowState(germ, tList[i], opt);
    if (!st.map.linearizer()) {
      throw std::runtime_error("radiusTrace: evolved map lost its linearizer");
    }
    trace.radii.push_back(germ.conformalScale() * st.invariantRadius);
    trace.capacities.push_back(st.hull ? st.hull->capacity() : tList[i]);
    trace.weldings.push_back(st.map.linearizer()->circleRestriction());
    trace.states.push_back(std::move(st));
  }

  trace.radiusDot.reserve(n - 2);
  trace.weldingLiftDot.reserve(n - 2);
  for (int i = 1; i + 1 < n; ++i) {
    trace.radiusDot.push_back((trace.radii[i + 1] - trace.radii[i - 1]) /
                              (2.0 * dt));
    const CircleHomeo& plus = trace.weldings[i + 1];
    const CircleHomeo& minus = trace.weldings[i - 1];
    RVector dot(gridSize);
    for (int j = 0; j < gridSize; ++j) {
      const double theta = kTwoPi * j / gridSize;
      // Lifts are canonical only up to whole turns; the physical velocity is
      // small, so reduce the increment to its principal value.
      dot[j] = wrapToPrincipal(plus.lift(theta) - minus.lift(theta)) / (2.0 * dt);
    }
    trace.weldingLiftDot.push_back(std::move(dot));
  }
  return trace;
}

RadiusIdentityReport verifyRadiusIdentities(const RadiusTrace& trace) {
  const int n = static_cast<int>(trace.times.size());
  if (n < 3 || static_cast<int>(trace.radiusDot.size()) != n - 2) {
    throw std::invalid_argument("verifyRadiusIdentities: malformed trace");
  }
  const int m = trace.gridSize;
  RadiusIdentityReport report;
  report.times.reserve(n - 2);
  for (int i = 1; i + 1 < n; ++i) {
    const CircleHomeo& k = trace.weldings[i];
    const HerglotzField field(
        conformalMeasureOracle(trace.states[i].map, 2.0).reflected());
    const double logDot = trace.radiusDot[i - 1] / trace.radii[i];
    double real = 0.0;
    double imag = 0.0;
    double meanP = 0.0;
    for (int j = 0; j < m; ++j) {
      const double theta = kTwoPi * j / m;
      const double angle = k.lift(theta);
      const double p = field.boundaryP(angle);
      const double q = field.boundaryQ(angle);
      real = std::max(real, std::abs(p - logDot * k.liftDeriv(theta)));
      imag = std::max(imag, std::abs(trace.weldingLiftDot[i - 1][j] + q));
      meanP += p;
    }
    meanP /= m;
    report.times.push_back(trace.times[i]);
    report.realResidual.push_back(real);
    report.imagResidual.push_back(imag);
    report.integralResidual.push_back(std::abs(meanP - logDot));
    report.maxRealResidual = std::max(report.maxRealResidual, real);
    report.maxImagResidual = std::max(report.maxImagResidual, imag);
    report.maxIntegralResidual =
        std::max(report.maxIntegralResidual, report.integralResidual.back());
  }
  return report;
}

}  // namespace loewner
