#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "loewner/circlemap.hpp"
#include "loewner/flow.hpp"
#include "loewner/fourier.hpp"
#include "loewner/germ.hpp"
#include "loewner/measures.hpp"

using namespace loewner;

namespace {

CircleMap goldenMap(Complex a, int gridSize = 1024) {
  return makeLinearizable(goldenMean(), ConformalConjugacy::moebius(a), gridSize);
}

// Sup distance between two circle maps sampled on an m-point grid.
double supCircleDistance(const CircleMap& f, const CircleMap& g, int m = 512) {
  const CVector xi = circleGrid(m);
  double d = 0.0;
  for (int j = 0; j < m; ++j) d = std::max(d, std::abs(f.eval(xi[j]) - g.eval(xi[j])));
  return d;
}

double supToRotation(const CircleMap& g, double alpha, int m = 512) {
  const Complex lambda = std::polar(1.0, kTwoPi * alpha);
  const CVector xi = circleGrid(m);
  double d = 0.0;
  for (int j = 0; j < m; ++j) d = std::max(d, std::abs(g.eval(xi[j]) - lambda * xi[j]));
  return d;
}

// Circumcircle through three points (center), for disk-image oracles.
Complex circumcenter(Complex z1, Complex z2, Complex z3) {
  const Complex num = std::norm(z1) * (z2 - z3) + std::norm(z2) * (z3 - z1) +
                      std::norm(z3) * (z1 - z2);
  const Complex den = std::conj(z1) * (z2 - z3) + std::conj(z2) * (z3 - z1) +
                      std::conj(z3) * (z1 - z2);
  return num / den;
}

}  // namespace

// ---------------------------------------------------------------------------
// Germs

TEST_CASE("linear germ is the rigid rotation") {
  const Germ f = Germ::linear(goldenMean());
  CHECK(f.kind() == Germ::Kind::Linear);
  CHECK(f.conformalScale() == 1.0);
  const Complex z(0.3, -0.2);
  CHECK(std::abs(f.eval(z) - f.multiplier() * z) < 1e-15);
  CHECK(std::abs(f.linearize(z) - z) < 1e-15);
  CHECK(std::abs(f.delinearize(z) - z) < 1e-15);
  CHECK(std::abs(f.deriv(z) - f.multiplier()) < 1e-15);
}

TEST_CASE("Moebius germ carries its closed-form linearizer") {
  const double alpha = goldenMean();
  const Complex b(0.2, 0.0);
  const Germ f = Germ::moebius(alpha, b);
  CHECK(f.kind() == Germ::Kind::Moebius);
  CHECK(std::abs(f.conformalScale() - 1.0) < 1e-15);

  const Complex lambda = f.multiplier();
  const Complex z1 = (1.0 - lambda) / b;  // second fixed point
  CHECK(std::abs(f.eval(z1) - z1) < 1e-12);
  CHECK(f.domainRadius() == doctest::Approx(0.9 * std::abs(z1)));

  // f o H = H o (lambda .) on a circle inside the certified disk, and the
  // delinearization inverts the linearizer there.
  for (int j = 0; j < 16; ++j) {
    const Complex w = std::polar(1.7, kTwoPi * j / 16);
    const Complex Hw = f.linearize(w);
    CHECK(std::abs(f.eval(Hw) - f.linearize(lambda * w)) < 1e-13);
    CHECK(std::abs(f.delinearize(Hw) - w) < 1e-12);
    // closed-form derivative of z -> lambda z / (1 - b z)
    const Complex den = 1.0 - b * Hw;
    CHECK(std::abs(f.deriv(Hw) - lambda / (den * den)) < 1e-12);
  }

  CHECK(Germ::moebius(alpha, 0.0).kind() == Germ::Kind::Linear);
  CHECK_THROWS_AS((void)Germ::moebius(0.0, b), std::invalid_argument);
}

TEST_CASE("polynomial germ certifies a univalence disk") {
  const double alpha = silverMean();
  CVector c(2);
  c << Complex(0.1, 0.0), Complex(0.0, 0.05);
  const Germ f = Germ::polynomial(alpha, c);
  CHECK(f.kind() == Germ::Kind::Polynomial);
  CHECK(std::abs(f.conformalScale() - 1.0) < 1e-15);

  // At the certified radius the derivative bound sum (i+2)|c_i| rho^{i+1}
  // sits at its 1/2 threshold.
  const double rho = f.domainRadius();
  CHECK(rho > 0.5);
  const double bound = 2 * 0.1 * rho + 3 * 0.05 * rho * rho;
  CHECK(bound == doctest::Approx(0.5).epsilon(1e-6));

  const Complex lambda = f.multiplier();
  for (int j = 0; j < 16; ++j) {
    const Complex w = std::polar(0.8 * rho, kTwoPi * j / 16);
    CHECK(std::abs(f.eval(f.linearize(w)) - f.linearize(lambda * w)) < 1e-13);
    CHECK(std::abs(f.delinearize(f.linearize(w)) - w) < 1e-12);
  }
  CHECK_THROWS_AS((void)f.delinearize(Complex(10.0, 0.0)), std::domain_error);
}

TEST_CASE("Moebius germ hulls are round disks") {
  const Germ f = Germ::moebius(goldenMean(), Complex(0.2, 0.0));
  const double rho = 1.5;
  const JordanCurveSamples curve = germHullBoundary(f, rho);

  const CVector& p = curve.points();
  const int m = curve.size();
  const Complex c = circumcenter(p[0], p[m / 3], p[2 * m / 3]);
  const double R = std::abs(p[0] - c);
  for (int j = 0; j < m; ++j) CHECK(std::abs(std::abs(p[j] - c) - R) < 1e-10);

  // Capacity of a disk is the log of its radius, wherever its center sits.
  const ExteriorMap em = exteriorMap(curve);
  CHECK(std::abs(em.capacity() - std::log(R)) < 1e-9);

  CHECK_THROWS_AS((void)germHullBoundary(f, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)germHullBoundary(f, 100.0), std::invalid_argument);
}

TEST_CASE("linear germ states reproduce the rotation at exact capacity") {
  const Germ f = Germ::linear(goldenMean());
  const double t = std::log(0.3);
  PhiExactOptions opt;
  opt.gridSize = 1024;
  const FlowState st = germFlowState(f, t, opt);

  CHECK(st.time == t);
  CHECK(st.capacityGap <= 1e-10);
  CHECK(std::abs(st.invariantRadius - 0.3) < 1e-9);
  REQUIRE(st.hull.has_value());
  CHECK(std::abs(st.hull->capacity() - t) < 1e-9);
  CHECK(supToRotation(st.map, goldenMean()) < 1e-8);
}

// ---------------------------------------------------------------------------
// Exact flow

TEST_CASE("exact flow fixes rotations") {
  const CircleMap r = makeRotation(goldenMean());
  const FlowState st = phiExact(r, 0.4);
  CHECK(st.capacityGap <= 1e-10);
  CHECK(std::abs(st.invariantRadius - std::exp(0.4)) < 1e-8);
  CHECK(supToRotation(st.map, goldenMean()) < 1e-8);
  REQUIRE(st.hull.has_value());
  CHECK(std::abs(st.hull->capacity() - 0.4) < 1e-9);
}

TEST_CASE("exact flow conjugates the dynamics through the hull map") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0));
  const FlowState st = phiExact(g, 0.15);

  CHECK(st.capacityGap <= 1e-10);
  REQUIRE(st.map.linearizer().has_value());
  CHECK(st.map.linearizer()->kind() == ConformalConjugacy::Kind::AnnulusSeries);
  CHECK(st.map.rotationNumber() == g.rotationNumber());

  // Phi o g_t = g o Phi on the unit circle.
  for (int j = 0; j < 8; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / 8 + 0.1);
    const Complex lhs = st.hull->phi(st.map.eval(xi) / std::abs(st.map.eval(xi)));
    const Complex rhs = g.eval(st.hull->phi(xi));
    CHECK(std::abs(lhs - rhs) < 1e-7);
  }
}

TEST_CASE("exact flow composes as a semigroup") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0));
  const double t1 = 0.08, t2 = 0.05;
  const FlowState oneShot = phiExact(g, t1 + t2);
  const FlowState viaT1 = phiExact(g, t1);
  const FlowState chained = phiExact(viaT1.map, t2);
  CHECK(supCircleDistance(oneShot.map, chained.map) < 1e-7);
}

TEST_CASE("exact flow rejects what it cannot certify") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0));
  CHECK_THROWS_AS((void)phiExact(g, 5.0), std::runtime_error);
  CHECK_THROWS_AS((void)phiExact(g, -0.5), std::invalid_argument);

  const int m = 256;
  CVector samples(m);
  const Complex lambda = std::polar(1.0, kTwoPi * goldenMean());
  for (int j = 0; j < m; ++j) samples[j] = lambda * std::polar(1.0, kTwoPi * j / m);
  const CircleMap bare =
      CircleMap::fromCircleSamples(samples, goldenMean(), RotationTag::Estimated);
  CHECK_THROWS_AS((void)phiExact(bare, 0.1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Generator

TEST_CASE("generator vanishes for rotations") {
  const GeneratorField X = generator(makeRotation(goldenMean()));
  CHECK(X.solverRoute() == SolveResult::Route::Linearizer);
  CHECK(weakDistance(X.measure(), CircleMeasure::lebesgue(256), 16) < 1e-10);
  double sup = 0.0;
  for (int j = 0; j < X.circleField().size(); ++j)
    sup = std::max(sup, std::abs(X.circleField()[j]));
  CHECK(sup < 1e-9);
  CHECK(X.tangencyResidual() < 1e-9);
}

TEST_CASE("generator field is tangent and has a Herglotz angular part") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0));
  const GeneratorField X = generator(g);
  CHECK(X.solverResidual() < 1e-8);
  CHECK(X.tangencyResidual() < 1e-8);

  // chi(z)/z inherits the positive real part of the Herglotz transform.
  for (int j = 0; j < 50; ++j) {
    const double r = 1.001 + 0.004 * j;
    const Complex z = std::polar(r, 0.37 * j);
    CHECK((X.chi(z) / z).real() > 0.0);
  }

  // Boundary values continue the exterior evaluation.
  const Complex xi = std::polar(1.0, 1.3);
  CHECK(std::abs(X.chi(xi) - X.chi(1.0001 * xi)) < 2e-4);
  CHECK((std::conj(xi) * X.chi(xi)).real() > 0.0);

  // On-circle field values match the two-term formula.
  const Complex probe = std::polar(1.0, 2.1);
  CHECK(std::abs(X.fieldAt(probe) - (g.deriv(probe) * X.chi(probe) - X.chi(g.eval(probe)))) ==
        0.0);

  SolveOptions hard;
  hard.forceBirkhoff = true;
  hard.tol = 1e-15;
  CHECK_THROWS_AS((void)generator(g, hard), std::runtime_error);
}

TEST_CASE("difference quotients of the exact flow converge to the generator") {
  const CircleMap g = goldenMap(Complex(0.25, 0.0), 512);
  const GeneratorField X = generator(g);
  PhiExactOptions opt;
  opt.gridSize = 1024;

  const CVector xi = circleGrid(64);
  auto quotientError = [&](double h) {
    const FlowState st = phiExact(g, h, opt);
    double err = 0.0;
    for (int j = 0; j < xi.size(); ++j) {
      const Complex dq = (st.map.eval(xi[j]) - g.eval(xi[j])) / h;
      err = std::max(err, std::abs(dq - X.fieldAt(xi[j])));
    }
    return err;
  };

  const double e1 = quotientError(1e-2);
  const double e2 = quotientError(5e-3);
  const double slope = std::log2(e1 / e2);
  CHECK(e2 < 0.05);
  CHECK(slope > 0.8);
  CHECK(slope < 1.2);
}

TEST_CASE("hull expansion rate at time zero is the generator field") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0), 512);
  const GeneratorField X = generator(g);
  const double s = 1e-3;
  const FlowState st = phiExact(g, s);
  double err = 0.0;
  for (int j = 0; j < 16; ++j) {
    const Complex z = std::polar(2.0, kTwoPi * j / 16);
    err = std::max(err, std::abs((st.hull->phi(z) - z) / s - X.chi(z)));
  }
  CHECK(err < 5e-3);
}

// ---------------------------------------------------------------------------
// Euler integration

TEST_CASE("Euler flow keeps rotations still") {
  const CircleMap r = makeRotation(goldenMean());
  const FlowTrajectory traj = integrateFlow(r, 0.05, 2.5e-3);
  CHECK(traj.steps.size() == 20);
  CHECK(supToRotation(traj.terminal.map, goldenMean()) < 1e-8);
  for (const FlowStepInfo& s : traj.steps) {
    CHECK(s.preProjectionResidual < 1e-9);
    CHECK(s.postFitResidual < 1e-11);
    CHECK(s.linearizerMaintained);
    CHECK(s.rotationMismatch < 1e-9);
  }
}

TEST_CASE("Euler flow converges to the exact flow at first order") {
  const CircleMap g = goldenMap(Complex(0.2, 0.0), 512);
  const double T = 0.02;
  PhiExactOptions opt;
  opt.gridSize = 1024;
  const FlowState exact = phiExact(g, T, opt);

  std::vector<double> errs;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const FlowTrajectory traj = integrateFlow(g, T, dt);
    errs.push_back(supCircleDistance(traj.terminal.map, exact.map));
  }
  CHECK(errs[0] > errs[1]);
  CHECK(errs[1] > errs[2]);
  const double slope01 = std::log2(errs[0] / errs[1]);
  const double slope12 = std::log2(errs[1] / errs[2]);
  CHECK(slope01 > 0.75);
  CHECK(slope01 < 1.3);
  CHECK(slope12 > 0.75);
  CHECK(slope12 < 1.3);
  CHECK(errs[2] < 2e-3);

  // The rotation number survives the discretization.
  const RotationEstimate est = estimateRotationNumber(goldenMap(Complex(0.2, 0.0), 512), 2000);
  const RotationEstimate estT = estimateRotationNumber(integrateFlow(g, T, 1e-3).terminal.map, 2000);
  CHECK(std::abs(est.value - estT.value) < 2.0 * est.errorBound);

  CHECK_THROWS_AS((void)integrateFlow(g, 0.01, -1e-3), std::invalid_argument);
  CHECK_THROWS_AS((void)integrateFlow(g, -0.01, 1e-3), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Driving measure

TEST_CASE("driving measure of a rotation chain is Lebesgue") {
  const CircleMap r = makeRotation(goldenMean());
  const FlowState early = phiExact(r, 0.3);
  const FlowState late = phiExact(r, 0.3 + 1e-3);
  LoewnerMeasureInfo info;
  const CircleMeasure nu = loewnerMeasure(early, late, 64, &info);

  CHECK(info.keptModes == 0);
  CHECK(info.clippedMass == 0.0);
  CHECK(info.massGap < 1e-3);  // (e^dt - 1)/dt - 1 ~ dt/2
  CHECK(weakDistance(nu, CircleMeasure::lebesgue(1024), 16) < 1e-3);
}

TEST_CASE("driving measure recovers the reflected conformal measure") {
  const CircleMap g = goldenMap(Complex(0.3, 0.0));
  const double t = 0.1;
  const FlowState base = phiExact(g, t);
  const CircleMeasure oracle = conformalMeasureSolve(base.map, 2.0).measure.reflected();

  std::vector<double> dist;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const FlowState late = phiExact(g, t + dt);
    dist.push_back(weakDistance(loewnerMeasure(base, late), oracle, 32));
  }
  CHECK(dist[0] > dist[1]);
  CHECK(dist[1] > dist[2]);
  CHECK(dist[2] < 1e-3);
}

TEST_CASE("driving measure validation") {
  const CircleMap r = makeRotation(goldenMean());
  const FlowState early = phiExact(r, 0.1);
  const FlowState late = phiExact(r, 0.15);
  CHECK_THROWS_AS((void)loewnerMeasure(early, late), std::invalid_argument);  // gap too wide
  CHECK_THROWS_AS((void)loewnerMeasure(late, early), std::invalid_argument);  // wrong order
  const FlowState bare(0.1, r);  // no hull data
  CHECK_THROWS_AS((void)loewnerMeasure(bare, late), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Backward limits

TEST_CASE("backward germ states approach the rotation geometrically") {
  const Germ f = Germ::moebius(goldenMean(), Complex(0.2, 0.0));
  PhiExactOptions opt;
  opt.gridSize = 1024;
  const BackwardLimitReport rep = backwardLimitCheck(f, {-0.5, -1.0, -1.5, -2.0}, opt);

  CHECK(rep.monotone);
  for (double gap : rep.capacityGap) CHECK(gap < 1e-8);
  // Distances and radii scale like e^t along the family.
  const double ratio = rep.supDistance[3] / rep.supDistance[0];
  CHECK(ratio > 0.5 * std::exp(-1.5));
  CHECK(ratio < 2.0 * std::exp(-1.5));
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    CHECK(rep.rho[i] > 0.5 * std::exp(rep.times[i]));
    CHECK(rep.rho[i] < 2.0 * std::exp(rep.times[i]));
  }

  CHECK_THROWS_AS((void)backwardLimitCheck(f, {-1.0, -0.5}, opt), std::invalid_argument);
}

TEST_CASE("backward linear germ states are exact rotations") {
  const Germ f = Germ::linear(goldenMean());
  PhiExactOptions opt;
  opt.gridSize = 512;
  const BackwardLimitReport rep = backwardLimitCheck(f, {-0.5, -1.5}, opt);
  for (double d : rep.supDistance) CHECK(d < 1e-8);
  for (double gap : rep.capacityGap) CHECK(gap < 1e-10);
}

TEST_CASE("germ states compose with the exact flow") {
  const Germ f = Germ::moebius(goldenMean(), Complex(0.2, 0.0));
  PhiExactOptions opt;
  opt.gridSize = 1024;
  const FlowState st1 = germFlowState(f, -0.8, opt);
  const FlowState st2 = germFlowState(f, -0.3, opt);
  const FlowState chained = phiExact(st1.map, 0.5, opt);
  CHECK(supCircleDistance(chained.map, st2.map) < 1e-6);
}
