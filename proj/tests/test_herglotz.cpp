#include <doctest.h>

#include <cmath>
#include <complex>

#include "loewner/herglotz.hpp"

using namespace loewner;

namespace {

CircleMeasure halfLebesgueHalfAtom(Complex pos = Complex(1.0, 0.0)) {
  RVector f = RVector::Constant(2048, 0.5 / kTwoPi);
  return CircleMeasure::fromDensity(f, {Atom{pos, 0.5}}, false);
}

CircleMeasure moebiusMu2(double a = 0.3) {
  CircleMap g = makeLinearizable(goldenMean(), ConformalConjugacy::moebius(Complex(a, 0.0)));
  return conformalMeasureOracle(g, 2.0);
}

}  // namespace

TEST_CASE("Herglotz transform of Lebesgue is identically one") {
  HerglotzField H(CircleMeasure::lebesgue(512));
  for (Complex z : {Complex(1.1, 0.0), Complex(0.0, 2.0), Complex(-7.0, 3.0)})
    CHECK(std::abs(H.eval(z) - 1.0) < 1e-14);
  RVector P, Q;
  H.valuesAtRadius(1.0 + 1e-3, 256, P, Q);
  CHECK((P.array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(Q.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Herglotz transform of a point mass matches (z+1)/(z-1)") {
  RVector zero = RVector::Zero(64);
  CircleMeasure delta = CircleMeasure::fromDensity(zero, {Atom{Complex(1.0, 0.0), 1.0}}, false);
  HerglotzField H(delta);
  for (Complex z : {Complex(1.5, 0.5), Complex(-2.0, 0.1), Complex(0.0, 1.2)})
    CHECK(std::abs(H.eval(z) - (z + 1.0) / (z - 1.0)) < 1e-14);
  CHECK_THROWS_AS(H.eval(Complex(0.5, 0.0)), std::domain_error);
  // Boundary Q is the negative half-angle cotangent.
  for (double t : {0.3, 2.0, -1.1})
    CHECK(H.boundaryQ(t) == doctest::Approx(-1.0 / std::tan(t / 2.0)).epsilon(1e-12));
}

TEST_CASE("Herglotz transform is linear in the measure") {
  HerglotzField Hmix(halfLebesgueHalfAtom());
  const Complex z(1.3, 0.7);
  const Complex expected = 0.5 * 1.0 + 0.5 * (z + 1.0) / (z - 1.0);
  CHECK(std::abs(Hmix.eval(z) - expected) < 1e-13);
}

TEST_CASE("normalization and positivity across the exterior") {
  HerglotzField H(moebiusMu2());
  CHECK(std::abs(H.eval(Complex(1e6, 0.0)) - 1.0) < 1e-5);
  for (double rho : {1.001, 1.1, 3.0})
    for (int j = 0; j < 64; ++j) {
      const Complex z = std::polar(rho, kTwoPi * j / 64);
      CHECK(H.eval(z).real() > 0.0);
    }
}

TEST_CASE("radial limits recover a band-limited density (Fatou)") {
  CircleMeasure mu = moebiusMu2();
  HerglotzField H(mu);
  auto bv = H.boundaryValues({1e-3, 5e-4}, 2048);
  // P(theta) equals the normalized density at the conjugate point,
  // 2 pi f(-theta) for our dtheta-density storage.
  double sup = 0.0;
  for (int j = 0; j < 2048; ++j) {
    const double target = kTwoPi * mu.densitySeries().eval(-bv.theta[j]);
    sup = std::max(sup, std::abs(bv.P[j] - target));
  }
  CHECK(sup < 1e-6);
  for (int j = 0; j < 2048; ++j) CHECK(bv.flagged[j] == 0);

  // The exact boundary series agrees even more tightly.
  double supExact = 0.0;
  for (int j = 0; j < 512; ++j) {
    const double t = kTwoPi * j / 512;
    supExact = std::max(supExact,
                        std::abs(H.boundaryP(t) - kTwoPi * mu.densitySeries().eval(-t)));
  }
  CHECK(supExact < 1e-12);
}

TEST_CASE("boundary extrapolation flags the neighbourhood of an atom") {
  HerglotzField H(halfLebesgueHalfAtom());
  auto bv = H.boundaryValues({1e-3, 5e-4}, 2048);
  // Flags must appear near theta = 0 (the reflected atom angle) ...
  bool nearAtomFlagged = bv.flagged[0] || bv.flagged[1] || bv.flagged[2047];
  CHECK(nearAtomFlagged);
  // ... while the bulk of the circle extrapolates cleanly to P = 1/2.
  int clean = 0;
  double supCleanErr = 0.0;
  for (int j = 0; j < 2048; ++j)
    if (!bv.flagged[j]) {
      ++clean;
      supCleanErr = std::max(supCleanErr, std::abs(bv.P[j] - 0.5));
    }
  CHECK(clean > 1900);
  CHECK(supCleanErr < 1e-3);
  CHECK_THROWS_AS(H.boundaryValues({1e-3}, 256), std::invalid_argument);
}

TEST_CASE("threshold reconstruction recovers the atom of a mixed measure") {
  CircleMeasure mu = halfLebesgueHalfAtom();
  PoltoratskiResult rec = poltoratskiReconstruct(mu, {1e2, 1e3, 1e4});
  REQUIRE(rec.measures.size() == 3);

  RVector zeroDensity = RVector::Zero(64);
  CircleMeasure target =
      CircleMeasure::fromDensity(zeroDensity, {Atom{Complex(1.0, 0.0), 0.5}}, false);

  double prevMassErr = 1e300, prevDist = 1e300;
  for (int i = 0; i < 3; ++i) {
    CHECK(rec.superlevelCounts[i] >= 4);
    const double massErr = std::abs(rec.measures[i].totalMass() - 0.5);
    const double dist = weakDistance(rec.measures[i], target, 8);
    CHECK(massErr < prevMassErr + 1e-12);
    CHECK(dist < prevDist + 1e-12);
    prevMassErr = massErr;
    prevDist = dist;
  }
  CHECK(prevMassErr < 0.025);  // within 5% of mass 1/2 at t = 1e4
}

TEST_CASE("threshold reconstruction converges to the reflected atom position") {
  const Complex pos = std::polar(1.0, 0.8);
  CircleMeasure mu = halfLebesgueHalfAtom(pos);
  PoltoratskiResult rec = poltoratskiReconstruct(mu, {1e3, 1e4});
  RVector zeroDensity = RVector::Zero(64);
  CircleMeasure reflectedAtom =
      CircleMeasure::fromDensity(zeroDensity, {Atom{std::conj(pos), 0.5}}, false);
  CircleMeasure unreflectedAtom =
      CircleMeasure::fromDensity(zeroDensity, {Atom{pos, 0.5}}, false);
  const double dRef = weakDistance(rec.measures[1], reflectedAtom, 8);
  const double dUnref = weakDistance(rec.measures[1], unreflectedAtom, 8);
  CHECK(dRef < 0.05);
  CHECK(dRef < dUnref);  // the reconstruction sees r_* mu_sing, not mu_sing
}

TEST_CASE("threshold reconstruction of a smooth measure carries no mass") {
  PoltoratskiResult rec = poltoratskiReconstruct(moebiusMu2(), {1e2, 1e3});
  for (int i = 0; i < 2; ++i) {
    CHECK(rec.superlevelCounts[i] == 0);
    CHECK(rec.measures[i].totalMass() == 0.0);
  }
}
