#include <doctest.h>

#include <cmath>
#include <complex>

#include "loewner/circlemap.hpp"
#include "support/moebius_oracle.hpp"

using namespace loewner;

TEST_CASE("Diophantine admissibility filter") {
  CHECK(isAdmissibleRotation(goldenMean()));
  CHECK(isAdmissibleRotation(silverMean()));
  CHECK(isAdmissibleRotation(std::sqrt(5.0) - 2.0));
  CHECK_FALSE(isAdmissibleRotation(0.5));
  CHECK_FALSE(isAdmissibleRotation(1.0 / 3.0));
  CHECK_FALSE(isAdmissibleRotation(0.61805));       // decimal rational near golden
  CHECK_FALSE(isAdmissibleRotation(0.0));
  CHECK_FALSE(isAdmissibleRotation(1.0));
  CHECK_THROWS_AS(makeRotation(0.25), std::invalid_argument);
  CHECK_NOTHROW(makeRotation(0.25, /*allowRational=*/true));
}

TEST_CASE("makeRotation is the exact rigid rotation") {
  const double alpha = goldenMean();
  CircleMap g = makeRotation(alpha);
  CHECK(g.rotationNumber() == doctest::Approx(alpha).epsilon(1e-15));
  CHECK(g.rotationTag() == RotationTag::Constructed);
  const Complex lambda = std::polar(1.0, kTwoPi * alpha);
  for (Complex z : {Complex(0.3, 0.1), Complex(1.0, 0.0), Complex(-2.0, 5.0)})
    CHECK(std::abs(g.eval(z) - lambda * z) < 1e-14);
  CHECK(std::abs(g.deriv(Complex(1.1, -0.4)) - lambda) < 1e-13);
}

TEST_CASE("Moebius conjugacy closed forms") {
  const Complex a(0.3, 0.0);
  ConformalConjugacy h = ConformalConjugacy::moebius(a);

  // h o h^-1 = id on and off the circle.
  for (Complex z : {Complex(0.2, 0.9), Complex(1.3, -0.2), Complex(-0.8, 0.1)})
    CHECK(std::abs(h.eval(h.inverse(z)) - z) < 1e-14);

  // The circle maps to the circle.
  for (double t : {0.0, 1.0, 2.5, 5.0})
    CHECK(std::abs(std::abs(h.eval(std::polar(1.0, t))) - 1.0) < 1e-15);

  // Derivative against centered differences.
  const Complex w(0.4, 0.5);
  const double dh = 1e-6;
  const Complex fd = (h.eval(w + dh) - h.eval(w - dh)) / (2.0 * dh);
  CHECK(std::abs(h.deriv(w) - fd) < 1e-9);

  CHECK_THROWS_AS(ConformalConjugacy::moebius(Complex(1.0, 0.2)), std::invalid_argument);
}

TEST_CASE("makeLinearizable(Moebius) matches the matrix oracle") {
  const double alpha = goldenMean();
  const Complex a(0.3, 0.0);
  CircleMap g = makeLinearizable(alpha, ConformalConjugacy::moebius(a));
  const oracle::MoebiusMatrix M = oracle::conjugatedRotation(a, alpha);

  // On-circle and off-circle agreement with the matrix product.
  for (double t : {0.1, 1.4, 3.0, 5.9}) {
    const Complex xi = std::polar(1.0, t);
    CHECK(std::abs(g.eval(xi) - M.apply(xi)) < 1e-12);
  }
  for (double r : {0.85, 1.0, 1.25}) {
    const Complex z = std::polar(r, 2.0);
    CHECK(std::abs(g.eval(z) - M.apply(z)) < 1e-11);
    CHECK(std::abs(g.deriv(z) - M.applyDeriv(z)) < 1e-10);
  }

  // Conjugacy identity g o h = h o R_alpha on the circle.
  const ConformalConjugacy& h = *g.linearizer();
  const Complex lambda = std::polar(1.0, kTwoPi * alpha);
  double res = 0.0;
  for (int j = 0; j < 257; ++j) {
    const Complex w = std::polar(1.0, kTwoPi * j / 257.0);
    res = std::max(res, std::abs(g.eval(h.eval(w)) - h.eval(lambda * w)));
  }
  CHECK(res < 1e-12);

  // The certified annulus stays inside the pole radius (~1.911) but is wide
  // thanks to the conjugacy route; the series region is necessarily narrower.
  CHECK(g.annulusOuter() > 1.5);
  CHECK(g.annulusOuter() < 1.95);
  CHECK(g.annulusInner() < 0.77);
  CHECK(g.seriesAnnulusOuter() > 1.05);
  CHECK(g.seriesAnnulusOuter() < g.annulusOuter());
  CHECK_THROWS_AS(g.eval(Complex(5.0, 0.0)), std::domain_error);

  // Circle invariance and symmetry diagnostics.
  CHECK(g.circleResidual() < 1e-13);
  CHECK(g.reflectionResidual() < 1e-9);
}

TEST_CASE("derivative matches finite differences for a perturbation map") {
  const double alpha = silverMean();
  RVector vals(64);
  for (int j = 0; j < 64; ++j) {
    const double t = kTwoPi * j / 64;
    vals[j] = 0.08 * std::cos(t) - 0.05 * std::sin(2.0 * t);
  }
  ConformalConjugacy h = ConformalConjugacy::fourierPerturbation(TrigSeries::fromSamples(vals));
  CircleMap g = makeLinearizable(alpha, h);
  for (double t : {0.7, 2.9}) {
    const Complex z = std::polar(1.0, t);
    const double dh = 1e-5;
    const Complex fd = (g.eval(z * std::polar(1.0, dh)) - g.eval(z * std::polar(1.0, -dh))) /
                       (2.0 * dh * Complex(0.0, 1.0) * z);
    CHECK(std::abs(g.deriv(z) - fd) < 1e-7);
  }
}

TEST_CASE("Fourier perturbation conjugacy: inverse and univalence guard") {
  RVector vals(64);
  for (int j = 0; j < 64; ++j) {
    const double t = kTwoPi * j / 64;
    vals[j] = 0.1 * std::cos(t) + 0.05 * std::sin(2.0 * t);
  }
  ConformalConjugacy h = ConformalConjugacy::fourierPerturbation(TrigSeries::fromSamples(vals));
  CHECK(h.annulusOuter() > 1.2);
  for (Complex w : {std::polar(1.0, 0.8), std::polar(1.1, 2.0), std::polar(0.93, 4.4)})
    CHECK(std::abs(h.inverse(h.eval(w)) - w) < 1e-12);

  // 1 + p' vanishes for a steep perturbation: construction must fail.
  RVector steep(64);
  for (int j = 0; j < 64; ++j) steep[j] = 1.5 * std::sin(kTwoPi * j / 64);
  CHECK_THROWS(ConformalConjugacy::fourierPerturbation(TrigSeries::fromSamples(steep)));
}

TEST_CASE("compose: rotations add, conjugated maps compose to the double rotation") {
  CircleMap r1 = makeRotation(goldenMean());
  CircleMap r2 = makeRotation(silverMean());
  CircleMap r12 = compose(r1, r2);
  CHECK(r12.rotationTag() == RotationTag::Constructed);
  const double expected = std::fmod(goldenMean() + silverMean(), 1.0);
  CHECK(r12.rotationNumber() == doctest::Approx(expected).epsilon(1e-14));

  // Same-conjugacy composition collapses to the doubled rotation number.
  const Complex a(0.3, 0.0);
  const double alpha = goldenMean();
  CircleMap g = makeLinearizable(alpha, ConformalConjugacy::moebius(a));
  CircleMap gg = compose(g, g);
  const double alpha2 = std::fmod(2.0 * alpha, 1.0);  // = sqrt(5) - 2
  CircleMap gg_direct = makeLinearizable(alpha2, ConformalConjugacy::moebius(a));
  double dist = 0.0;
  for (int j = 0; j < 181; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / 181.0);
    dist = std::max(dist, std::abs(gg.eval(xi) - gg_direct.eval(xi)));
  }
  CHECK(dist < 1e-11);
  CHECK(gg.rotationTag() == RotationTag::Estimated);
  CHECK(std::abs(gg.rotationNumber() - alpha2) < 2e-4);  // Birkhoff at n = 1e4
}

TEST_CASE("compose annulus respects the domain of the outer map") {
  const Complex a(0.4, 0.1);
  CircleMap g = makeLinearizable(goldenMean(), ConformalConjugacy::moebius(a));
  CircleMap gg = compose(g, g);
  // Probing at the certified outer radius must stay inside g's annulus.
  const double rho = gg.annulusOuter();
  CHECK(rho > 1.05);
  CVector vals = g.series().samplesOnCircle(64, rho);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(vals[j]) < g.annulusOuter() * (1 + 1e-9));
}

TEST_CASE("Birkhoff rotation estimate converges at the Poincare rate") {
  const double alpha = goldenMean();
  CircleMap g = makeLinearizable(alpha, ConformalConjugacy::moebius(Complex(0.3, 0.0)));
  RotationEstimate e3 = estimateRotationNumber(g, 1000);
  RotationEstimate e5 = estimateRotationNumber(g, 100000);
  CHECK(std::abs(e3.value - alpha) <= e3.errorBound);
  CHECK(std::abs(e5.value - alpha) <= e5.errorBound);
  CHECK(std::abs(e5.value - alpha) < 1e-4);
  CHECK(std::abs(e5.value - alpha) < std::abs(e3.value - alpha));
}

TEST_CASE("orbit of an irrational map visits every arc (no periodic cycle)") {
  CircleMap g = makeLinearizable(goldenMean(), ConformalConjugacy::moebius(Complex(0.3, 0.0)));
  const int bins = 32;
  std::vector<int> hits(bins, 0);
  double theta = 0.4;
  for (int n = 0; n < 10000; ++n) {
    theta = g.angleMap().lift(theta);
    const double frac = theta / kTwoPi - std::floor(theta / kTwoPi);
    hits[static_cast<int>(frac * bins) % bins]++;
  }
  for (int b = 0; b < bins; ++b) CHECK(hits[b] > 0);
}

TEST_CASE("series-backed conjugacy reproduces its source map on the annulus") {
  const auto mo = ConformalConjugacy::moebius(Complex(0.3, 0.0));
  const int m = 2048;
  CVector samples(m);
  for (int j = 0; j < m; ++j)
    samples[j] = mo.eval(std::polar(1.0, kTwoPi * j / m));
  const auto hs = ConformalConjugacy::annulusSeries(samples);

  CHECK(hs.kind() == ConformalConjugacy::Kind::AnnulusSeries);
  CHECK(hs.annulusOuter() > 1.25);
  CHECK(hs.annulusInner() < 1.0 / 1.25);

  for (double r : {1.0 / 1.2, 1.0, 1.05, 1.2}) {  // within the certified annulus
    for (double th : {0.4, 2.1, 5.5}) {
      const Complex w = std::polar(r, th);
      CHECK(std::abs(hs.eval(w) - mo.eval(w)) < 1e-9);
      CHECK(std::abs(hs.deriv(w) - mo.deriv(w)) < 1e-8);
    }
  }

  // Inverse round trip off the circle and exactly on it.
  const Complex w0 = std::polar(1.1, 1.3);
  CHECK(std::abs(hs.inverse(hs.eval(w0)) - w0) < 1e-9);
  const Complex xi = std::polar(1.0, 2.7);
  CHECK(std::abs(hs.inverse(mo.eval(xi)) - xi) < 1e-10);

  // Outside the certified annulus evaluation refuses.
  CHECK_THROWS_AS(hs.eval(Complex(5.0, 0.0)), std::domain_error);

  // Degree-two boundary data is rejected.
  CVector bad(256);
  for (int j = 0; j < 256; ++j) bad[j] = std::polar(1.0, 2.0 * kTwoPi * j / 256);
  CHECK_THROWS_AS(ConformalConjugacy::annulusSeries(bad), std::invalid_argument);
}
