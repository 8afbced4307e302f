#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "loewner/fourier.hpp"

using namespace loewner;

namespace {

// Quadratic-time DFT used as an oracle for the FFT wrappers.
CVector dftOracle(const CVector& x) {
  const int m = static_cast<int>(x.size());
  CVector X(m);
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j)
      s += x[j] * std::polar(1.0, -kTwoPi * j * k / m);
    X[k] = s;
  }
  return X;
}

double centeredDiff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("dft and idft match the quadratic-time oracle and invert each other") {
  const int m = 16;
  CVector x(m);
  unsigned s = 12345u;
  for (int j = 0; j < m; ++j) {
    s = 1664525u * s + 1013904223u;
    const double a = (s >> 8) * (1.0 / (1 << 24)) - 0.5;
    s = 1664525u * s + 1013904223u;
    const double b = (s >> 8) * (1.0 / (1 << 24)) - 0.5;
    x[j] = Complex(a, b);
  }
  CVector X = dft(x);
  CVector Xo = dftOracle(x);
  CHECK((X - Xo).cwiseAbs().maxCoeff() < 1e-12);
  CVector back = idft(X);
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("LaurentSeries recovers the coefficients of a known rational map") {
  // f(z) = z + 0.25/z + 0.03 z^2 sampled on the circle.
  const int m = 64;
  CVector samples(m);
  for (int j = 0; j < m; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * j / m);
    samples[j] = z + 0.25 / z + 0.03 * z * z;
  }
  LaurentSeries f = LaurentSeries::fromCircleSamples(samples);
  CHECK(std::abs(f.coeff(1) - 1.0) < 1e-13);
  CHECK(std::abs(f.coeff(-1) - 0.25) < 1e-13);
  CHECK(std::abs(f.coeff(2) - 0.03) < 1e-13);
  CHECK(std::abs(f.coeff(0)) < 1e-13);
  CHECK(std::abs(f.coeff(5)) < 1e-13);

  // Off-circle evaluation agrees with the closed form.
  const Complex z(1.1, 0.3);
  const Complex exact = z + 0.25 / z + 0.03 * z * z;
  CHECK(std::abs(f.eval(z) - exact) < 1e-12);

  // Derivative against the closed form 1 - 0.25/z^2 + 0.06 z.
  const Complex dexact = 1.0 - 0.25 / (z * z) + 0.06 * z;
  CHECK(std::abs(f.derivative().eval(z) - dexact) < 1e-12);
}

TEST_CASE("LaurentSeries::samplesOnCircle matches pointwise evaluation off the unit radius") {
  const int m = 32;
  CVector samples(m);
  for (int j = 0; j < m; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * j / m);
    samples[j] = 2.0 * z + 0.1 / (z * z);
  }
  LaurentSeries f = LaurentSeries::fromCircleSamples(samples);
  const double r = 1.3;
  CVector fast = f.samplesOnCircle(m, r);
  for (int j = 0; j < m; ++j) {
    const Complex z = std::polar(r, kTwoPi * j / m);
    CHECK(std::abs(fast[j] - f.eval(z)) < 1e-12);
  }
}

TEST_CASE("round trip samples -> series -> samples is exact on the grid") {
  const int m = 128;
  CVector samples(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    samples[j] = Complex(std::exp(std::sin(t)), std::cos(2.0 * t));
  }
  LaurentSeries f = LaurentSeries::fromCircleSamples(samples);
  CVector back = f.samplesOnCircle(m);
  CHECK((back - samples).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("TrigSeries evaluation, derivative, conjugate, and arc integral") {
  const int m = 64;
  RVector vals(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    vals[j] = 1.5 + std::cos(t) + 0.5 * std::sin(3.0 * t);
  }
  TrigSeries f = TrigSeries::fromSamples(vals);
  CHECK(f.mean() == doctest::Approx(1.5).epsilon(1e-13));

  auto exact = [](double t) { return 1.5 + std::cos(t) + 0.5 * std::sin(3.0 * t); };
  for (double t : {0.3, 1.7, 4.0}) CHECK(f.eval(t) == doctest::Approx(exact(t)).epsilon(1e-12));

  // Derivative vs centered differences on the exact function.
  for (double t : {0.5, 2.2}) {
    const double fd = centeredDiff(exact, t, 1e-6);
    CHECK(f.derivative().eval(t) == doctest::Approx(fd).epsilon(1e-8));
  }

  // Harmonic conjugate: cos t -> sin t, sin 3t -> -cos 3t, mean dropped.
  TrigSeries g = f.conjugateFunction();
  for (double t : {0.9, 3.1})
    CHECK(g.eval(t) == doctest::Approx(std::sin(t) - 0.5 * std::cos(3.0 * t)).epsilon(1e-12));

  // Arc integral against the antiderivative 1.5 t + sin t - cos(3t)/6.
  auto F = [](double t) { return 1.5 * t + std::sin(t) - std::cos(3.0 * t) / 6.0; };
  CHECK(f.integrate(0.4, 2.9) == doctest::Approx(F(2.9) - F(0.4)).epsilon(1e-12));
  // Wrap-around arc.
  CHECK(f.integrate(-0.5, 0.5) == doctest::Approx(F(0.5) - F(-0.5)).epsilon(1e-12));
}

TEST_CASE("TrigSeries grid round trip is exact including the Nyquist mode") {
  const int m = 16;
  RVector vals(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    vals[j] = std::cos(8.0 * t) + 0.3 * std::sin(5.0 * t);  // k = 8 is Nyquist for m = 16
  }
  TrigSeries f = TrigSeries::fromSamples(vals);
  RVector back = f.gridValues(m);
  CHECK((back - vals).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("analyticExtension is real on the circle and extends the series") {
  const int m = 32;
  RVector vals(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    vals[j] = 0.2 * std::cos(t) - 0.1 * std::sin(2.0 * t);
  }
  TrigSeries p = TrigSeries::fromSamples(vals);
  LaurentSeries P = analyticExtension(p);
  for (double t : {0.0, 1.1, 2.9}) {
    const Complex v = P.eval(std::polar(1.0, t));
    CHECK(std::abs(v.imag()) < 1e-13);
    CHECK(v.real() == doctest::Approx(p.eval(t)).epsilon(1e-12));
  }
  // Realness on the circle reflects across it: P(1/conj z) = conj(P(z)).
  const Complex z(1.07, 0.4);
  CHECK(std::abs(P.eval(1.0 / std::conj(z)) - std::conj(P.eval(z))) < 1e-13);
}

TEST_CASE("unwrappedAngles follows a path through the branch cut") {
  const int m = 64;
  CVector pts(m);
  for (int j = 0; j < m; ++j) pts[j] = std::polar(1.0, -0.5 + kTwoPi * j / m);
  RVector a = unwrappedAngles(pts);
  for (int j = 0; j < m; ++j)
    CHECK(a[j] == doctest::Approx(-0.5 + kTwoPi * j / m).epsilon(1e-13));
}

TEST_CASE("CircleHomeo fits samples, inverts its lift, and rejects folds") {
  const int m = 256;
  // h(e^{i t}) = e^{i (t + 0.3 sin t + 0.1 cos 2t)}: a genuine homeomorphism.
  CVector img(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    img[j] = std::polar(1.0, t + 0.3 * std::sin(t) + 0.1 * std::cos(2.0 * t));
  }
  CircleHomeo h = CircleHomeo::fitFromSamples(img);
  CHECK(h.minLiftDerivative() > 0.0);
  for (double t : {0.2, 1.9, 5.5}) {
    CHECK(h.lift(t) == doctest::Approx(t + 0.3 * std::sin(t) + 0.1 * std::cos(2.0 * t)).epsilon(1e-10));
    const double y = h.lift(t);
    CHECK(h.invertLift(y) == doctest::Approx(t).epsilon(1e-12));
  }
  // Composition apply/applyInverse is the identity on the circle.
  const Complex xi = std::polar(1.0, 2.4);
  CHECK(std::abs(h.applyInverse(h.apply(xi)) - xi) < 1e-12);

  // A fold (lift derivative changes sign) must be rejected.
  CVector bad(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    bad[j] = std::polar(1.0, t + 1.8 * std::sin(t));
  }
  CHECK_THROWS(CircleHomeo::fitFromSamples(bad));
}

TEST_CASE("solveRotationCohomology solves a manufactured coboundary") {
  // Pick v, build rhs = v(.+2 pi alpha) - v, and recover v up to its mean.
  const double alpha = 0.5 * (std::sqrt(5.0) - 1.0);
  const int m = 128;
  auto v = [](double t) { return 0.7 * std::cos(t) - 0.2 * std::sin(4.0 * t); };
  RVector rhsVals(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    rhsVals[j] = v(t + kTwoPi * alpha) - v(t);
  }
  TrigSeries rhs = TrigSeries::fromSamples(rhsVals);
  CHECK(std::abs(rhs.mean()) < 1e-14);
  TrigSeries sol = solveRotationCohomology(rhs, alpha, 1e-12);
  for (double t : {0.3, 2.0, 4.4})
    CHECK(sol.eval(t) == doctest::Approx(v(t)).epsilon(1e-11));

  // A near-resonant rotation number trips the divisor floor (k = 2 resonance).
  const double nearRational = 0.5 + 1e-14;
  CHECK_THROWS_AS(solveRotationCohomology(rhs, nearRational, 1e-12), std::runtime_error);
}
