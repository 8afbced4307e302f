#include "loewner/circlemap.hpp"

#include <algorithm>
#include <cmath>

namespace loewner {

double goldenMean() { return 0.5 * (std::sqrt(5.0) - 1.0); }
double silverMean() { return std::sqrt(2.0) - 1.0; }

bool isAdmissibleRotation(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) return false;
  double x = alpha;
  for (int level = 0; level < 25; ++level) {
    if (x < 1e-9) return false;  // expansion terminated: rational
    const double inv = 1.0 / x;
    const double a = std::floor(inv);
    if (a > 1e7) return false;  // huge partial quotient: near-resonant
    x = inv - a;
  }
  return true;
}

// --------------------------------------------------------------------------
// ConformalConjugacy

ConformalConjugacy ConformalConjugacy::identity() {
  ConformalConjugacy h;
  h.kind_ = Kind::Identity;
  h.circle_ = CircleHomeo(TrigSeries::constant(0.0));
  return h;
}

ConformalConjugacy ConformalConjugacy::moebius(Complex a) {
  if (std::abs(a) >= 1.0)
    throw std::invalid_argument("ConformalConjugacy::moebius: |a| must be < 1");
  if (std::abs(a) == 0.0) return identity();
  ConformalConjugacy h;
  h.kind_ = Kind::Moebius;
  h.a_ = a;
  // Poles of h and h^-1 sit at -1/conj(a) and 1/conj(a); stay clear of them.
  h.rhoOut_ = 0.98 / std::abs(a);
  h.rhoIn_ = 1.0 / h.rhoOut_;
  const int m = 512;
  CVector img(m);
  for (int j = 0; j < m; ++j) img[j] = h.eval(std::polar(1.0, kTwoPi * j / m));
  h.circle_ = CircleHomeo::fitFromSamples(img);
  return h;
}

ConformalConjugacy ConformalConjugacy::fourierPerturbation(const TrigSeries& p) {
  ConformalConjugacy h;
  h.kind_ = Kind::FourierPerturbation;
  h.p_ = p;
  h.pExt_ = analyticExtension(p);
  h.pExtDeriv_ = h.pExt_.derivative();
  // Circle restriction has lift theta + p(theta); this validates univalence
  // on the circle itself (throws if 1 + p' vanishes).
  h.circle_ = CircleHomeo(p);
  // Certify an annulus on which |w P'(w)| stays small, keeping h' = e^{iP}(1 + i w P')
  // away from zero. P is a trigonometric polynomial so the only obstruction
  // is growth of the extension.
  auto distortion = [&](double rho) {
    return rho * h.pExtDeriv_.absBound(rho);
  };
  double lo = 1.0, hi = 1.0;
  if (distortion(1.0) >= 0.9)
    throw std::invalid_argument("ConformalConjugacy::fourierPerturbation: perturbation too strong");
  while (hi < 1e4 && distortion(hi * 1.05) < 0.9) hi *= 1.05;
  while (lo > 1e-4 && distortion(lo / 1.05) < 0.9) lo /= 1.05;
  h.rhoOut_ = hi;
  h.rhoIn_ = lo;
  return h;
}

Complex ConformalConjugacy::eval(Complex w) const {
  switch (kind_) {
    case Kind::Identity: return w;
    case Kind::Moebius: return (w + a_) / (1.0 + std::conj(a_) * w);
    case Kind::FourierPerturbation:
      return w * std::exp(Complex(0.0, 1.0) * pExt_.eval(w));
    case Kind::AnnulusSeries: {
      const double r = std::abs(w);
      if (r < rhoIn_ * (1.0 - 1e-12) || r > rhoOut_ * (1.0 + 1e-12))
        throw std::domain_error("ConformalConjugacy::eval: outside certified annulus");
      return pExt_.eval(w);
    }
  }
  return w;
}

Complex ConformalConjugacy::deriv(Complex w) const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Moebius: {
      const Complex d = 1.0 + std::conj(a_) * w;
      return (1.0 - std::norm(a_)) / (d * d);
    }
    case Kind::FourierPerturbation: {
      const Complex i(0.0, 1.0);
      return std::exp(i * pExt_.eval(w)) * (1.0 + i * w * pExtDeriv_.eval(w));
    }
    case Kind::AnnulusSeries: {
      const double r = std::abs(w);
      if (r < rhoIn_ * (1.0 - 1e-12) || r > rhoOut_ * (1.0 + 1e-12))
        throw std::domain_error("ConformalConjugacy::deriv: outside certified annulus");
      return pExtDeriv_.eval(w);
    }
  }
  return 1.0;
}

Complex ConformalConjugacy::inverse(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return z;
    case Kind::Moebius: return (z - a_) / (1.0 - std::conj(a_) * z);
    case Kind::FourierPerturbation:
    case Kind::AnnulusSeries: {
      const double r = std::abs(z);
      if (std::abs(r - 1.0) < 1e-12) {
        const double theta = circle_.invertLift(std::arg(z));
        return std::polar(1.0, theta) * (r);  // keep the caller's tiny modulus error
      }
      // Newton from the circle inverse of the angular part, kept inside the
      // certified annulus for the series-backed kind.
      Complex w = std::polar(r, circle_.invertLift(std::arg(z)));
      for (int it = 0; it < 60; ++it) {
        if (kind_ == Kind::AnnulusSeries) {
          const double rw = std::abs(w);
          if (rw > rhoOut_) w *= (rhoOut_ * (1.0 - 1e-9)) / rw;
          if (rw < rhoIn_) w *= (rhoIn_ * (1.0 + 1e-9)) / rw;
        }
        const Complex f = eval(w) - z;
        const Complex step = f / deriv(w);
        w -= step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) return w;
      }
      throw std::runtime_error("ConformalConjugacy::inverse: Newton did not converge");
    }
  }
  return z;
}

// --------------------------------------------------------------------------
// Annulus certification from empirical coefficient decay.

namespace {

// Least-squares slope/intercept of log|c| against k over the decaying tail.
struct DecayFit {
  bool valid = false;
  double slope = 0.0;      // log of the per-mode ratio (negative = decay)
  double intercept = 0.0;  // log-magnitude extrapolated to k = 0
  int lastMode = 0;
};

DecayFit fitTail(const std::vector<std::pair<int, double>>& points) {
  DecayFit fit;
  const int n = static_cast<int>(points.size());
  if (n < 4) return fit;
  // Use the outer half of the available modes: the asymptotic regime.
  const int start = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = start; i < n; ++i) {
    const double x = points[i].first, y = points[i].second;
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  const double det = cnt * sxx - sx * sx;
  if (std::abs(det) < 1e-30) return fit;
  fit.slope = (cnt * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.lastMode = points.back().first;
  fit.valid = true;
  return fit;
}

// Largest rho >= 1 such that the extrapolated tail sum beyond the stored
// modes stays below tol. "side" +1 certifies outward, -1 inward (rho is then
// the reciprocal radius, still >= 1).
double certifiedRadius(const DecayFit& fit, double tol) {
  if (!fit.valid || fit.slope > -1e-3) return 1.0 + 1e-3;  // no measurable decay
  const double q = std::exp(fit.slope);
  double rho = 1.0;
  for (double cand = 1.0; cand < 1e4; cand *= 1.02) {
    const double qr = q * cand;
    if (qr > 0.98) break;
    const int K = fit.lastMode;
    const double logTail = fit.intercept + (K + 1) * std::log(qr) - std::log1p(-qr);
    if (logTail > std::log(tol)) break;
    rho = cand;
  }
  return std::max(rho, 1.0 + 1e-6);
}

void certifyAnnulus(const LaurentSeries& s, double tol, double& rhoIn, double& rhoOut) {
  double maxAbs = 0.0;
  for (int k = s.kmin(); k <= s.kmax(); ++k) maxAbs = std::max(maxAbs, std::abs(s.coeff(k)));
  const double floor = std::max(1e-300, 1e-13 * maxAbs);
  std::vector<std::pair<int, double>> plus, minus;
  for (int k = 1; k <= s.kmax(); ++k)
    if (std::abs(s.coeff(k)) > floor) plus.emplace_back(k, std::log(std::abs(s.coeff(k))));
  for (int k = -1; k >= s.kmin(); --k)
    if (std::abs(s.coeff(k)) > floor) minus.emplace_back(-k, std::log(std::abs(s.coeff(k))));

  // A side with only a handful of modes is effectively polynomial: the
  // truncation represents the function exactly there, so be generous.
  rhoOut = (plus.size() < 4) ? 1e8 : certifiedRadius(fitTail(plus), tol);
  const double inv = (minus.size() < 4) ? 1e8 : certifiedRadius(fitTail(minus), tol);
  rhoIn = 1.0 / inv;
}

}  // namespace

ConformalConjugacy ConformalConjugacy::annulusSeries(const CVector& circleSamples) {
  const int m = static_cast<int>(circleSamples.size());
  if (m < 16)
    throw std::invalid_argument("ConformalConjugacy::annulusSeries: need at least 16 samples");
  double res = 0.0;
  for (int j = 0; j < m; ++j)
    res = std::max(res, std::abs(std::abs(circleSamples[j]) - 1.0));
  if (res > 1e-8)
    throw std::invalid_argument(
        "ConformalConjugacy::annulusSeries: samples leave the unit circle (residual " +
        std::to_string(res) + ")");
  ConformalConjugacy h;
  h.kind_ = Kind::AnnulusSeries;
  // Validates that the boundary restriction is an orientation-preserving
  // homeomorphism (degree one, monotone angle).
  try {
    h.circle_ = CircleHomeo::fitFromSamples(circleSamples);
  } catch (const std::exception& e) {
    throw std::invalid_argument(
        std::string("ConformalConjugacy::annulusSeries: ") + e.what());
  }
  h.pExt_ = LaurentSeries::fromCircleSamples(circleSamples).truncated(1e-14);
  h.pExtDeriv_ = h.pExt_.derivative();
  certifyAnnulus(h.pExt_, 1e-10, h.rhoIn_, h.rhoOut_);
  return h;
}

// --------------------------------------------------------------------------
// CircleMap

CircleMap CircleMap::fromCircleSamples(const CVector& samples, double rotation,
                                       RotationTag tag,
                                       std::optional<ConformalConjugacy> linearizer,
                                       double circleTol, double capIn, double capOut) {
  const int m = static_cast<int>(samples.size());
  if (m < 8) throw std::invalid_argument("CircleMap: need at least 8 samples");
  CircleMap g;
  g.gridSize_ = m;
  g.circleResidual_ = 0.0;
  for (int j = 0; j < m; ++j)
    g.circleResidual_ = std::max(g.circleResidual_, std::abs(std::abs(samples[j]) - 1.0));
  if (g.circleResidual_ > circleTol)
    throw std::invalid_argument("CircleMap: samples leave the unit circle (residual " +
                                std::to_string(g.circleResidual_) + ")");
  g.angle_ = CircleHomeo::fitFromSamples(samples);  // validates degree and monotonicity
  g.series_ = LaurentSeries::fromCircleSamples(samples).truncated(1e-14);
  g.deriv_ = g.series_.derivative();
  certifyAnnulus(g.series_, 1e-10, g.seriesIn_, g.seriesOut_);
  g.seriesIn_ = std::max(g.seriesIn_, capIn);
  g.seriesOut_ = std::min(g.seriesOut_, capOut);
  g.rhoIn_ = g.seriesIn_;
  g.rhoOut_ = g.seriesOut_;
  g.rotation_ = rotation - std::floor(rotation);
  g.tag_ = tag;
  g.linearizer_ = std::move(linearizer);

  // A linearizer extends the trusted domain: g = h o R_alpha o h^-1 is exact
  // on the largest round annulus inside the h-image of h's own annulus.
  if (g.linearizer_) {
    const ConformalConjugacy& h = *g.linearizer_;
    if (h.kind() == ConformalConjugacy::Kind::Identity) {
      g.rhoIn_ = std::min(g.rhoIn_, 1e-8);
      g.rhoOut_ = std::max(g.rhoOut_, 1e8);
    } else {
      const double wOut = 0.99 * h.annulusOuter();
      const double wIn = 1.01 * h.annulusInner();
      // A degenerate certified annulus (both radii pinched to the circle)
      // extends nothing; keep the series annulus in that case.
      if (wOut > 1.0 && wIn < 1.0) {
        double outer = 1e300, inner = 0.0;
        for (int j = 0; j < 128; ++j) {
          const double t = kTwoPi * j / 128;
          outer = std::min(outer, std::abs(h.eval(std::polar(wOut, t))));
          inner = std::max(inner, std::abs(h.eval(std::polar(wIn, t))));
        }
        g.rhoOut_ = std::max(g.rhoOut_, 0.999 * outer);
        g.rhoIn_ = std::min(g.rhoIn_, 1.001 * inner);
      }
    }
  }

  // Reflection symmetry g(1/conj z) = 1/conj(g(z)) just off the circle.
  const double rt = std::min(1.02, std::sqrt(g.seriesOut_));
  if (rt > 1.0 && 1.0 / rt >= g.rhoIn_) {
    double res = 0.0;
    for (int j = 0; j < 64; ++j) {
      const Complex z = std::polar(rt, kTwoPi * j / 64);
      const Complex lhs = g.series_.eval(1.0 / std::conj(z));
      const Complex rhs = 1.0 / std::conj(g.series_.eval(z));
      res = std::max(res, std::abs(lhs - rhs));
    }
    g.reflectionResidual_ = res;
  }
  return g;
}

Complex CircleMap::eval(Complex z) const {
  const double r = std::abs(z);
  if (r >= seriesIn_ * (1.0 - 1e-12) && r <= seriesOut_ * (1.0 + 1e-12))
    return series_.eval(z);
  if (linearizer_ && r >= rhoIn_ * (1.0 - 1e-12) && r <= rhoOut_ * (1.0 + 1e-12)) {
    const ConformalConjugacy& h = *linearizer_;
    return h.eval(std::polar(1.0, kTwoPi * rotation_) * h.inverse(z));
  }
  throw std::domain_error("CircleMap::eval: |z| = " + std::to_string(r) +
                          " outside certified annulus [" + std::to_string(rhoIn_) +
                          ", " + std::to_string(rhoOut_) + "]");
}

Complex CircleMap::deriv(Complex z) const {
  const double r = std::abs(z);
  if (r >= seriesIn_ * (1.0 - 1e-12) && r <= seriesOut_ * (1.0 + 1e-12))
    return deriv_.eval(z);
  if (linearizer_ && r >= rhoIn_ * (1.0 - 1e-12) && r <= rhoOut_ * (1.0 + 1e-12)) {
    // g' = h'(lambda w) lambda / h'(w) with w = h^-1(z).
    const ConformalConjugacy& h = *linearizer_;
    const Complex lambda = std::polar(1.0, kTwoPi * rotation_);
    const Complex w = h.inverse(z);
    return h.deriv(lambda * w) * lambda / h.deriv(w);
  }
  throw std::domain_error("CircleMap::deriv: evaluation outside certified annulus");
}

CircleMap makeRotation(double alpha, bool allowRational) {
  if (!allowRational && !isAdmissibleRotation(alpha))
    throw std::invalid_argument("makeRotation: rotation number fails the Diophantine filter");
  const int m = 256;
  const Complex lambda = std::polar(1.0, kTwoPi * alpha);
  CVector samples(m);
  for (int j = 0; j < m; ++j) samples[j] = lambda * std::polar(1.0, kTwoPi * j / m);
  return CircleMap::fromCircleSamples(samples, alpha, RotationTag::Constructed,
                                      ConformalConjugacy::identity());
}

CircleMap makeLinearizable(double alpha, const ConformalConjugacy& h, int gridSize) {
  if (!isAdmissibleRotation(alpha))
    throw std::invalid_argument("makeLinearizable: rotation number fails the Diophantine filter");
  if (h.kind() == ConformalConjugacy::Kind::Identity) return makeRotation(alpha);
  const Complex lambda = std::polar(1.0, kTwoPi * alpha);
  CVector samples(gridSize);
  for (int j = 0; j < gridSize; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / gridSize);
    samples[j] = h.eval(lambda * h.inverse(xi));
  }
  return CircleMap::fromCircleSamples(samples, alpha, RotationTag::Constructed, h);
}

CircleMap compose(const CircleMap& f, const CircleMap& g) {
  const int m = std::max(f.gridSize(), g.gridSize());
  CVector samples(m);
  for (int j = 0; j < m; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / m);
    Complex gz = g.series().eval(xi);
    gz /= std::abs(gz);  // clamp roundoff drift before feeding f
    samples[j] = f.series().eval(gz);
  }

  // Domain restriction: the circle of radius rho must map under g into f's
  // annulus. Probe |g| on off-circle circles and shrink until it fits.
  auto imageInside = [&](double rho) {
    double lo = 1e300, hi = 0.0;
    for (int j = 0; j < 64; ++j) {
      const double v = std::abs(g.eval(std::polar(rho, kTwoPi * j / 64)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return lo >= f.annulusInner() && hi <= f.annulusOuter();
  };
  double capOut = g.annulusOuter();
  while (capOut > 1.0 + 1e-6 && !imageInside(capOut)) capOut = 1.0 + (capOut - 1.0) * 0.8;
  double capIn = g.annulusInner();
  while (capIn < 1.0 - 1e-6 && !imageInside(capIn)) capIn = 1.0 - (1.0 - capIn) * 0.8;

  const bool bothRotations =
      f.linearizer() && f.linearizer()->kind() == ConformalConjugacy::Kind::Identity &&
      g.linearizer() && g.linearizer()->kind() == ConformalConjugacy::Kind::Identity;
  if (bothRotations) {
    const double rot = f.rotationNumber() + g.rotationNumber();
    return CircleMap::fromCircleSamples(samples, rot, RotationTag::Constructed,
                                        ConformalConjugacy::identity(), 1e-8,
                                        capIn, capOut);
  }

  // Rotation number is not additive in general: estimate it from the lift.
  CircleHomeo lift = CircleHomeo::fitFromSamples(samples);
  double theta = 0.0;
  const int iters = 10000;
  for (int n = 0; n < iters; ++n) theta = lift.lift(theta);
  const double rot = theta / (kTwoPi * iters);
  return CircleMap::fromCircleSamples(samples, rot, RotationTag::Estimated,
                                      std::nullopt, 1e-8, capIn, capOut);
}

RotationEstimate estimateRotationNumber(const CircleMap& g, int iterations,
                                        double theta0) {
  if (iterations < 1) throw std::invalid_argument("estimateRotationNumber: need iterations >= 1");
  const CircleHomeo& G = g.angleMap();
  double theta = theta0;
  for (int n = 0; n < iterations; ++n) theta = G.lift(theta);
  RotationEstimate est;
  est.iterations = iterations;
  const double raw = (theta - theta0) / (kTwoPi * iterations);
  est.value = raw - std::floor(raw);
  est.errorBound = 1.0 / iterations;
  return est;
}

}  // namespace loewner
