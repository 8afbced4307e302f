#include "loewner/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace loewner {

namespace {

// Deterministic uniform doubles in [0,1) from the 64-bit Mersenne twister;
// hand-rolled conversion so reports are reproducible across libstdc++s.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : eng_(seed) {}
  double next() { return (eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

double wrapAngle(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

}  // namespace

// --------------------------------------------------------------------------
// CircleMeasure

CircleMeasure CircleMeasure::lebesgue(int gridSize) {
  RVector f = RVector::Constant(gridSize, 1.0 / kTwoPi);
  return fromDensity(f, {}, false);
}

CircleMeasure CircleMeasure::fromDensity(const RVector& densitySamples,
                                         std::vector<Atom> atoms, bool renormalize) {
  if (densitySamples.size() < 8)
    throw std::invalid_argument("CircleMeasure: need at least 8 density samples");
  CircleMeasure mu;
  mu.density_ = densitySamples;
  for (Eigen::Index j = 0; j < mu.density_.size(); ++j) {
    if (mu.density_[j] < -1e-12)
      throw std::invalid_argument("CircleMeasure: negative density sample " +
                                  std::to_string(mu.density_[j]));
    mu.density_[j] = std::max(mu.density_[j], 0.0);
  }
  for (Atom& a : mu.atoms_ = std::move(atoms)) {
    if (a.mass <= 0.0) throw std::invalid_argument("CircleMeasure: atom mass must be positive");
    const double r = std::abs(a.position);
    if (std::abs(r - 1.0) > 1e-10)
      throw std::invalid_argument("CircleMeasure: atom off the unit circle");
    a.position /= r;
  }
  mu.series_ = TrigSeries::fromSamples(mu.density_);
  if (renormalize) {
    const double total = mu.totalMass();
    if (total <= 0.0) throw std::invalid_argument("CircleMeasure: vanishing total mass");
    mu.density_ /= total;
    mu.series_ *= 1.0 / total;
    for (Atom& a : mu.atoms_) a.mass /= total;
  }
  return mu;
}

CircleMeasure CircleMeasure::fromMoments(const CVector& moments, int gridSize,
                                         double* clippedMass) {
  if (moments.size() < 1) throw std::invalid_argument("fromMoments: empty moment sequence");
  const double target = moments[0].real();
  // Density coefficients c_k = m_k / (2 pi); the partial sum may dip below
  // zero (moment truncation), which we clip and report.
  CVector c = moments / kTwoPi;
  TrigSeries raw{c};
  RVector f = raw.gridValues(gridSize);
  double clipped = 0.0;
  for (int j = 0; j < gridSize; ++j)
    if (f[j] < 0.0) {
      clipped += -f[j] * kTwoPi / gridSize;
      f[j] = 0.0;
    }
  if (clippedMass) *clippedMass = clipped;
  CircleMeasure mu = fromDensity(f, {}, false);
  const double total = mu.totalMass();
  if (total > 0.0 && target > 0.0) {
    const double scale = target / total;
    mu.density_ *= scale;
    mu.series_ *= scale;
  }
  return mu;
}

double CircleMeasure::atomicMass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

Complex CircleMeasure::moment(int k) const {
  // AC part: int e^{-ik theta} f(theta) dtheta = 2 pi c_k (c_{-k} = conj c_k).
  const Complex ck = (k >= 0) ? series_.coeff(k) : std::conj(series_.coeff(-k));
  Complex m = kTwoPi * ck;
  for (const Atom& a : atoms_) m += a.mass * std::pow(a.position, -k);
  return m;
}

double CircleMeasure::arcMass(double a, double b) const {
  const double len = b - a;
  if (!(len > 0.0 && len <= kTwoPi + 1e-12))
    throw std::invalid_argument("arcMass: arc length must lie in (0, 2 pi]");
  double s = series_.integrate(a, b);
  for (const Atom& atom : atoms_) {
    const double rel = wrapAngle(std::arg(atom.position) - a);
    if (rel < len) s += atom.mass;
  }
  return s;
}

CircleMeasure CircleMeasure::reflected() const {
  const int m = gridSize();
  RVector f(m);
  for (int j = 0; j < m; ++j) f[j] = density_[(m - j) % m];
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.position = std::conj(a.position);
  return fromDensity(f, std::move(atoms), false);
}

// --------------------------------------------------------------------------

CircleMeasure pushforward(const CircleMeasure& mu, const CircleMap& g) {
  const int m = mu.gridSize();
  const CircleHomeo& G = g.angleMap();
  RVector f(m);
  for (int j = 0; j < m; ++j) {
    const double target = kTwoPi * j / m;
    const double pre = G.invertLift(target);
    f[j] = mu.densitySeries().eval(pre) / G.liftDeriv(pre);
  }
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) {
    a.position = g.eval(a.position);
    a.position /= std::abs(a.position);
  }
  return CircleMeasure::fromDensity(f, std::move(atoms), false);
}

CircleMeasure conformalMeasureOracle(const CircleMap& g, double s) {
  if (!g.linearizer())
    throw std::invalid_argument("conformalMeasureOracle: map carries no linearizer");
  const ConformalConjugacy& h = *g.linearizer();
  const int m = g.gridSize();
  RVector f(m);
  for (int j = 0; j < m; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / m);
    const Complex w = h.inverse(xi);
    f[j] = std::pow(std::abs(h.deriv(w)), s - 1.0);
  }
  return CircleMeasure::fromDensity(f, {}, true);
}

SolveResult conformalMeasureSolve(const CircleMap& g, double s,
                                  const SolveOptions& options) {
  const int m = g.gridSize();
  SolveResult out;

  // eta = (s-1) log|g'| on the circle grid, as a trig series.
  RVector etaVals(m);
  for (int j = 0; j < m; ++j) {
    const Complex xi = std::polar(1.0, kTwoPi * j / m);
    etaVals[j] = (s - 1.0) * std::log(std::abs(g.deriv(xi)));
  }
  TrigSeries eta = TrigSeries::fromSamples(etaVals);

  RVector u(m);
  const bool haveLinearizer = g.linearizer() && !options.forceBirkhoff;
  if (haveLinearizer) {
    out.route = SolveResult::Route::Linearizer;
    const ConformalConjugacy& h = *g.linearizer();
    // v o R_alpha - v = eta o h, then u = v o h^-1.
    RVector rhsVals(m);
    for (int j = 0; j < m; ++j)
      rhsVals[j] = eta.eval(h.circleRestriction().lift(kTwoPi * j / m));
    TrigSeries rhs = TrigSeries::fromSamples(rhsVals);
    const double drift = rhs.mean();
    out.diagnostics = "rhs mean " + std::to_string(drift);
    TrigSeries v = solveRotationCohomology(rhs, g.rotationNumber(), options.divisorFloor);
    for (int j = 0; j < m; ++j)
      u[j] = v.eval(h.circleRestriction().invertLift(kTwoPi * j / m));
  } else {
    out.route = SolveResult::Route::Birkhoff;
    // Cesaro-weighted Birkhoff sum: u_n = -sum_{k<n} (1 - k/n) eta o G^k
    // converges to u - const at O(log n / n) for Diophantine rotation.
    const int n = options.birkhoffIterates;
    const CircleHomeo& G = g.angleMap();
    RVector angles = thetaGrid(m);
    u.setZero();
    for (int k = 0; k < n; ++k) {
      const double w = 1.0 - double(k) / n;
      for (int j = 0; j < m; ++j) {
        u[j] -= w * eta.eval(angles[j]);
        angles[j] = G.lift(angles[j]);
      }
    }
    out.diagnostics = "birkhoff iterates " + std::to_string(n);
  }

  // Normalize u additively before exponentiating, then scale to mass one.
  const double uMax = u.maxCoeff();
  RVector f(m);
  for (int j = 0; j < m; ++j) f[j] = std::exp(u[j] - uMax);
  out.measure = CircleMeasure::fromDensity(f, {}, true);

  // Defining residual f(G(t)) = |g'|^{s-1} f(t), relative to max f.
  const TrigSeries& fs = out.measure.densitySeries();
  const CircleHomeo& G = g.angleMap();
  double res = 0.0, fmax = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    const double lhs = fs.eval(G.lift(t));
    const double rhs = std::exp(etaVals[j]) * fs.eval(t);
    res = std::max(res, std::abs(lhs - rhs));
    fmax = std::max(fmax, fs.eval(t));
  }
  out.residual = res / std::max(fmax, 1e-300);
  out.converged = out.residual <= options.tol;
  return out;
}

ConformalReport verifyConformal(const CircleMeasure& mu, const CircleMap& g,
                                double s, int nArcs, std::uint64_t seed) {
  ConformalReport rep;
  rep.arcs = nArcs;
  rep.seed = seed;
  UniformRng rng(seed);
  const CircleHomeo& G = g.angleMap();

  // Precompute the spectral product |g'|^s f as one series; arc integrals of
  // it are then exact. Sample on a grid fine enough for the product.
  const int m = 4 * std::max(mu.gridSize(), g.gridSize());
  RVector prod(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    const Complex xi = std::polar(1.0, t);
    prod[j] = std::pow(std::abs(g.deriv(xi)), s) * mu.densitySeries().eval(t);
  }
  TrigSeries weighted = TrigSeries::fromSamples(prod);

  for (int arc = 0; arc < nArcs; ++arc) {
    const double a = kTwoPi * rng.next();
    const double len = kTwoPi * (0.05 + 0.9 * rng.next());
    const double b = a + len;

    // Left side: mu(g(E)) with g(E) the arc between the lifted endpoints.
    const double ga = G.lift(a), gb = G.lift(b);
    double lhs = mu.arcMass(ga, gb);
    // Right side: int_E |g'|^s dmu.
    double rhs = weighted.integrate(a, b);
    for (const Atom& atom : mu.atoms()) {
      const double rel = std::fmod(std::arg(atom.position) - a + 2.0 * kTwoPi, kTwoPi);
      if (rel < len) rhs += atom.mass * std::pow(std::abs(g.deriv(atom.position)), s);
    }
    rep.maxDiscrepancy = std::max(rep.maxDiscrepancy, std::abs(lhs - rhs));
  }
  return rep;
}

double weakDistance(const CircleMeasure& mu1, const CircleMeasure& mu2,
                    int nMoments) {
  double d = 0.0;
  for (int k = -nMoments; k <= nMoments; ++k)
    d = std::max(d, std::abs(mu1.moment(k) - mu2.moment(k)));
  return d;
}

}  // namespace loewner
