#include "loewner/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace loewner {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator field

GeneratorField::GeneratorField(CircleMap g, SolveResult solve)
    : g_(std::move(g)),
      solve_(std::move(solve)),
      refl_(solve_.measure.reflected()),
      H_(refl_) {
  const int m = g_.gridSize();
  const CVector xi = circleGrid(m);
  const CVector gxi = g_.series().samplesOnCircle(m);
  Xcircle_.resize(m);
  for (int j = 0; j < m; ++j) {
    const Complex X = g_.deriv(xi[j]) * chi(xi[j]) - chi(gxi[j]);
    Xcircle_[j] = X;
    tangency_ = std::max(tangency_, std::abs((std::conj(gxi[j]) * X).real()));
  }
}

Complex GeneratorField::chi(Complex z) const {
  const double r = std::abs(z);
  if (r >= 1.0 + 1e-9) return z * H_.eval(z);
  if (r >= 1.0 - 1e-6) {
    // Radial-limit route; exact for a measure with analytic density. Atoms
    // would make the angular field singular, so they are rejected.
    if (!refl_.atoms().empty())
      throw std::domain_error(
          "GeneratorField::chi: boundary values need an absolutely continuous measure");
    const double theta = std::arg(z);
    return (z / r) * Complex(H_.boundaryP(theta), H_.boundaryQ(theta));
  }
  throw std::domain_error("GeneratorField::chi: defined for |z| >= 1");
}

Complex GeneratorField::fieldAt(Complex z) const {
  return g_.deriv(z) * chi(z) - chi(g_.eval(z));
}

GeneratorField generator(const CircleMap& g, const SolveOptions& options) {
  SolveResult solve = conformalMeasureSolve(g, 2.0, options);
  if (!solve.converged)
    throw std::runtime_error("generator: 2-conformal measure solve stalled at residual " +
                             fmt(solve.residual) + " (tol " + fmt(options.tol) + "; " +
                             solve.diagnostics + ")");
  return GeneratorField(std::move(g), std::move(solve));
}

// ---------------------------------------------------------------------------
// Hull conjugation shared by the exact flow and the germ bridge

namespace {

struct CapacityEval {
  double x = 0.0;  // log of the radius parameter in linearizer coordinates
  double f = 0.0;  // capacity of the hull at x, minus the target time
  CVector pts;     // interior parametrization samples of the hull boundary
  std::optional<ExteriorMap> ext;
};

using CurveSampler = std::function<CVector(double)>;

CapacityEval evalCapacity(const CurveSampler& sample, double x, double t,
                          const ExteriorMapOptions& opt) {
  CapacityEval e;
  e.x = x;
  e.pts = sample(x);
  e.ext = exteriorMap(JordanCurveSamples::fromPoints(e.pts), opt);
  e.f = e.ext->capacity() - t;
  return e;
}

// Secant iteration inside a sign bracket, falling back to bisection whenever
// the secant proposal leaves the bracket. `lo` may be a synthetic endpoint
// (capacity known analytically, no hull data); `hi` must be a real one.
CapacityEval refineCapacityRoot(const CurveSampler& sample, double t,
                                const ExteriorMapOptions& extOpt, double xLo, double fLo,
                                CapacityEval hi, double tol, int maxIter, int& count) {
  if (std::abs(hi.f) <= tol) return hi;
  double xa = xLo, fa = fLo;
  double xb = hi.x;
  double x1 = xa, f1 = fa;  // the two most recent evaluations, for the secant
  double x2 = hi.x, f2 = hi.f;
  CapacityEval best = std::move(hi);
  for (int iter = 0; iter < maxIter; ++iter) {
    double xNew = (f2 != f1) ? x2 - f2 * (x2 - x1) / (f2 - f1) : 0.5 * (xa + xb);
    if (!(xNew > xa) || !(xNew < xb)) xNew = 0.5 * (xa + xb);
    CapacityEval e = evalCapacity(sample, xNew, t, extOpt);
    ++count;
    if (std::abs(e.f) < std::abs(best.f)) best = e;
    if (std::abs(e.f) <= tol) return e;
    if (e.f < 0.0) {
      xa = e.x;
      fa = e.f;
    } else {
      xb = e.x;
    }
    x1 = x2;
    f1 = f2;
    x2 = e.x;
    f2 = e.f;
    if (xb - xa < 1e-15 * (1.0 + std::abs(xa))) break;  // bracket exhausted
  }
  if (std::abs(best.f) <= tol) return best;
  throw std::runtime_error("flow: capacity root-finding stalled at |capacity - t| = " +
                           fmt(std::abs(best.f)) + " (tol " + fmt(tol) + ")");
}

// Conjugate the rotation by W = b^{-1} o sigma, where b is the polar-angle
// lift of the interior parametrization c of the hull boundary and sigma the
// exterior boundary correspondence. Then Phi(e^{i theta}) = c(W(theta)), the
// evolved map has lift W^{-1} o T_{2 pi alpha} o W, and the evolved
// linearizer restricts to the circle with lift W^{-1}.
CircleMap conjugateRotationByHull(const ExteriorMap& ext, const CVector& interiorPoints,
                                  double alpha, RotationTag tag) {
  CircleHomeo b;
  try {
    b = CircleHomeo::fitFromSamples(interiorPoints);
  } catch (const std::exception& e) {
    throw std::runtime_error(
        std::string("flow: hull boundary parametrization is not a polar graph: ") + e.what());
  }
  const CircleHomeo W = welding(ext, b);
  const int m = static_cast<int>(interiorPoints.size());
  const double twoPiAlpha = kTwoPi * alpha;
  CVector linSamples(m), mapSamples(m);
  for (int j = 0; j < m; ++j) {
    const double theta = kTwoPi * j / m;
    linSamples[j] = std::polar(1.0, W.invertLift(theta));
    mapSamples[j] = std::polar(1.0, W.invertLift(W.lift(theta) + twoPiAlpha));
  }
  return CircleMap::fromCircleSamples(mapSamples, alpha, tag,
                                      ConformalConjugacy::annulusSeries(linSamples));
}

FlowState assembleState(double t, double alpha, RotationTag tag, CapacityEval root,
                        int rootIterations) {
  FlowState st(t, conjugateRotationByHull(*root.ext, root.pts, alpha, tag));
  st.capacityGap = std::abs(root.f);
  st.invariantRadius = std::exp(root.x);
  st.rootIterations = rootIterations;
  st.hull = std::move(root.ext);
  return st;
}

}  // namespace

FlowState phiExact(const CircleMap& g, double t, const PhiExactOptions& options) {
  if (!g.linearizer())
    throw std::invalid_argument("phiExact: the map must carry its linearizer");
  if (t < 0.0)
    throw std::invalid_argument("phiExact: negative times need germ data (see germFlowState)");
  if (options.gridSize < 64) throw std::invalid_argument("phiExact: gridSize too small");
  if (t == 0.0) {
    FlowState st(0.0, g);
    st.invariantRadius = 1.0;
    return st;
  }

  const ConformalConjugacy& h = *g.linearizer();
  const int m = options.gridSize;
  const CurveSampler sample = [&h, m](double x) {
    const double r = std::exp(x);
    CVector pts(m);
    for (int j = 0; j < m; ++j) pts[j] = h.eval(std::polar(r, kTwoPi * j / m));
    return pts;
  };

  // The invariant curves live at radii (1, annulusOuter] in linearizer
  // coordinates; the hull at radius 1 is the closed unit disk, capacity 0.
  double xMax = std::log(h.annulusOuter() * (1.0 - 1e-9));
  int count = 0;

  // Probe near the expected root first (capacity grows like x for mild
  // curves); touch the annulus edge only when the probe under-shoots.
  double xProbe = std::min(1.05 * t + 1e-6, 0.9 * xMax);
  CapacityEval hi = evalCapacity(sample, xProbe, t, options.exterior);
  ++count;
  if (hi.f < 0.0) {
    CapacityEval edge;
    bool haveEdge = false;
    for (int tries = 0; tries < 40 && !haveEdge; ++tries) {
      try {
        edge = evalCapacity(sample, xMax, t, options.exterior);
        ++count;
        haveEdge = true;
      } catch (const std::exception&) {
        xMax *= 0.85;  // curve too distorted near the annulus edge; step inward
        if (xMax <= hi.x)
          throw std::runtime_error("phiExact: no computable hull above capacity " +
                                   fmt(hi.f + t));
      }
    }
    if (!haveEdge || edge.f < -options.capacityTol)
      throw std::runtime_error("phiExact: t = " + fmt(t) +
                               " is beyond the certified family (max capacity " +
                               fmt(haveEdge ? edge.f + t : hi.f + t) + ")");
    hi = refineCapacityRoot(sample, t, options.exterior, hi.x, hi.f, std::move(edge),
                            options.capacityTol, options.maxRootIterations, count);
  } else {
    hi = refineCapacityRoot(sample, t, options.exterior, 0.0, -t, std::move(hi),
                            options.capacityTol, options.maxRootIterations, count);
  }
  return assembleState(t, g.rotationNumber(), g.rotationTag(), std::move(hi), count);
}

// ---------------------------------------------------------------------------
// Germ bridge

JordanCurveSamples germHullBoundary(const Germ& germ, double rho, int gridSize) {
  if (!(rho > 0.0) || rho > germ.domainRadius())
    throw std::invalid_argument("germHullBoundary: rho must lie in (0, domainRadius]");
  if (gridSize < 16) throw std::invalid_argument("germHullBoundary: gridSize too small");
  CVector pts(gridSize);
  for (int j = 0; j < gridSize; ++j)
    pts[j] = germ.linearize(std::polar(rho, kTwoPi * j / gridSize));
  return JordanCurveSamples::fromPoints(pts);
}

FlowState germFlowState(const Germ& germ, double t, const PhiExactOptions& options) {
  if (options.gridSize < 64) throw std::invalid_argument("germFlowState: gridSize too small");
  const int m = options.gridSize;
  const CurveSampler sample = [&germ, m](double x) {
    const double rho = std::exp(x);
    CVector pts(m);
    for (int j = 0; j < m; ++j) pts[j] = germ.linearize(std::polar(rho, kTwoPi * j / m));
    return pts;
  };

  int count = 0;
  // Upper end of the family: the largest certified radius whose hull is
  // still a computable polar graph.
  double xMax = std::log(std::min(germ.domainRadius(), 1e300));
  CapacityEval edge;
  bool haveEdge = false;
  for (int tries = 0; tries < 40 && !haveEdge; ++tries) {
    try {
      edge = evalCapacity(sample, xMax, t, options.exterior);
      ++count;
      haveEdge = true;
    } catch (const std::exception&) {
      xMax -= std::log(1.25);
    }
  }
  if (!haveEdge)
    throw std::runtime_error("germFlowState: no computable invariant hull for this germ");
  if (edge.f < -options.capacityTol)
    throw std::runtime_error("germFlowState: t = " + fmt(t) +
                             " is beyond the certified family (max capacity " +
                             fmt(edge.f + t) + ")");

  // Capacity behaves like x + log(conformal scale) as the hulls shrink, so
  // walk down from that asymptote until the root is bracketed from below.
  double xLo = std::min(t - std::log(germ.conformalScale()) - 0.1, edge.x - 0.1);
  double fLo = 0.0;
  bool haveLo = false;
  for (int tries = 0; tries < 200 && !haveLo; ++tries) {
    CapacityEval e = evalCapacity(sample, xLo, t, options.exterior);
    ++count;
    if (std::abs(e.f) <= options.capacityTol)
      return assembleState(t, germ.alpha(), RotationTag::Constructed, std::move(e), count);
    if (e.f < 0.0) {
      fLo = e.f;
      haveLo = true;
    } else {
      edge = std::move(e);  // tighter upper bracket
      xLo -= 0.5;
    }
  }
  if (!haveLo)
    throw std::runtime_error("germFlowState: failed to bracket the capacity root");
  CapacityEval root = refineCapacityRoot(sample, t, options.exterior, xLo, fLo,
                                         std::move(edge), options.capacityTol,
                                         options.maxRootIterations, count);
  return assembleState(t, germ.alpha(), RotationTag::Constructed, std::move(root), count);
}

BackwardLimitReport backwardLimitCheck(const Germ& germ, const std::vector<double>& tList,
                                       const PhiExactOptions& options) {
  if (tList.size() < 2)
    throw std::invalid_argument("backwardLimitCheck: need at least two times");
  for (std::size_t i = 1; i < tList.size(); ++i)
    if (!(tList[i] < tList[i - 1]))
      throw std::invalid_argument("backwardLimitCheck: times must strictly decrease");

  BackwardLimitReport rep;
  const Complex lambda = germ.multiplier();
  for (double t : tList) {
    FlowState st = germFlowState(germ, t, options);
    const int m = st.map.gridSize();
    const CVector xi = circleGrid(m);
    const CVector gs = st.map.series().samplesOnCircle(m);
    double d = 0.0;
    for (int j = 0; j < m; ++j) d = std::max(d, std::abs(gs[j] - lambda * xi[j]));
    rep.times.push_back(t);
    rep.supDistance.push_back(d);
    rep.capacityGap.push_back(st.capacityGap);
    rep.rho.push_back(st.invariantRadius);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.supDistance.size(); ++i)
    if (!(rep.supDistance[i] < rep.supDistance[i - 1])) rep.monotone = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Euler integration

namespace {

// One Newton sweep for the conjugacy defect e = G(K(.)) - K(. + 2 pi alpha):
// solve v o T_alpha - v = e / (K' o T_alpha) and update K <- K + K' v. The
// mean of the right-hand side is the rotation mismatch absorbed by the sweep.
// Returns false (leaving K alone) when the defect is already at the noise
// floor, so that clean conjugacies are carried across steps verbatim.
bool maintainConjugacy(const CircleHomeo& Gnew, CircleHomeo& K, double alpha,
                       double divisorFloor, int m, double& meanDefect) {
  const double twoPiAlpha = kTwoPi * alpha;
  RVector rhs(m);
  double supDefect = 0.0;
  for (int j = 0; j < m; ++j) {
    const double tj = kTwoPi * j / m;
    // Lifts are only defined up to a whole turn, so reduce the defect to its
    // principal value before dividing by K'.
    double e = Gnew.lift(K.lift(tj)) - K.lift(tj + twoPiAlpha);
    e -= kTwoPi * std::round(e / kTwoPi);
    supDefect = std::max(supDefect, std::abs(e));
    rhs[j] = e / K.liftDeriv(tj + twoPiAlpha);
  }
  meanDefect = rhs.mean();
  if (supDefect <= 1e-12) return false;
  rhs.array() -= meanDefect;
  // Truncating the defect spectrum keeps the small divisors from amplifying
  // sample noise into the correction.
  const TrigSeries v = solveRotationCohomology(
      TrigSeries::fromSamples(rhs).truncated(1e-12), alpha, divisorFloor);
  RVector disp(m);
  for (int j = 0; j < m; ++j) {
    const double tj = kTwoPi * j / m;
    disp[j] = K.lift(tj) + K.liftDeriv(tj) * v.eval(tj) - tj;
  }
  K = CircleHomeo(TrigSeries::fromSamples(disp).truncated(1e-15));
  return true;
}

}  // namespace

FlowTrajectory integrateFlow(const CircleMap& g0, double tEnd, double dt,
                             const FlowOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrateFlow: dt must be positive");
  if (!(tEnd >= 0.0)) throw std::invalid_argument("integrateFlow: tEnd must be nonnegative");

  CircleMap g = g0;
  double t = 0.0;
  std::vector<FlowStepInfo> steps;
  const int nSteps = static_cast<int>(std::ceil(tEnd / dt - 1e-12));
  steps.reserve(nSteps);

  for (int n = 0; n < nSteps; ++n) {
    const double h = std::min(dt, tEnd - t);
    FlowStepInfo info;
    info.time = t + h;

    GeneratorField X = generator(g, options.measure);
    info.measureResidual = X.solverResidual();

    const int m = g.gridSize();
    const CVector gs = g.series().samplesOnCircle(m);
    CVector next(m);
    for (int j = 0; j < m; ++j) {
      const Complex raw = gs[j] + h * X.circleField()[j];
      const double r = std::abs(raw);
      info.preProjectionResidual = std::max(info.preProjectionResidual, std::abs(r - 1.0));
      next[j] = raw / r;
    }

    std::optional<ConformalConjugacy> lin;
    if (options.maintainLinearizer && g.linearizer()) {
      try {
        const CircleHomeo Gnew = CircleHomeo::fitFromSamples(next);
        CircleHomeo K = g.linearizer()->circleRestriction();
        double mean = 0.0;
        if (maintainConjugacy(Gnew, K, g.rotationNumber(), options.measure.divisorFloor, m,
                              mean)) {
          double mean2 = 0.0;  // second sweep squares the residual away
          maintainConjugacy(Gnew, K, g.rotationNumber(), options.measure.divisorFloor, m,
                            mean2);
          CVector linSamples(m);
          for (int j = 0; j < m; ++j)
            linSamples[j] = std::polar(1.0, K.lift(kTwoPi * j / m));
          lin = ConformalConjugacy::annulusSeries(linSamples);
        } else {
          lin = *g.linearizer();  // defect at the noise floor: reuse as is
        }
        info.rotationMismatch = std::abs(mean);
        info.linearizerMaintained = true;
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("integrateFlow: linearizer maintenance failed at t=") +
                                 fmt(t + h) + ": " + e.what());
      }
    }

    CircleMap gNext = CircleMap::fromCircleSamples(next, g.rotationNumber(),
                                                   g.rotationTag(), std::move(lin));

    // Fit quality on the doubled grid catches spectral content the step grid
    // cannot represent; reject rather than integrate garbage.
    const CVector dbl = gNext.series().samplesOnCircle(2 * m);
    for (int j = 0; j < 2 * m; ++j)
      info.postFitResidual = std::max(info.postFitResidual, std::abs(std::abs(dbl[j]) - 1.0));
    if (info.postFitResidual > options.rejectResidual)
      throw std::runtime_error("integrateFlow: step to t=" + fmt(t + h) +
                               " rejected: circle residual " + fmt(info.postFitResidual) +
                               " exceeds " + fmt(options.rejectResidual));

    const Complex lambda = std::polar(1.0, kTwoPi * g.rotationNumber());
    const LaurentSeries& fitted = gNext.series();
    for (int k = fitted.kmin(); k <= fitted.kmax(); ++k)
      info.fourierDistanceToRotation +=
          std::abs(fitted.coeff(k) - (k == 1 ? lambda : Complex(0.0)));

    g = std::move(gNext);
    t += h;
    steps.push_back(info);
  }

  FlowTrajectory traj(FlowState(0.0, g0), FlowState(t, std::move(g)));
  traj.steps = std::move(steps);
  return traj;
}

// ---------------------------------------------------------------------------
// Driving measure from hull difference quotients

CircleMeasure loewnerMeasure(const FlowState& earlier, const FlowState& later, int nMoments,
                             LoewnerMeasureInfo* info) {
  const double dt = later.time - earlier.time;
  if (!(dt > 0.0) || dt > 1e-2 * (1.0 + 1e-12))
    throw std::invalid_argument("loewnerMeasure: needs 0 < s - t <= 1e-2 (got " + fmt(dt) +
                                ")");
  if (!earlier.hull || !later.hull)
    throw std::invalid_argument("loewnerMeasure: both states must carry hull data");
  const int m = 512;
  if (nMoments < 1 || nMoments > m / 4)
    throw std::invalid_argument("loewnerMeasure: nMoments out of range");

  // tau = psi_t o phi_s maps |z| > 1 into itself with tau(z) ~ z(1 + (s-t)H)
  // as s -> t; the transform H of the driving measure is read off on |z| = 2.
  const double R0 = 2.0;
  CVector Hs(m);
  for (int j = 0; j < m; ++j) {
    const Complex z = std::polar(R0, kTwoPi * j / m);
    const Complex tau = earlier.hull->psi(later.hull->phi(z));
    Hs[j] = (tau - z) / (dt * z);
  }
  const LaurentSeries L = LaurentSeries::fromSamplesOnCircle(Hs, R0);

  // H is holomorphic in |z| > 1, so its positive modes measure the noise in
  // the samples; negative modes are kept only where they clear that floor
  // (the fit amplifies mode -k by R0^k).
  double noise = 1e-14 * Hs.cwiseAbs().maxCoeff();
  for (int k = 1; k <= L.kmax(); ++k)
    noise = std::max(noise, std::abs(L.coeff(k)) * std::pow(R0, k));

  CVector moments(nMoments + 1);
  moments[0] = L.coeff(0);
  int kept = 0;
  for (int k = 1; k <= nMoments; ++k) {
    const Complex c = L.coeff(-k);
    if (std::abs(c) * std::pow(R0, -k) <= 5.0 * noise) {
      moments[k] = 0.0;
    } else {
      moments[k] = 0.5 * c;  // exterior expansion H = m_0 + 2 sum m_k z^-k
      ++kept;
    }
  }

  double clipped = 0.0;
  CircleMeasure nu = CircleMeasure::fromMoments(moments, 1024, &clipped);
  if (info) {
    info->clippedMass = clipped;
    info->keptModes = kept;
    info->noiseFloor = noise;
    info->massGap = std::abs(L.coeff(0) - 1.0);
  }
  return nu;
}

}  // namespace loewner
