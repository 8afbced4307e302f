#include "loewner/confmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace loewner {

JordanCurveSamples JordanCurveSamples::fromPoints(const CVector& points) {
  const int m = static_cast<int>(points.size());
  if (m < 16) throw std::invalid_argument("curve needs at least 16 samples");
  for (int j = 0; j < m; ++j)
    if (!(std::abs(points[j]) > 0.0))
      throw std::invalid_argument("curve passes through the origin");

  // Winding one with a monotone polar angle is exactly what the circle-homeo
  // fit of the angle lift certifies (on the sample grid), and the lift is the
  // change of variable between the curve parameter and the polar angle.
  CircleHomeo angleLift;
  try {
    angleLift = CircleHomeo::fitFromSamples(points);
  } catch (const std::exception& e) {
    throw std::invalid_argument(
        std::string("curve is not starlike about the origin: ") + e.what());
  }

  JordanCurveSamples out;
  out.points_ = points;

  // Spectral resample of log|curve| onto a uniform grid in the polar angle.
  const LaurentSeries curveSeries = LaurentSeries::fromCircleSamples(points);
  const RVector sigma = thetaGrid(m);
  RVector logr(m);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = angleLift.invertLift(sigma[j]);
    const double r = std::abs(curveSeries.eval(std::polar(1.0, t)));
    if (!(r > 0.0))
      throw std::invalid_argument("curve resample collapsed to the origin");
    logr[j] = std::log(r);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  out.logRadius_ = TrigSeries::fromSamples(logr).truncated(1e-15);
  out.minRadius_ = rmin;
  out.maxRadius_ = rmax;
  return out;
}

JordanCurveSamples JordanCurveSamples::circle(double radius, Complex center,
                                              int gridSize) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (std::abs(center) >= radius)
    throw std::invalid_argument("circle must enclose the origin");
  const RVector th = thetaGrid(gridSize);
  CVector pts(gridSize);
  for (int j = 0; j < gridSize; ++j)
    pts[j] = center + std::polar(radius, th[j]);
  return fromPoints(pts);
}

JordanCurveSamples JordanCurveSamples::ellipse(double a, double b, int gridSize) {
  if (!(a > 0.0 && b > 0.0))
    throw std::invalid_argument("ellipse semi-axes must be positive");
  const RVector th = thetaGrid(gridSize);
  CVector pts(gridSize);
  for (int j = 0; j < gridSize; ++j)
    pts[j] = Complex(a * std::cos(th[j]), b * std::sin(th[j]));
  return fromPoints(pts);
}

// ---------------------------------------------------------------------------

ExteriorMap exteriorMap(const JordanCurveSamples& curve,
                        const ExteriorMapOptions& options) {
  if (curve.size() == 0) throw std::invalid_argument("empty curve");
  const int m = options.gridSize;
  if (m < 64) throw std::invalid_argument("gridSize must be at least 64");

  const RVector theta = thetaGrid(m);
  const TrigSeries& logRho = curve.logRadius();

  RVector d = RVector::Zero(m);  // correspondence displacement sigma - theta
  RVector u(m);
  std::vector<double> history;
  bool settled = false;
  int sweeps = 0;
  int stalled = 0;
  double prev = std::numeric_limits<double>::infinity();
  while (sweeps < options.maxIter) {
    ++sweeps;
    for (int j = 0; j < m; ++j) u[j] = logRho.eval(theta[j] + d[j]);
    const TrigSeries U = TrigSeries::fromSamples(u);
    const RVector next = -U.conjugateFunction().gridValues(m);
    const double res = (next - d).cwiseAbs().maxCoeff();
    d = next;
    history.push_back(res);
    if (res < options.iterTol) {
      settled = true;
      break;
    }
    // Contraction down to the roundoff floor also counts as converged; the
    // boundary residual check below still gates the final quality.
    stalled = (res > 0.9 * prev) ? stalled + 1 : 0;
    prev = res;
    if (res < 1e-10 && stalled >= 3) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    std::ostringstream msg;
    msg << "Theodorsen iteration did not reach " << options.iterTol << " within "
        << options.maxIter << " sweeps; residual tail:";
    const size_t first = history.size() > 5 ? history.size() - 5 : 0;
    for (size_t i = first; i < history.size(); ++i) msg << ' ' << history[i];
    throw std::runtime_error(msg.str());
  }

  ExteriorMap out;
  out.curve_ = curve;
  out.iterations_ = sweeps;
  out.sigma_ = CircleHomeo(TrigSeries::fromSamples(d));

  for (int j = 0; j < m; ++j) u[j] = logRho.eval(theta[j] + d[j]);
  out.capacity_ = TrigSeries::fromSamples(u).mean();

  // F = log(phi(z)/z) from its boundary values u + i(sigma - theta). Energy
  // in positive modes measures how far the data is from being the trace of a
  // function analytic outside the disk.
  CVector boundary(m);
  for (int j = 0; j < m; ++j) boundary[j] = Complex(u[j], d[j]);
  const LaurentSeries fit = LaurentSeries::fromCircleSamples(boundary);
  double leaked = 0.0;
  for (int k = 1; k <= fit.kmax(); ++k)
    leaked = std::max(leaked, std::abs(fit.coeff(k)));
  out.analyticityResidual_ = leaked;

  const int kmin = fit.kmin();
  CVector fc(-kmin + 1);
  for (int k = kmin; k <= 0; ++k) fc[k - kmin] = fit.coeff(k);
  out.F_ = LaurentSeries(fc, kmin).truncated(1e-15);
  out.Fderiv_ = out.F_.derivative();

  // Self-reported boundary fidelity: phi(e^{i theta_j}) against the curve
  // point at polar angle sigma_j.
  const CVector FonCircle = out.F_.samplesOnCircle(m);
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const Complex phij = std::polar(1.0, theta[j]) * std::exp(FonCircle[j]);
    const double sj = theta[j] + d[j];
    const Complex target = std::polar(std::exp(logRho.eval(sj)), sj);
    worst = std::max(worst, std::abs(phij - target));
  }
  out.boundaryResidual_ = worst;
  out.converged_ = worst <= options.boundaryTol;
  return out;
}

Complex ExteriorMap::phi(Complex z) const {
  if (std::abs(z) < 1.0 - 1e-12)
    throw std::domain_error("ExteriorMap::phi: point inside the unit disk");
  return z * std::exp(F_.eval(z));
}

Complex ExteriorMap::phiDeriv(Complex z) const {
  if (std::abs(z) < 1.0 - 1e-12)
    throw std::domain_error("ExteriorMap::phiDeriv: point inside the unit disk");
  return std::exp(F_.eval(z)) * (1.0 + z * Fderiv_.eval(z));
}

Complex ExteriorMap::psi(Complex w) const {
  const double aw = std::abs(w);
  if (aw < curve_.minRadius() * (1.0 - 1e-12))
    throw std::domain_error("ExteriorMap::psi: point inside the hull");

  Complex z;
  if (aw > 3.0 * curve_.maxRadius()) {
    // Asymptotically phi(z) = e^c z + a0 + O(1/z) with a0 = e^c * F_{-1}.
    const Complex a0 = std::exp(capacity_) * F_.coeff(-1);
    z = (w - a0) * std::exp(-capacity_);
  } else {
    const double sw = std::arg(w);
    const double thetaSeed = sigma_.invertLift(sw);
    const double rhoSw = std::exp(curve_.logRadius().eval(sw));
    z = std::polar(std::max(1.0, aw / rhoSw), thetaSeed);
  }

  const double tol = 1e-13 * (1.0 + aw);
  for (int it = 0; it < 80; ++it) {
    const Complex f = phi(z) - w;
    if (std::abs(f) <= tol) return z;
    const Complex step = f / phiDeriv(z);
    Complex zn = z - step;
    double damp = 1.0;
    while (std::abs(zn) < 1.0 && damp > 1e-4) {
      damp *= 0.5;
      zn = z - damp * step;
    }
    if (std::abs(zn) < 1.0) zn /= std::abs(zn);
    z = zn;
  }
  if (std::abs(phi(z) - w) <= 1e-9 * (1.0 + aw)) return z;
  throw std::runtime_error(
      "ExteriorMap::psi: Newton did not converge (point may be inside the hull)");
}

// ---------------------------------------------------------------------------

JordanCurveSamples hullBoundaryFromInvariantCurve(const CircleMap& g, double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in (0,1)");
  if (!g.linearizer())
    throw std::invalid_argument(
        "invariant curve requires a map with an attached linearizer");
  const ConformalConjugacy& h = *g.linearizer();
  const double r = 1.0 / rho;
  if (r > h.annulusOuter())
    throw std::invalid_argument(
        "1/rho exceeds the certified annulus of the linearizer");

  const int m = 1024;
  const RVector th = thetaGrid(m);
  CVector pts(m);
  for (int j = 0; j < m; ++j) pts[j] = h.eval(std::polar(r, th[j]));
  return JordanCurveSamples::fromPoints(pts);
}

CircleHomeo welding(const ExteriorMap& outside, const CircleHomeo& interiorPolarAngle) {
  const int m = 2048;
  const RVector th = thetaGrid(m);
  RVector disp(m);
  for (int j = 0; j < m; ++j) {
    const double s = outside.correspondence().lift(th[j]);
    disp[j] = interiorPolarAngle.invertLift(s) - th[j];
  }
  return CircleHomeo(TrigSeries::fromSamples(disp));
}

}  // namespace loewner
