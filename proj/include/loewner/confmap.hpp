// Exterior Riemann maps of starlike Jordan hulls by Theodorsen conjugate-
// function iteration. The normalized map phi: {|z| > 1} -> outside(K) has
//   phi(z) = e^c z + a_0 + a_1/z + ...,  c = logarithmic capacity of K,
// and is represented through F(z) = log(phi(z)/z), holomorphic outside the
// disk with F(inf) = c real.
#pragma once

#include "loewner/circlemap.hpp"
#include "loewner/fourier.hpp"

namespace loewner {

/// Closed curve winding once around the origin, sampled on a uniform grid in
/// its own parameter. Theodorsen needs the polar graph rho(sigma), which is
/// resampled spectrally; construction fails for curves that are not starlike
/// about the origin.
class JordanCurveSamples {
 public:
  /// Empty curve; fill via the factories.
  JordanCurveSamples() = default;

  static JordanCurveSamples fromPoints(const CVector& points);
  static JordanCurveSamples circle(double radius, Complex center = 0.0, int gridSize = 1024);
  static JordanCurveSamples ellipse(double a, double b, int gridSize = 1024);

  int size() const { return static_cast<int>(points_.size()); }
  const CVector& points() const { return points_; }
  /// log of the polar radius as a function of the polar angle sigma.
  const TrigSeries& logRadius() const { return logRadius_; }
  double minRadius() const { return minRadius_; }
  double maxRadius() const { return maxRadius_; }

 private:
  CVector points_;
  TrigSeries logRadius_;
  double minRadius_ = 0.0, maxRadius_ = 0.0;
};

struct ExteriorMapOptions {
  int gridSize = 2048;
  int maxIter = 200;
  double iterTol = 1e-12;      // sup-change of the correspondence per sweep
  double boundaryTol = 1e-9;   // accepted sup-distance of phi(S^1) to the curve
};

class ExteriorMap {
 public:
  double capacity() const { return capacity_; }
  /// Boundary correspondence: polar angle on the curve of phi(e^{i theta}).
  const CircleHomeo& correspondence() const { return sigma_; }
  const LaurentSeries& logSeries() const { return F_; }
  const JordanCurveSamples& curve() const { return curve_; }

  Complex phi(Complex z) const;       // |z| >= 1
  Complex phiDeriv(Complex z) const;
  /// Inverse map, Newton-iterated from a boundary-correspondence seed (near
  /// the hull) or the asymptotic linear seed (far away).
  Complex psi(Complex w) const;

  double boundaryResidual() const { return boundaryResidual_; }
  /// Energy leaked into positive modes of F by the discretization; a
  /// self-consistency diagnostic.
  double analyticityResidual() const { return analyticityResidual_; }
  int iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 private:
  friend ExteriorMap exteriorMap(const JordanCurveSamples&, const ExteriorMapOptions&);
  ExteriorMap() = default;
  JordanCurveSamples curve_;
  LaurentSeries F_, Fderiv_;
  CircleHomeo sigma_;
  double capacity_ = 0.0;
  double boundaryResidual_ = 0.0, analyticityResidual_ = 0.0;
  int iterations_ = 0;
  bool converged_ = false;
};

/// Theodorsen iteration sigma <- theta - K[log rho o sigma] (K the circle
/// conjugation operator). Converges geometrically while |d log rho / d sigma|
/// stays below one; throws std::runtime_error with the residual tail on
/// failure to converge within maxIter.
ExteriorMap exteriorMap(const JordanCurveSamples& curve,
                        const ExteriorMapOptions& options = {});

/// Outer boundary of the invariant hull of a linearizable circle map: the
/// curve h({|w| = 1/rho}) for rho in (0,1). Requires the linearizer and
/// 1/rho inside its certified annulus.
JordanCurveSamples hullBoundaryFromInvariantCurve(const CircleMap& g, double rho);

/// Conformal welding against an interior parametrization of the same curve,
/// given by its polar-angle lift s -> arg(interior boundary point at s).
/// Returns w with w = (interior angle) o phi on the unit circle.
CircleHomeo welding(const ExteriorMap& outside, const CircleHomeo& interiorPolarAngle);

}  // namespace loewner
