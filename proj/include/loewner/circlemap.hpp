// Analytic orientation-preserving circle diffeomorphisms represented by
// truncated Laurent series on a certified annulus around the unit circle.
// Linearizable maps g = h o R_alpha o h^-1 carry their conjugacy h so that
// invariant curves and conformal measures have closed-form back ends.
#pragma once

#include <optional>

#include "loewner/fourier.hpp"

namespace loewner {

enum class RotationTag { Constructed, Estimated };

/// (sqrt(5)-1)/2, the inverse golden mean.
double goldenMean();
/// sqrt(2)-1.
double silverMean();

/// Continued-fraction admissibility filter: rejects rationals and numbers
/// with a huge partial quotient among the first 25 (near-resonance).
bool isAdmissibleRotation(double alpha);

// ---------------------------------------------------------------------------
/// Circle-preserving conformal conjugacy h, one of:
///   identity, a disk Moebius transform w -> (w+a)/(1+conj(a)w) with |a|<1,
///   a Fourier perturbation w -> w exp(i P(w)) with P the analytic
///   extension of a real trigonometric polynomial p, or a general map given
///   by its Laurent series on a decay-certified annulus.
class ConformalConjugacy {
 public:
  enum class Kind { Identity, Moebius, FourierPerturbation, AnnulusSeries };

  static ConformalConjugacy identity();
  static ConformalConjugacy moebius(Complex a);
  static ConformalConjugacy fourierPerturbation(const TrigSeries& p);
  /// Fit from samples h(e^{i theta_j}) of a circle-preserving map on the
  /// uniform grid; the trusted annulus comes from coefficient decay.
  static ConformalConjugacy annulusSeries(const CVector& circleSamples);

  Kind kind() const { return kind_; }
  Complex moebiusParameter() const { return a_; }
  const TrigSeries& perturbation() const { return p_; }

  Complex eval(Complex w) const;
  Complex deriv(Complex w) const;
  Complex inverse(Complex z) const;

  /// Annulus around |w| = 1 on which eval/deriv/inverse are trusted.
  double annulusInner() const { return rhoIn_; }
  double annulusOuter() const { return rhoOut_; }

  /// Restriction to the unit circle as a homeomorphism lift.
  const CircleHomeo& circleRestriction() const { return circle_; }

 private:
  ConformalConjugacy() = default;
  Kind kind_ = Kind::Identity;
  Complex a_ = 0.0;           // Moebius parameter
  TrigSeries p_;              // Fourier perturbation on the circle
  LaurentSeries pExt_;        // extension of p_, or the map itself (AnnulusSeries)
  LaurentSeries pExtDeriv_;
  double rhoIn_ = 1e-8, rhoOut_ = 1e8;
  CircleHomeo circle_;
};

// ---------------------------------------------------------------------------
/// Analytic circle diffeomorphism. Immutable; evaluation outside the
/// certified annulus throws std::domain_error.
class CircleMap {
 public:
  /// Fit from samples g(e^{i theta_j}) on a uniform grid. The samples must
  /// stay on the circle to within circleTol and wind exactly once. The
  /// certified annulus comes from coefficient decay, intersected with
  /// [capIn, capOut] when the caller knows an external domain restriction.
  static CircleMap fromCircleSamples(const CVector& samples, double rotation,
                                     RotationTag tag,
                                     std::optional<ConformalConjugacy> linearizer = {},
                                     double circleTol = 1e-8,
                                     double capIn = 0.0, double capOut = 1e300);

  /// Evaluation uses the Laurent series where the truncation is certified
  /// and falls back to the exact conjugacy route h(e^{2 pi i alpha} h^-1(z))
  /// on the rest of the annulus when a linearizer is attached.
  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;

  const LaurentSeries& series() const { return series_; }
  const LaurentSeries& derivativeSeries() const { return deriv_; }
  double annulusInner() const { return rhoIn_; }
  double annulusOuter() const { return rhoOut_; }
  double seriesAnnulusInner() const { return seriesIn_; }
  double seriesAnnulusOuter() const { return seriesOut_; }
  double rotationNumber() const { return rotation_; }
  RotationTag rotationTag() const { return tag_; }
  const std::optional<ConformalConjugacy>& linearizer() const { return linearizer_; }

  /// Lift G of the circle restriction, g(e^{i theta}) = e^{i G(theta)}.
  const CircleHomeo& angleMap() const { return angle_; }

  /// sup_j | |g(xi_j)| - 1 | over the construction grid.
  double circleResidual() const { return circleResidual_; }
  /// sup | conj(g(1/conj z)) - 1/g(z) | sampled just off the circle; small
  /// for genuine circle maps (they commute with inversion in the circle).
  double reflectionResidual() const { return reflectionResidual_; }

  int gridSize() const { return gridSize_; }

 private:
  CircleMap() = default;
  LaurentSeries series_, deriv_;
  double rhoIn_ = 1.0, rhoOut_ = 1.0;      // full certified annulus
  double seriesIn_ = 1.0, seriesOut_ = 1.0;  // where the truncated series is trusted
  double rotation_ = 0.0;
  RotationTag tag_ = RotationTag::Estimated;
  std::optional<ConformalConjugacy> linearizer_;
  CircleHomeo angle_;
  double circleResidual_ = 0.0, reflectionResidual_ = 0.0;
  int gridSize_ = 0;
};

/// Rigid rotation z -> e^{2 pi i alpha} z. Rejects non-admissible alpha
/// unless allowRational is set (test hook).
CircleMap makeRotation(double alpha, bool allowRational = false);

/// Linearizable map h o R_alpha o h^-1 sampled on a gridSize-point grid.
CircleMap makeLinearizable(double alpha, const ConformalConjugacy& h,
                           int gridSize = 2048);

/// Composition f o g as a circle map on the largest certified annulus.
CircleMap compose(const CircleMap& f, const CircleMap& g);

struct RotationEstimate {
  double value = 0.0;       // Birkhoff average of the lift displacement, mod 1
  double errorBound = 0.0;  // Poincare bound 1/n
  int iterations = 0;
};

RotationEstimate estimateRotationNumber(const CircleMap& g, int iterations,
                                        double theta0 = 0.0);

}  // namespace loewner
