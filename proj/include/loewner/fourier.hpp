// Spectral toolbox: trigonometric and Laurent series on the unit circle,
// circle-homeomorphism lifts, and the rotation cohomological equation.
// All grids are uniform, theta_j = 2*pi*j/M, and all transforms go through
// the FFT, so sizes should be powers of two for speed (not correctness).
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace loewner {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform angle grid theta_j = 2*pi*j/m, j = 0..m-1.
RVector thetaGrid(int m);

/// Points e^{i theta_j} on the same grid.
CVector circleGrid(int m);

/// Forward DFT, X_m = sum_j x_j e^{-2 pi i j m / M} (no normalization).
CVector dft(const CVector& x);

/// Inverse DFT, x_j = (1/M) sum_m X_m e^{+2 pi i j m / M}.
CVector idft(const CVector& X);

/// Continuous argument along a sample path: a_0 = Arg(w_0), increments taken
/// in (-pi, pi]. Requires consecutive points to subtend less than pi.
RVector unwrappedAngles(const CVector& points);

// ---------------------------------------------------------------------------
/// Finite two-sided series  f(z) = sum_{k=kmin}^{kmax} c_k z^k, the basic
/// representation of maps analytic on an annulus around the unit circle.
class LaurentSeries {
 public:
  LaurentSeries() : kmin_(0) { coeffs_.resize(1); coeffs_[0] = 0.0; }
  LaurentSeries(CVector coeffs, int kmin);

  /// Interpolate samples f(e^{i theta_j}) on the m-point grid; modes are
  /// assigned to k in [-m/2, m/2).
  static LaurentSeries fromCircleSamples(const CVector& samples);

  /// Same from samples on |z| = radius (coefficients rescaled by radius^-k).
  static LaurentSeries fromSamplesOnCircle(const CVector& samples, double radius);

  int kmin() const { return kmin_; }
  int kmax() const { return kmin_ + static_cast<int>(coeffs_.size()) - 1; }
  const CVector& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;

  Complex eval(Complex z) const;
  Complex derivEval(Complex z) const;
  LaurentSeries derivative() const;

  /// Fast simultaneous evaluation at radius * e^{i theta_j}, j = 0..m-1.
  CVector samplesOnCircle(int m, double radius = 1.0) const;

  /// Drop leading/trailing coefficients below tol * max|c_k|.
  LaurentSeries truncated(double tol) const;

  /// sum_{k>0} |c_k| r^k + sum_{k<0} |c_k| r^k + |c_0|, an upper bound for
  /// |f| on |z| = r; used by annulus certification.
  double absBound(double radius) const;

 private:
  CVector coeffs_;  // coeffs_[i] multiplies z^{kmin_ + i}
  int kmin_;
};

// ---------------------------------------------------------------------------
/// Real 2*pi-periodic function f(theta) = c_0 + 2 Re sum_{k>=1} c_k e^{ik theta}
/// stored by its half-spectrum (c_0 real).
class TrigSeries {
 public:
  TrigSeries() { coeffs_.resize(1); coeffs_[0] = 0.0; }
  explicit TrigSeries(CVector halfSpectrum);

  static TrigSeries fromSamples(const RVector& values);
  static TrigSeries constant(double value);

  int modes() const { return static_cast<int>(coeffs_.size()) - 1; }
  const CVector& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;  // k >= 0; negative k handled by conjugacy

  double mean() const { return coeffs_[0].real(); }
  double eval(double theta) const;
  RVector eval(const RVector& thetas) const;
  RVector gridValues(int m) const;

  TrigSeries derivative() const;
  /// Drop trailing modes below tol * max|c_k|.
  TrigSeries truncated(double tol) const;
  /// Harmonic conjugate (Hilbert transform): cos k -> sin k, mean -> 0.
  TrigSeries conjugateFunction() const;
  /// Integral over [a, b] of f (mean term handled exactly).
  double integrate(double a, double b) const;

  double maxAbs(int m = 0) const;  // max over an m-point grid (default 8*modes)

  TrigSeries& operator+=(const TrigSeries& other);
  TrigSeries& operator*=(double s);

 private:
  CVector coeffs_;  // index k = 0..K
};

/// Analytic extension of a real periodic function to the annulus:
/// P(z) = c_0 + sum_{k>=1} (c_k z^k + conj(c_k) z^-k), real on |z| = 1.
LaurentSeries analyticExtension(const TrigSeries& p);

// ---------------------------------------------------------------------------
/// Orientation-preserving circle homeomorphism given by a degree-one lift
/// L(theta) = theta + p(theta) with p periodic and 1 + p' > 0.
class CircleHomeo {
 public:
  CircleHomeo() = default;
  explicit CircleHomeo(TrigSeries displacement);

  /// Fit from image samples w_j = h(e^{i theta_j}) on the m-point grid.
  /// Requires winding number one and consecutive-image gaps < pi.
  static CircleHomeo fitFromSamples(const CVector& imagePoints);

  const TrigSeries& displacement() const { return p_; }
  double lift(double theta) const { return theta + p_.eval(theta); }
  double liftDeriv(double theta) const { return 1.0 + dp_.eval(theta); }
  /// Solve lift(theta) = target by Newton (the lift is strictly increasing).
  double invertLift(double target) const;

  Complex apply(Complex xi) const;
  Complex applyInverse(Complex xi) const;

  double minLiftDerivative() const { return minDeriv_; }

 private:
  TrigSeries p_;
  TrigSeries dp_;
  double minDeriv_ = 1.0;
};

// ---------------------------------------------------------------------------
/// Solve v(theta + 2 pi alpha) - v(theta) = rhs(theta) coefficientwise,
/// v_k = rhs_k / (e^{2 pi i k alpha} - 1), normalized so mean(v) = 0.
/// The mean of rhs is ignored (it must be removed by the caller).
/// Throws std::runtime_error naming the frequency if a divisor falls below
/// divisorFloor.
TrigSeries solveRotationCohomology(const TrigSeries& rhs, double alpha,
                                   double divisorFloor);

}  // namespace loewner
