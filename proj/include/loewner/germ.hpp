// Analytic germs fixing the origin with an indifferent multiplier
// lambda = e^{2 pi i alpha}, restricted to the linearizable families the
// rest of the library can certify: f = H o (lambda .) o H^{-1} with H the
// interior linearizer, H(0) = 0 and H'(0) real positive. Disks |w| < rho in
// linearizer coordinates map to invariant domains H({|w| < rho}) of f.
#pragma once

#include "loewner/fourier.hpp"

namespace loewner {

class Germ {
 public:
  enum class Kind { Linear, Moebius, Polynomial };

  /// f(z) = lambda z.
  static Germ linear(double alpha);
  /// f(z) = lambda z / (1 - b z); the second fixed point z1 = (1-lambda)/b
  /// gives the closed-form linearizer H(w) = z1 w / (z1 + w).
  static Germ moebius(double alpha, Complex b);
  /// Linearizer H(w) = w + sum_i c_i w^{i+2} (higherCoeffs[i] multiplies
  /// w^{i+2}); certified on the disk where sup |H' - 1| <= 1/2.
  static Germ polynomial(double alpha, const CVector& higherCoeffs);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  Complex multiplier() const { return lambda_; }
  /// Radius of the w-disk on which the linearizer is certified univalent.
  double domainRadius() const { return domainRadius_; }
  /// H'(0), the ratio between linearizer-coordinate radii and conformal radii.
  double conformalScale() const { return scale_; }

  Complex linearize(Complex w) const;       // H
  Complex linearizeDeriv(Complex w) const;  // H'
  Complex delinearize(Complex z) const;     // H^{-1}
  Complex eval(Complex z) const;            // f
  Complex deriv(Complex z) const;           // f'

 private:
  Germ() = default;
  Kind kind_ = Kind::Linear;
  double alpha_ = 0.0;
  Complex lambda_ = 1.0;
  Complex b_ = 0.0;   // Moebius parameter
  Complex z1_ = 0.0;  // second fixed point of the Moebius germ
  CVector c_;         // polynomial linearizer coefficients (w^2, w^3, ...)
  double domainRadius_ = 1e300;
  double scale_ = 1.0;
};

}  // namespace loewner
