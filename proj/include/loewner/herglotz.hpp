// Herglotz transform of a circle measure on the exterior disk:
//   H(z) = int (xi + 1/z)/(xi - 1/z) dmu(xi),  |z| > 1,
// with Re H > 0 and H(inf) = mu(S^1). The absolutely continuous part enters
// through the one-sided moment series H = m_0 + 2 sum_{k>=1} m_k z^{-k};
// atoms are kept in closed form throughout.
#pragma once

#include <cstdint>
#include <vector>

#include "loewner/measures.hpp"

namespace loewner {

class HerglotzField {
 public:
  explicit HerglotzField(CircleMeasure mu);

  const CircleMeasure& measure() const { return mu_; }

  /// Pointwise evaluation for |z| > 1 (throws std::domain_error otherwise).
  Complex eval(Complex z) const;

  /// H on the grid (1 + eps) e^{i theta_j}: FFT for the moment series plus a
  /// closed-form atom sweep. Returns values split into real/imaginary parts.
  void valuesAtRadius(double rho, int gridSize, RVector& P, RVector& Q) const;

  struct BoundaryValues {
    RVector theta;
    RVector P, Q;                        // Richardson-extrapolated radial limits
    std::vector<std::uint8_t> flagged;   // extrapolation unreliable (near atoms)
    double epsCoarse = 0.0, epsFine = 0.0;
  };

  /// Radial limits by linear Richardson extrapolation in eps over the two
  /// finest entries of epsList (needs at least two). Grid points where the
  /// two-radius difference is large are flagged; expected near atoms.
  BoundaryValues boundaryValues(const std::vector<double>& epsList = {1e-3, 5e-4},
                                int gridSize = 2048) const;

  /// Exact a.e. radial limits: conjugate moment series for the AC part and
  /// the cotangent kernel for atoms (Q diverges at reflected atom angles).
  double boundaryP(double theta) const;
  double boundaryQ(double theta) const;

 private:
  CircleMeasure mu_;
  CVector moments_;  // m_k, k = 0..K, of the AC part only
};

struct PoltoratskiResult {
  std::vector<double> thresholds;
  std::vector<CircleMeasure> measures;  // (pi/2) t 1_{|Q|>t} dlambda per threshold
  std::vector<int> superlevelCounts;    // grid points with |Q| > t (>= 4 wanted)
  std::vector<int> gridSizes;           // adaptive fine grids, one per threshold
};

/// Threshold reconstruction of the reflected singular part: the measures
/// (pi/2) t 1_{|Q| > t} dlambda converge weakly to r_* mu_sing as t grows.
/// Grids refine with t so that the mass quantization error stays below
/// massTol; thresholds must be increasing.
PoltoratskiResult poltoratskiReconstruct(const CircleMeasure& mu,
                                         const std::vector<double>& thresholds,
                                         double massTol = 0.025);

}  // namespace loewner
