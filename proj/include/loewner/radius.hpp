// Conformal radii of the interior linearization domains along the
// capacity-parametrized family of a germ, the welding conjugacies k_t, and
// the two boundary identities coupling their time derivatives to the
// Herglotz boundary values of the reflected 2-conformal measures.
#pragma once

#include <vector>

#include "loewner/flow.hpp"
#include "loewner/fourier.hpp"
#include "loewner/germ.hpp"

namespace loewner {

/// Family data on a uniform time grid. For each t the interior domain
/// D_t = H({|w| < rho(t)}) has conformal radius r(t) = H'(0) rho(t); the
/// welding k_t (circle restriction of the evolved linearizer) conjugates
/// the rotation to the evolved map. Centered differences in t give r'(t)
/// and the lift velocity of k_t at interior grid times.
struct RadiusTrace {
  std::vector<double> times;
  std::vector<double> radii;          // r(t), strictly increasing
  std::vector<double> capacities;     // accepted hull capacities (= times)
  std::vector<FlowState> states;      // evolved maps with hulls and linearizers
  std::vector<CircleHomeo> weldings;  // k_t
  int gridSize = 0;                   // angular grid for sampled derivatives
  double siegelRadius = 0.0;          // r bound: H'(0) x certified domain radius
  // Entry i of the derivative arrays belongs to times[i + 1].
  std::vector<double> radiusDot;
  std::vector<RVector> weldingLiftDot;  // d/dt of the welding lift at theta_j
};

/// Builds the trace on a uniform, strictly increasing time grid (at least
/// three points). Throws std::invalid_argument for non-uniform grids and
/// propagates mapping failures from the flow.
RadiusTrace radiusTrace(const Germ& germ, const std::vector<double>& tList,
                        int gridSize = 1024, const PhiExactOptions& options = {});

/// Residuals of the boundary identities at each interior grid time, with
/// P_t + iQ_t the boundary values of the Herglotz transform of the
/// reflected 2-conformal measure of the evolved map (closed form via the
/// linearizer):
///   real:     sup_theta | P_t(K_t(theta)) - (r'/r) K_t'(theta) |
///   imag:     sup_theta | d/dt K_t(theta) + Q_t(K_t(theta)) |
///   integral: | mean_theta P_t(K_t(theta)) - r'/r |
/// where K_t is the lift of k_t.
struct RadiusIdentityReport {
  std::vector<double> times;  // interior grid times
  std::vector<double> realResidual;
  std::vector<double> imagResidual;
  std::vector<double> integralResidual;
  double maxRealResidual = 0.0;
  double maxImagResidual = 0.0;
  double maxIntegralResidual = 0.0;
};

RadiusIdentityReport verifyRadiusIdentities(const RadiusTrace& trace);

}  // namespace loewner
