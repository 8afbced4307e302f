// The capacity-parametrized evolution of circle diffeomorphisms: exact flow
// by hull conjugation, its vector-field generator from the 2-conformal
// measure, explicit Euler integration, driving-measure extraction from
// difference quotients of the hull maps, and the germ bridge producing flow
// states from interior linearizers.
#pragma once

#include <optional>
#include <vector>

#include "loewner/circlemap.hpp"
#include "loewner/confmap.hpp"
#include "loewner/germ.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/measures.hpp"

namespace loewner {

/// A point on an integral curve: the map at time t together with the hull
/// data that produced it (absent for Euler-integrated states).
struct FlowState {
  FlowState(double t, CircleMap m) : time(t), map(std::move(m)) {}
  double time;
  CircleMap map;
  std::optional<ExteriorMap> hull;
  double capacityGap = 0.0;     // |capacity(hull) - time|
  double invariantRadius = 0.0; // radius parameter of the invariant curve used
  int rootIterations = 0;       // capacity root-finding steps
};

// ---------------------------------------------------------------------------
/// The generator at a map g: chi(z) = z * H(z) with H the Herglotz transform
/// of the reflected 2-conformal measure of g, and X = g' chi - chi o g.
class GeneratorField {
 public:
  const CircleMap& map() const { return g_; }
  const CircleMeasure& measure() const { return solve_.measure; }
  const CircleMeasure& reflectedMeasure() const { return refl_; }
  const HerglotzField& herglotz() const { return H_; }
  double solverResidual() const { return solve_.residual; }
  SolveResult::Route solverRoute() const { return solve_.route; }

  /// chi for |z| >= 1; on the circle itself the boundary values come from
  /// the exact moment series (the measure is absolutely continuous here).
  Complex chi(Complex z) const;
  /// X(g)(z) = g'(z) chi(z) - chi(g(z)) for |z| >= 1 in g's annulus.
  Complex fieldAt(Complex z) const;
  /// X on the construction grid of g (exactly on the circle).
  const CVector& circleField() const { return Xcircle_; }
  /// sup_j |Re(conj(g(xi_j)) X_j)|: X is tangent to the circle.
  double tangencyResidual() const { return tangency_; }

 private:
  friend GeneratorField generator(const CircleMap&, const SolveOptions&);
  GeneratorField(CircleMap g, SolveResult solve);
  CircleMap g_;
  SolveResult solve_;
  CircleMeasure refl_;
  HerglotzField H_;
  CVector Xcircle_;
  double tangency_ = 0.0;
};

/// Solves for the 2-conformal measure of g and assembles the field. Throws
/// std::runtime_error when the measure solver does not reach its tolerance.
GeneratorField generator(const CircleMap& g, const SolveOptions& options = {});

// ---------------------------------------------------------------------------
struct PhiExactOptions {
  double capacityTol = 1e-10;  // |capacity - t| at the accepted root
  int maxRootIterations = 80;
  int gridSize = 2048;         // sample grid for the evolved map
  ExteriorMapOptions exterior;
};

/// Exact flow for linearizable g: finds the invariant curve whose hull has
/// capacity t, conjugates g by the exterior map of that hull, and returns
/// the evolved map with its series-backed linearizer attached.
FlowState phiExact(const CircleMap& g, double t, const PhiExactOptions& options = {});

// ---------------------------------------------------------------------------
struct FlowStepInfo {
  double time = 0.0;                   // time after the step
  double preProjectionResidual = 0.0;  // sup ||g + dt X| - 1| before projection
  double postFitResidual = 0.0;        // sup ||series| - 1| on the doubled grid
  double measureResidual = 0.0;        // conformal-measure residual behind X
  double rotationMismatch = 0.0;       // mean conjugacy defect in maintenance
  double fourierDistanceToRotation = 0.0;  // l1 coefficient gap to the rigid rotation
  bool linearizerMaintained = false;
};

struct FlowOptions {
  // The Euler scheme drifts the rotation number by O(dt x horizon), and the
  // maintained linearizer honestly reports that drift as a conformal-measure
  // residual (~1e-6 over 100 steps). The measure enters each step multiplied
  // by dt, so a 1e-5 residual perturbs the endpoint by ~1e-9 -- far below
  // the scheme's own O(dt) error at desk-scale horizons.
  FlowOptions() { measure.tol = 1e-5; }
  SolveOptions measure;
  double rejectResidual = 1e-9;  // 10x the evaluation tolerance
  bool maintainLinearizer = true;
};

struct FlowTrajectory {
  FlowTrajectory(FlowState start, FlowState end)
      : initial(std::move(start)), terminal(std::move(end)) {}
  FlowState initial;
  FlowState terminal;
  std::vector<FlowStepInfo> steps;
};

/// Explicit Euler steps g <- g + dt X(g), re-projected to the circle and
/// refit each step. An approximate linearizer is carried along by one Newton
/// correction of the conjugacy per step so the measure solver can stay on
/// its fast route; the solver residual against the actual map is recorded
/// honestly either way. Throws when the post-projection circle residual
/// exceeds options.rejectResidual (step too large or annulus exhausted).
FlowTrajectory integrateFlow(const CircleMap& g0, double tEnd, double dt,
                             const FlowOptions& options = {});

// ---------------------------------------------------------------------------
struct LoewnerMeasureInfo {
  double clippedMass = 0.0;  // negative mass removed by the reconstruction
  int keptModes = 0;         // moments above the empirical noise floor
  double noiseFloor = 0.0;   // sample-level noise estimate from spurious modes
  double massGap = 0.0;      // |moment 0 - 1| before renormalization
};

/// Driving measure of the evolution between two exact-flow states at times
/// t < s: the difference quotient (psi_t o phi_s - id)/(s - t) on |z| = 2,
/// divided by z, is an approximate Herglotz transform whose Laurent modes
/// are the moments of the reflected 2-conformal measure at time t.
CircleMeasure loewnerMeasure(const FlowState& earlier, const FlowState& later,
                             int nMoments = 64, LoewnerMeasureInfo* info = nullptr);

// ---------------------------------------------------------------------------
/// Boundary of the invariant domain H_germ({|w| <= rho}) of the germ.
JordanCurveSamples germHullBoundary(const Germ& germ, double rho, int gridSize = 1024);

/// The circle map induced by the germ at capacity t: root-finds rho with
/// capacity(germHullBoundary) = t, conjugates the germ by the exterior map,
/// and attaches the series-backed linearizer.
FlowState germFlowState(const Germ& germ, double t,
                        const PhiExactOptions& options = {});

struct BackwardLimitReport {
  std::vector<double> times;
  std::vector<double> supDistance;   // sup-circle distance of g_t to the rotation
  std::vector<double> capacityGap;   // |capacity(K_t) - t|
  std::vector<double> rho;           // linearizer-coordinate radii of K_t
  bool monotone = false;             // distances strictly decrease toward -inf
};

/// Evaluates the backward behavior of the germ-induced family on a strictly
/// decreasing list of times.
BackwardLimitReport backwardLimitCheck(const Germ& germ,
                                       const std::vector<double>& tList,
                                       const PhiExactOptions& options = {});

}  // namespace loewner
