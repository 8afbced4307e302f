// Probability measures on the unit circle: an absolutely continuous part
// sampled as a density against d(theta) on a uniform grid, plus finitely
// many atoms. Conformal-measure machinery for circle diffeomorphisms:
//   mu(g(E)) = int_E |g'|^s dmu.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loewner/circlemap.hpp"
#include "loewner/fourier.hpp"

namespace loewner {

struct Atom {
  Complex position;  // on the unit circle
  double mass = 0.0;
};

class CircleMeasure {
 public:
  /// Normalized Lebesgue measure: density 1/(2 pi), no atoms.
  static CircleMeasure lebesgue(int gridSize);

  /// Build from density samples on the uniform grid (values against dtheta)
  /// and atoms. Negative density below -1e-12 is an error; if renormalize is
  /// set the total mass is scaled to one.
  static CircleMeasure fromDensity(const RVector& densitySamples,
                                   std::vector<Atom> atoms = {},
                                   bool renormalize = true);

  /// Truncated moment reconstruction: density (1/2pi) sum m_k e^{ik theta}
  /// from m_k = moment(k), k = 0..n, clipped at zero. The clipped mass is
  /// reported and the result renormalized to moment(0).
  static CircleMeasure fromMoments(const CVector& moments, int gridSize,
                                   double* clippedMass = nullptr);

  int gridSize() const { return static_cast<int>(density_.size()); }
  const RVector& densitySamples() const { return density_; }
  const TrigSeries& densitySeries() const { return series_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double absolutelyContinuousMass() const { return kTwoPi * series_.mean(); }
  double atomicMass() const;
  double totalMass() const { return absolutelyContinuousMass() + atomicMass(); }

  /// int xi^{-k} dmu(xi); moment(0) is the total mass.
  Complex moment(int k) const;

  /// Measure of the arc {e^{i t} : t in [a, b)}, taken with length b - a
  /// in (0, 2 pi]; wraps around the cut.
  double arcMass(double a, double b) const;

  /// Image under the conjugation xi -> conj(xi) (an involution).
  CircleMeasure reflected() const;

 private:
  CircleMeasure() = default;
  RVector density_;
  TrigSeries series_;
  std::vector<Atom> atoms_;
};

/// Image measure (g_* mu)(E) = mu(g^-1 E): density transforms by
/// (f o G^-1) (G^-1)', atoms move by g.
CircleMeasure pushforward(const CircleMeasure& mu, const CircleMap& g);

/// Closed-form s-conformal measure for a linearizable map: the image under
/// the conjugacy h of c |h'|^s dlambda, with density c |h'(h^-1)|^{s-1}.
/// Requires g to carry its linearizer.
CircleMeasure conformalMeasureOracle(const CircleMap& g, double s);

struct SolveOptions {
  double divisorFloor = 1e-12;
  int birkhoffIterates = 2048;
  double tol = 1e-8;
  bool forceBirkhoff = false;  // ignore the linearizer (test hook)
};

struct SolveResult {
  enum class Route { Linearizer, Birkhoff };
  CircleMeasure measure = CircleMeasure::lebesgue(8);
  Route route = Route::Linearizer;
  double residual = 0.0;   // sup |f(G(t)) - |g'|^{s-1} f(t)| / max f
  bool converged = false;  // residual <= tol
  std::string diagnostics;
};

/// Solve the density functional equation f o g = |g'|^{s-1} f by the
/// cohomological equation u o g - u = (s-1) log|g'| for u = log f.
/// Uses the linearizer when available (coefficientwise small-divisor solve),
/// otherwise a weighted Birkhoff sum along the orbit of the fitted lift.
SolveResult conformalMeasureSolve(const CircleMap& g, double s,
                                  const SolveOptions& options = {});

struct ConformalReport {
  double maxDiscrepancy = 0.0;
  int arcs = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo check of mu(g(E)) = int_E |g'|^s dmu over random arcs E.
/// Both sides are evaluated spectrally (exact for band-limited densities).
ConformalReport verifyConformal(const CircleMeasure& mu, const CircleMap& g,
                                double s, int nArcs, std::uint64_t seed);

/// max_{|k| <= nMoments} |moment_k(mu1) - moment_k(mu2)|.
double weakDistance(const CircleMeasure& mu1, const CircleMeasure& mu2,
                    int nMoments);

}  // namespace loewner
