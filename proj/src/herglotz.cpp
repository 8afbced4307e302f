#include "loewner/herglotz.hpp"

#include <algorithm>
#include <cmath>

namespace loewner {

HerglotzField::HerglotzField(CircleMeasure mu) : mu_(std::move(mu)) {
  // AC moments m_k = 2 pi c_k straight from the density half-spectrum.
  const TrigSeries& f = mu_.densitySeries();
  moments_.resize(f.modes() + 1);
  for (int k = 0; k <= f.modes(); ++k) moments_[k] = kTwoPi * f.coeff(k);
}

Complex HerglotzField::eval(Complex z) const {
  if (!(std::abs(z) > 1.0))
    throw std::domain_error("HerglotzField::eval: defined on |z| > 1");
  const Complex w = 1.0 / z;
  // Horner in w for m_0 + 2 sum_{k>=1} m_k w^k.
  Complex acc = 0.0;
  for (int k = static_cast<int>(moments_.size()) - 1; k >= 1; --k)
    acc = (acc + moments_[k]) * w;
  Complex H = moments_[0] + 2.0 * acc;
  for (const Atom& a : mu_.atoms())
    H += a.mass * (a.position + w) / (a.position - w);
  return H;
}

void HerglotzField::valuesAtRadius(double rho, int gridSize, RVector& P, RVector& Q) const {
  if (!(rho > 1.0)) throw std::domain_error("HerglotzField::valuesAtRadius: need rho > 1");
  // Assemble sum_k (2 m_k rho^-k) e^{-ik theta} as an inverse DFT: mode -k
  // lives in slot (gridSize - k).
  CVector spec = CVector::Zero(gridSize);
  spec[0] = moments_[0];
  const int kMax = std::min<int>(static_cast<int>(moments_.size()) - 1, gridSize - 1);
  double rk = 1.0;
  for (int k = 1; k <= kMax; ++k) {
    rk /= rho;
    spec[gridSize - k] += 2.0 * moments_[k] * rk;
  }
  CVector vals = idft(spec) * double(gridSize);
  P.resize(gridSize);
  Q.resize(gridSize);
  for (int j = 0; j < gridSize; ++j) {
    Complex H = vals[j];
    const Complex w = std::polar(1.0 / rho, -kTwoPi * j / gridSize);  // 1/z
    for (const Atom& a : mu_.atoms())
      H += a.mass * (a.position + w) / (a.position - w);
    P[j] = H.real();
    Q[j] = H.imag();
  }
}

HerglotzField::BoundaryValues HerglotzField::boundaryValues(
    const std::vector<double>& epsList, int gridSize) const {
  if (epsList.size() < 2)
    throw std::invalid_argument("boundaryValues: need at least two extrapolation radii");
  std::vector<double> eps = epsList;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  const double e1 = eps[eps.size() - 2];  // coarser of the two finest
  const double e2 = eps[eps.size() - 1];  // finest
  if (!(e2 > 0.0) || e1 == e2)
    throw std::invalid_argument("boundaryValues: radii must be positive and distinct");

  RVector P1, Q1, P2, Q2;
  valuesAtRadius(1.0 + e1, gridSize, P1, Q1);
  valuesAtRadius(1.0 + e2, gridSize, P2, Q2);

  BoundaryValues out;
  out.theta = thetaGrid(gridSize);
  out.epsCoarse = e1;
  out.epsFine = e2;
  out.P.resize(gridSize);
  out.Q.resize(gridSize);
  out.flagged.assign(gridSize, 0);
  const double w = e2 / (e1 - e2);
  for (int j = 0; j < gridSize; ++j) {
    out.P[j] = P2[j] + (P2[j] - P1[j]) * w;
    out.Q[j] = Q2[j] + (Q2[j] - Q1[j]) * w;
    // Linear-in-eps behaviour fails where the limit diverges (atoms): flag
    // points whose two-radius difference is no longer small. |Q| is left out
    // of the scale on purpose; it blows up near atoms and would mask them.
    const double jump = std::abs(P2[j] - P1[j]) + std::abs(Q2[j] - Q1[j]);
    if (jump > 0.05 * (1.0 + std::abs(out.P[j]))) out.flagged[j] = 1;
  }
  return out;
}

double HerglotzField::boundaryP(double theta) const {
  // AC radial limit: m_0 + 2 Re sum m_k e^{-ik theta}; atoms contribute no
  // real part away from their reflected angle.
  Complex acc = 0.0;
  const Complex w = std::polar(1.0, -theta);
  for (int k = static_cast<int>(moments_.size()) - 1; k >= 1; --k)
    acc = (acc + moments_[k]) * w;
  return moments_[0].real() + 2.0 * acc.real();
}

double HerglotzField::boundaryQ(double theta) const {
  Complex acc = 0.0;
  const Complex w = std::polar(1.0, -theta);
  for (int k = static_cast<int>(moments_.size()) - 1; k >= 1; --k)
    acc = (acc + moments_[k]) * w;
  double q = 2.0 * acc.imag();
  for (const Atom& a : mu_.atoms()) {
    const double half = 0.5 * (theta + std::arg(a.position));
    q -= a.mass / std::tan(half);
  }
  return q;
}

PoltoratskiResult poltoratskiReconstruct(const CircleMeasure& mu,
                                         const std::vector<double>& thresholds,
                                         double massTol) {
  PoltoratskiResult out;
  out.thresholds = thresholds;
  HerglotzField H(mu);
  const TrigSeries& f = mu.densitySeries();

  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    if (t <= 0.0) throw std::invalid_argument("poltoratskiReconstruct: thresholds must be positive");
    if (i > 0 && thresholds[i] <= thresholds[i - 1])
      throw std::invalid_argument("poltoratskiReconstruct: thresholds must increase");

    // Quantization of the superlevel set contributes ~ t * h to the mass;
    // refine until that is below massTol.
    int m = 1 << 14;
    while (m < (1 << 23) && kTwoPi / m * t > massTol) m *= 2;

    // Q on the fine grid: conjugate series by FFT, atoms in closed form.
    CVector spec = CVector::Zero(m);
    for (int k = 1; k <= f.modes() && k < m; ++k)
      spec[m - k] += 2.0 * kTwoPi * f.coeff(k);
    CVector acPart = idft(spec) * double(m);

    std::vector<double> atomAngle, atomMass;
    for (const Atom& a : mu.atoms()) {
      atomAngle.push_back(std::arg(a.position));
      atomMass.push_back(a.mass);
    }

    RVector density = RVector::Zero(m);
    int count = 0;
    for (int j = 0; j < m; ++j) {
      double q = acPart[j].imag();
      for (std::size_t a = 0; a < atomAngle.size(); ++a) {
        const double s = std::tan(0.5 * (kTwoPi * j / m + atomAngle[a]));
        q -= (s == 0.0) ? 1e300 : atomMass[a] / s;
      }
      if (std::abs(q) > t) {
        density[j] = t / 4.0;  // (pi/2) t against dlambda = t/4 against dtheta
        ++count;
      }
    }
    out.superlevelCounts.push_back(count);
    out.gridSizes.push_back(m);
    out.measures.push_back(CircleMeasure::fromDensity(density, {}, false));
  }
  return out;
}

}  // namespace loewner
