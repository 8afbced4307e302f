#include "loewner/fourier.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

namespace loewner {

RVector thetaGrid(int m) {
  RVector g(m);
  for (int j = 0; j < m; ++j) g[j] = kTwoPi * j / m;
  return g;
}

CVector circleGrid(int m) {
  CVector g(m);
  for (int j = 0; j < m; ++j) g[j] = std::polar(1.0, kTwoPi * j / m);
  return g;
}

CVector dft(const CVector& x) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(x.data(), x.data() + x.size());
  std::vector<Complex> out(in.size());
  fft.fwd(out, in);
  return Eigen::Map<CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

CVector idft(const CVector& X) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(X.data(), X.data() + X.size());
  std::vector<Complex> out(in.size());
  fft.inv(out, in);
  return Eigen::Map<CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

RVector unwrappedAngles(const CVector& points) {
  const auto n = points.size();
  RVector a(n);
  if (n == 0) return a;
  a[0] = std::arg(points[0]);
  for (Eigen::Index j = 1; j < n; ++j) {
    const double inc = std::arg(points[j] / points[j - 1]);
    a[j] = a[j - 1] + inc;
  }
  return a;
}

// --------------------------------------------------------------------------
// LaurentSeries

LaurentSeries::LaurentSeries(CVector coeffs, int kmin)
    : coeffs_(std::move(coeffs)), kmin_(kmin) {
  if (coeffs_.size() == 0) throw std::invalid_argument("LaurentSeries: empty coefficient vector");
}

LaurentSeries LaurentSeries::fromCircleSamples(const CVector& samples) {
  const int m = static_cast<int>(samples.size());
  if (m < 2) throw std::invalid_argument("LaurentSeries: need at least 2 samples");
  CVector X = dft(samples) / double(m);
  // Reorder modes m' in [0, M) to k in [-M/2, M/2): negative k live at m' = k + M.
  CVector c(m);
  const int kmin = -m / 2;
  for (int i = 0; i < m; ++i) {
    const int k = kmin + i;
    const int slot = (k + m) % m;
    c[i] = X[slot];
  }
  return LaurentSeries(std::move(c), kmin);
}

LaurentSeries LaurentSeries::fromSamplesOnCircle(const CVector& samples, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("LaurentSeries: radius must be positive");
  LaurentSeries s = fromCircleSamples(samples);
  for (int k = s.kmin(); k <= s.kmax(); ++k)
    s.coeffs_[k - s.kmin_] *= std::pow(radius, -k);
  return s;
}

Complex LaurentSeries::coeff(int k) const {
  if (k < kmin() || k > kmax()) return 0.0;
  return coeffs_[k - kmin_];
}

Complex LaurentSeries::eval(Complex z) const {
  // Split at k = 0 and run Horner on each side.
  const int kmax_ = kmax();
  Complex plus = 0.0;   // sum_{k >= max(kmin,0)} c_k z^k, Horner in z
  Complex minus = 0.0;  // sum_{k <= min(kmax,-1)} c_k z^k, Horner in 1/z
  if (kmax_ >= 0) {
    for (int k = kmax_; k >= std::max(kmin_, 0); --k)
      plus = plus * z + coeff(k);
    plus *= std::pow(z, std::max(kmin_, 0));
  }
  if (kmin_ <= -1) {
    const Complex w = 1.0 / z;
    for (int k = kmin_; k <= std::min(kmax_, -1); ++k)
      minus = minus * w + coeff(k);
    minus *= std::pow(w, -std::min(kmax_, -1));
  }
  return plus + minus;
}

Complex LaurentSeries::derivEval(Complex z) const { return derivative().eval(z); }

LaurentSeries LaurentSeries::derivative() const {
  // d/dz sum c_k z^k = sum k c_k z^{k-1}
  CVector c(coeffs_.size());
  for (int i = 0; i < coeffs_.size(); ++i)
    c[i] = double(kmin_ + i) * coeffs_[i];
  return LaurentSeries(std::move(c), kmin_ - 1);
}

CVector LaurentSeries::samplesOnCircle(int m, double radius) const {
  // Build an m-slot spectrum with c_k radius^k folded into slot k mod m.
  CVector spec = CVector::Zero(m);
  for (int k = kmin_; k <= kmax(); ++k) {
    const int slot = ((k % m) + m) % m;
    spec[slot] += coeff(k) * std::pow(radius, k);
  }
  return idft(spec) * double(m);
}

LaurentSeries LaurentSeries::truncated(double tol) const {
  double maxAbs = 0.0;
  for (int i = 0; i < coeffs_.size(); ++i) maxAbs = std::max(maxAbs, std::abs(coeffs_[i]));
  const double cut = tol * maxAbs;
  int lo = 0, hi = static_cast<int>(coeffs_.size()) - 1;
  while (lo < hi && std::abs(coeffs_[lo]) <= cut) ++lo;
  while (hi > lo && std::abs(coeffs_[hi]) <= cut) --hi;
  CVector c = coeffs_.segment(lo, hi - lo + 1);
  return LaurentSeries(std::move(c), kmin_ + lo);
}

double LaurentSeries::absBound(double radius) const {
  double s = 0.0;
  for (int k = kmin_; k <= kmax(); ++k)
    s += std::abs(coeff(k)) * std::pow(radius, k);
  return s;
}

// --------------------------------------------------------------------------
// TrigSeries

TrigSeries::TrigSeries(CVector halfSpectrum) : coeffs_(std::move(halfSpectrum)) {
  if (coeffs_.size() == 0) throw std::invalid_argument("TrigSeries: empty spectrum");
  coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
}

TrigSeries TrigSeries::fromSamples(const RVector& values) {
  const int m = static_cast<int>(values.size());
  if (m < 2) throw std::invalid_argument("TrigSeries: need at least 2 samples");
  CVector x(m);
  for (int j = 0; j < m; ++j) x[j] = values[j];
  CVector X = dft(x) / double(m);
  const int half = m / 2;
  CVector c(half + 1);
  for (int k = 0; k <= half; ++k) c[k] = X[k];
  // The Nyquist mode is shared between +half and -half; store half weight so
  // that 2 Re c_half e^{i half theta_j} reproduces the on-grid values.
  if (2 * half == m && half >= 1) c[half] *= 0.5;
  return TrigSeries(std::move(c));
}

TrigSeries TrigSeries::constant(double value) {
  CVector c(1);
  c[0] = value;
  return TrigSeries(std::move(c));
}

Complex TrigSeries::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[k];
}

double TrigSeries::eval(double theta) const {
  const int kMax = modes();
  const Complex z = std::polar(1.0, theta);
  Complex acc = 0.0;  // Horner for sum_{k>=1} c_k z^k
  for (int k = kMax; k >= 1; --k) acc = (acc + coeffs_[k]) * z;
  return coeffs_[0].real() + 2.0 * acc.real();
}

RVector TrigSeries::eval(const RVector& thetas) const {
  RVector out(thetas.size());
  for (Eigen::Index j = 0; j < thetas.size(); ++j) out[j] = eval(thetas[j]);
  return out;
}

RVector TrigSeries::gridValues(int m) const {
  // Assemble the full two-sided spectrum folded into m slots.
  CVector spec = CVector::Zero(m);
  spec[0] = coeffs_[0];
  for (int k = 1; k <= modes(); ++k) {
    spec[k % m] += coeffs_[k];
    spec[((-k % m) + m) % m] += std::conj(coeffs_[k]);
  }
  CVector x = idft(spec) * double(m);
  RVector out(m);
  for (int j = 0; j < m; ++j) out[j] = x[j].real();
  return out;
}

TrigSeries TrigSeries::derivative() const {
  CVector c(coeffs_.size());
  for (int k = 0; k <= modes(); ++k) c[k] = Complex(0.0, k) * coeffs_[k];
  return TrigSeries(std::move(c));
}

TrigSeries TrigSeries::truncated(double tol) const {
  double mx = 0.0;
  for (int k = 0; k <= modes(); ++k) mx = std::max(mx, std::abs(coeffs_[k]));
  if (mx == 0.0) return TrigSeries::constant(0.0);
  int last = 0;
  for (int k = 0; k <= modes(); ++k)
    if (std::abs(coeffs_[k]) >= tol * mx) last = k;
  return TrigSeries(coeffs_.head(last + 1));
}

TrigSeries TrigSeries::conjugateFunction() const {
  CVector c(coeffs_.size());
  c[0] = 0.0;
  for (int k = 1; k <= modes(); ++k) c[k] = Complex(0.0, -1.0) * coeffs_[k];
  return TrigSeries(std::move(c));
}

double TrigSeries::integrate(double a, double b) const {
  // Periodic antiderivative of the oscillatory part plus exact mean term.
  double s = coeffs_[0].real() * (b - a);
  for (int k = 1; k <= modes(); ++k) {
    const Complex ik(0.0, k);
    const Complex term = coeffs_[k] * (std::polar(1.0, k * b) - std::polar(1.0, k * a)) / ik;
    s += 2.0 * term.real();
  }
  return s;
}

double TrigSeries::maxAbs(int m) const {
  if (m <= 0) m = std::max(64, 8 * modes());
  RVector v = gridValues(m);
  return v.cwiseAbs().maxCoeff();
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& other) {
  if (other.coeffs_.size() > coeffs_.size()) {
    CVector c = other.coeffs_;
    c.head(coeffs_.size()) += coeffs_;
    coeffs_ = std::move(c);
  } else {
    coeffs_.head(other.coeffs_.size()) += other.coeffs_;
  }
  coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
  return *this;
}

TrigSeries& TrigSeries::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

LaurentSeries analyticExtension(const TrigSeries& p) {
  const int kMax = p.modes();
  CVector c(2 * kMax + 1);
  for (int k = -kMax; k <= kMax; ++k) {
    const Complex ck = (k >= 0) ? p.coeff(k) : std::conj(p.coeff(-k));
    c[k + kMax] = ck;
  }
  return LaurentSeries(std::move(c), -kMax);
}

// --------------------------------------------------------------------------
// CircleHomeo

CircleHomeo::CircleHomeo(TrigSeries displacement)
    // Dropping sub-roundoff tail modes keeps lift evaluation cheap when the
    // displacement came from a large sample grid.
    : p_(displacement.truncated(1e-14)), dp_(p_.derivative()) {
  minDeriv_ = 1.0;
  const int m = std::max(256, 8 * p_.modes());
  RVector d = dp_.gridValues(m);
  for (int j = 0; j < m; ++j) minDeriv_ = std::min(minDeriv_, 1.0 + d[j]);
  if (minDeriv_ <= 0.0)
    throw std::runtime_error("CircleHomeo: lift is not strictly increasing (min derivative " +
                             std::to_string(minDeriv_) + ")");
}

CircleHomeo CircleHomeo::fitFromSamples(const CVector& imagePoints) {
  const int m = static_cast<int>(imagePoints.size());
  RVector a = unwrappedAngles(imagePoints);
  // Degree check: going once around the grid must advance the image by 2*pi.
  const double wind = a[m - 1] - a[0] + std::arg(imagePoints[0] / imagePoints[m - 1]);
  if (std::abs(wind - kTwoPi) > 1e-6)
    throw std::runtime_error("CircleHomeo: image winding number is not one");
  RVector p(m);
  for (int j = 0; j < m; ++j) p[j] = a[j] - kTwoPi * j / m;
  return CircleHomeo(TrigSeries::fromSamples(p));
}

double CircleHomeo::invertLift(double target) const {
  double theta = target - p_.mean();
  double f = lift(theta) - target;
  // lift(theta + 2 pi k) = lift(theta) + 2 pi k, so whole turns bracket the
  // unique root; Newton with a bisection safeguard then always converges,
  // even where the lift derivative is close to zero.
  double lo = theta - kTwoPi * std::max(0.0, std::ceil(f / kTwoPi));
  double hi = theta + kTwoPi * std::max(0.0, std::ceil(-f / kTwoPi));
  const double scale = 1.0 + std::abs(target);
  for (int it = 0; it < 200; ++it) {
    double next = theta - f / liftDeriv(theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    theta = next;
    f = lift(theta) - target;
    if (std::abs(f) < 1e-14 * scale) return theta;
    (f > 0.0 ? hi : lo) = theta;
    if (hi - lo < 1e-15 * scale) return theta;
  }
  throw std::runtime_error("CircleHomeo: lift inversion did not converge");
}

Complex CircleHomeo::apply(Complex xi) const {
  const double theta = std::arg(xi);
  return std::polar(1.0, lift(theta));
}

Complex CircleHomeo::applyInverse(Complex xi) const {
  const double theta = invertLift(std::arg(xi));
  return std::polar(1.0, theta);
}

// --------------------------------------------------------------------------

TrigSeries solveRotationCohomology(const TrigSeries& rhs, double alpha,
                                   double divisorFloor) {
  const int kMax = rhs.modes();
  CVector c(kMax + 1);
  c[0] = 0.0;
  for (int k = 1; k <= kMax; ++k) {
    const Complex div = std::polar(1.0, kTwoPi * k * alpha) - 1.0;
    if (std::abs(div) < divisorFloor)
      throw std::runtime_error("solveRotationCohomology: small divisor |e^{2 pi i k alpha}-1| = " +
                               std::to_string(std::abs(div)) + " below floor at k = " +
                               std::to_string(k));
    c[k] = rhs.coeff(k) / div;
  }
  return TrigSeries(std::move(c));
}

}  // namespace loewner
