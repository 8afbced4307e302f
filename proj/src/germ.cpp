#include "loewner/germ.hpp"

#include <cmath>
#include <stdexcept>

namespace loewner {

Germ Germ::linear(double alpha) {
  Germ f;
  f.kind_ = Kind::Linear;
  f.alpha_ = alpha - std::floor(alpha);
  f.lambda_ = std::polar(1.0, kTwoPi * f.alpha_);
  return f;
}

Germ Germ::moebius(double alpha, Complex b) {
  if (std::abs(b) == 0.0) return linear(alpha);
  Germ f;
  f.kind_ = Kind::Moebius;
  f.alpha_ = alpha - std::floor(alpha);
  f.lambda_ = std::polar(1.0, kTwoPi * f.alpha_);
  if (std::abs(f.lambda_ - 1.0) < 1e-12)
    throw std::invalid_argument("Germ::moebius: multiplier 1 has no second fixed point");
  f.b_ = b;
  f.z1_ = (1.0 - f.lambda_) / b;
  // H has a pole at -z1; stay away from it.
  f.domainRadius_ = 0.9 * std::abs(f.z1_);
  return f;
}

Germ Germ::polynomial(double alpha, const CVector& higherCoeffs) {
  Germ f;
  f.kind_ = Kind::Polynomial;
  f.alpha_ = alpha - std::floor(alpha);
  f.lambda_ = std::polar(1.0, kTwoPi * f.alpha_);
  f.c_ = higherCoeffs;
  double total = 0.0;
  for (int i = 0; i < higherCoeffs.size(); ++i) total += std::abs(higherCoeffs[i]);
  if (total == 0.0) return linear(alpha);
  // Largest rho with sum (i+2)|c_i| rho^{i+1} <= 1/2: H is then univalent on
  // |w| < rho (derivative stays in the half-plane Re > 1/2).
  auto bound = [&](double rho) {
    double s = 0.0;
    for (int i = 0; i < f.c_.size(); ++i)
      s += (i + 2) * std::abs(f.c_[i]) * std::pow(rho, i + 1);
    return s;
  };
  double lo = 0.0, hi = 1.0;
  while (bound(hi) <= 0.5 && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) <= 0.5 ? lo : hi) = mid;
  }
  if (lo <= 0.0)
    throw std::invalid_argument("Germ::polynomial: no certifiable disk");
  f.domainRadius_ = lo;
  return f;
}

Complex Germ::linearize(Complex w) const {
  switch (kind_) {
    case Kind::Linear: return w;
    case Kind::Moebius: return z1_ * w / (z1_ + w);
    case Kind::Polynomial: {
      Complex acc = 0.0;
      for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) acc = (acc + c_[i]) * w;
      return w + acc * w;  // w + sum c_i w^{i+2}
    }
  }
  return w;
}

Complex Germ::linearizeDeriv(Complex w) const {
  switch (kind_) {
    case Kind::Linear: return 1.0;
    case Kind::Moebius: {
      const Complex d = z1_ + w;
      return z1_ * z1_ / (d * d);
    }
    case Kind::Polynomial: {
      Complex acc = 0.0;
      for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
        acc = acc * w + double(i + 2) * c_[i];
      return 1.0 + acc * w;
    }
  }
  return 1.0;
}

Complex Germ::delinearize(Complex z) const {
  switch (kind_) {
    case Kind::Linear: return z;
    case Kind::Moebius: return z1_ * z / (z1_ - z);
    case Kind::Polynomial: {
      Complex w = z;  // H is a near-identity on the certified disk
      for (int it = 0; it < 60; ++it) {
        const Complex step = (linearize(w) - z) / linearizeDeriv(w);
        w -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
      }
      if (std::abs(w) > domainRadius_ * (1.0 + 1e-9))
        throw std::domain_error("Germ::delinearize: point outside the certified disk");
      return w;
    }
  }
  return z;
}

Complex Germ::eval(Complex z) const {
  switch (kind_) {
    case Kind::Linear: return lambda_ * z;
    case Kind::Moebius: return lambda_ * z / (1.0 - b_ * z);
    case Kind::Polynomial: return linearize(lambda_ * delinearize(z));
  }
  return z;
}

Complex Germ::deriv(Complex z) const {
  switch (kind_) {
    case Kind::Linear: return lambda_;
    case Kind::Moebius: {
      const Complex d = 1.0 - b_ * z;
      return lambda_ / (d * d);
    }
    case Kind::Polynomial: {
      const Complex w = delinearize(z);
      return linearizeDeriv(lambda_ * w) * lambda_ / linearizeDeriv(w);
    }
  }
  return lambda_;
}

}  // namespace loewner
