#include "ltwist/roots.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ltwist/arith.hpp"

namespace ltwist {

std::complex<double> e_of(double x) {
  const double t = 2.0 * kPi * x;
  return {std::cos(t), std::sin(t)};
}

RootOfUnity RootOfUnity::zero() {
  RootOfUnity r;
  r.zero_ = true;
  return r;
}

RootOfUnity RootOfUnity::from_fraction(std::int64_t k, std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("RootOfUnity: denominator must be positive");
  k = mod_floor(k, n);
  const std::int64_t g = std::gcd(k, n);
  RootOfUnity r;
  r.k_ = k / g;
  r.n_ = n / g;
  return r;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& other) const {
  if (zero_ || other.zero_) return zero();
  const std::int64_t l = std::lcm(n_, other.n_);
  return from_fraction(k_ * (l / n_) + other.k_ * (l / other.n_), l);
}

RootOfUnity RootOfUnity::conj() const {
  if (zero_) return *this;
  return from_fraction(-k_, n_);
}

std::complex<double> RootOfUnity::to_complex() const {
  if (zero_) return {0.0, 0.0};
  // Exact values on the axes; otherwise evaluate at the representative
  // nearest to zero so the angle stays small.
  if ((4 * k_) % n_ == 0) {
    switch (4 * k_ / n_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const std::int64_t centred = 2 * k_ > n_ ? k_ - n_ : k_;
  return e_of(static_cast<double>(centred) / static_cast<double>(n_));
}

std::ostream& operator<<(std::ostream& os, const RootOfUnity& r) {
  if (r.is_zero()) return os << "0";
  return os << "e(" << r.numerator() << "/" << r.denominator() << ")";
}

}  // namespace ltwist
