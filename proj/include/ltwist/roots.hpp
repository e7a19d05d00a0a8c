#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>

namespace ltwist {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// e(x) = exp(2 pi i x).
std::complex<double> e_of(double x);

/// An exact value that is either zero or e(k/n) with 0 <= k < n, gcd(k, n) = 1.
class RootOfUnity {
 public:
  RootOfUnity() = default;  // the value 1

  static RootOfUnity zero();
  static RootOfUnity one() { return {}; }
  /// e(k/n) for any integer k and n > 0.
  static RootOfUnity from_fraction(std::int64_t k, std::int64_t n);

  bool is_zero() const { return zero_; }
  std::int64_t numerator() const { return k_; }
  std::int64_t denominator() const { return n_; }

  RootOfUnity operator*(const RootOfUnity& other) const;
  RootOfUnity conj() const;
  std::complex<double> to_complex() const;

  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  bool zero_ = false;
  std::int64_t k_ = 0;
  std::int64_t n_ = 1;
};

std::ostream& operator<<(std::ostream& os, const RootOfUnity& r);

}  // namespace ltwist
