// Exact integer and rational helpers shared by every module.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ltwist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct PrimePower {
  std::int64_t prime;
  int exponent;
};

/// Trial-division factorization, primes in increasing order. n >= 1.
std::vector<PrimePower> factorize(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);
int mobius(std::int64_t n);
/// Product of the distinct primes dividing n; radical(1) == 1.
std::int64_t radical(std::int64_t n);
bool is_squarefree(std::int64_t n);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// All positive divisors of n in ascending order.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Non-negative residue of n mod m (m > 0).
inline std::int64_t mod_floor(std::int64_t n, std::int64_t m) {
  const std::int64_t r = n % m;
  return r < 0 ? r + m : r;
}

/// b^e with overflow detection (throws std::overflow_error).
std::int64_t checked_pow(std::int64_t base, int exponent);

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t base, std::int64_t exponent, std::int64_t m);

/// p-adic valuation of n != 0.
int valuation(std::int64_t n, std::int64_t p);

bool is_integer(const Rational& x);

/// The exact rational k-th root of x if one exists. Negative x is
/// accepted only for odd k.
std::optional<Rational> exact_root(const Rational& x, int k);

/// x^e for integer e (negative exponents invert).
Rational rational_pow(const Rational& x, int e);

/// Parses "p/q", integers, and finite decimals such as "0.3" or "-1.25e2"
/// into an exact rational. Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

double to_double(const Rational& x);

}  // namespace ltwist
