#include "ltwist/arith.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ltwist {

std::vector<PrimePower> factorize(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (const auto& [p, e] : factorize(n)) result = result / p * (p - 1);
  return result;
}

int mobius(std::int64_t n) {
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::int64_t radical(std::int64_t n) {
  std::int64_t r = 1;
  for (const auto& pe : factorize(n)) r *= pe.prime;
  return r;
}

bool is_squarefree(std::int64_t n) { return mobius(n) != 0; }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (const auto& pe : factorize(n)) out.push_back(pe.prime);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> divs{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t count = divs.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::int64_t checked_pow(std::int64_t base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("checked_pow: negative exponent");
  std::int64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(result, base, &result))
      throw std::overflow_error("checked_pow: overflow");
  }
  return result;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exponent, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod_floor(base, m);
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

int valuation(std::int64_t n, std::int64_t p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool is_integer(const Rational& x) {
  return boost::multiprecision::denominator(x) == 1;
}

namespace {

// Exact k-th root of a non-negative integer, if it is a perfect power.
std::optional<BigInt> integer_root(const BigInt& n, int k) {
  if (n < 2) return n;
  // Bisection on [0, 2^(bits/k + 1)].
  const auto bits = boost::multiprecision::msb(n) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / static_cast<unsigned>(k) + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, static_cast<unsigned>(k)) <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (boost::multiprecision::pow(lo, static_cast<unsigned>(k)) == n) return lo;
  return std::nullopt;
}

}  // namespace

std::optional<Rational> exact_root(const Rational& x, int k) {
  if (k < 1) throw std::invalid_argument("exact_root: k must be positive");
  if (k == 1) return x;
  const bool negative = x < 0;
  if (negative && k % 2 == 0) return std::nullopt;
  const BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(x));
  const BigInt den = boost::multiprecision::denominator(x);
  auto rn = integer_root(num, k);
  auto rd = integer_root(den, k);
  if (!rn || !rd) return std::nullopt;
  Rational r(*rn, *rd);
  return negative ? Rational(-r) : r;
}

Rational rational_pow(const Rational& x, int e) {
  if (e < 0) {
    if (x == 0) throw std::domain_error("rational_pow: zero to a negative power");
    return rational_pow(Rational(1) / x, -e);
  }
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  };
  if (s.empty()) return fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) return fail();
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  BigInt digits = 0;
  int scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return fail();
    const std::string rest = s.substr(i + 1);
    std::size_t used = 0;
    try {
      exponent = std::stoi(rest, &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != rest.size()) return fail();
  }
  Rational r(digits);
  r *= rational_pow(Rational(10), exponent - scale);
  return negative ? Rational(-r) : r;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace ltwist
