// Concrete degree-2 fixture families.
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltwist/arith.hpp"
#include "ltwist/series.hpp"

namespace ltwist {

namespace {

struct NttPrime {
  std::uint32_t modulus;
  std::uint32_t generator;
};

// 2-adic orders 23, 22, 21, 24 respectively; product ~ 2^119.2.
constexpr NttPrime kNttPrimes[] = {
    {998244353u, 3u}, {985661441u, 3u}, {1004535809u, 3u}, {754974721u, 11u}};

std::uint32_t power(std::uint64_t base, std::uint64_t e, std::uint32_t m) {
  std::uint64_t r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void ntt(std::vector<std::uint32_t>& a, bool inverse, const NttPrime& prime) {
  const std::uint32_t m = prime.modulus;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint32_t w = power(prime.generator, (m - 1) / len, m);
    if (inverse) w = power(w, m - 2, m);
    std::vector<std::uint32_t> ws(len / 2);
    ws[0] = 1;
    for (std::size_t k = 1; k < len / 2; ++k)
      ws[k] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(ws[k - 1]) * w % m);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::uint32_t u = a[i + k];
        const std::uint32_t v =
            static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i + k + len / 2]) * ws[k] % m);
        a[i + k] = u + v >= m ? u + v - m : u + v;
        a[i + k + len / 2] = u >= v ? u - v : u + m - v;
      }
    }
  }
  if (inverse) {
    const std::uint32_t inv_n = power(n, m - 2, m);
    for (auto& x : a) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * inv_n % m);
  }
}

// Coefficients 0..N-1 of prod (1 - q^k)^24 reduced mod one prime, computed
// as the eighth power of Jacobi's prod (1 - q^k)^3 = sum (-1)^m (2m+1) q^{m(m+1)/2}.
std::vector<std::uint32_t> eta24_mod(std::int64_t N, const NttPrime& prime) {
  const std::uint32_t m = prime.modulus;
  std::vector<std::uint32_t> s(static_cast<std::size_t>(N), 0);
  for (std::int64_t k = 0; k * (k + 1) / 2 < N; ++k) {
    const std::int64_t c = (k % 2 == 0 ? 1 : -1) * (2 * k + 1);
    s[k * (k + 1) / 2] = static_cast<std::uint32_t>(mod_floor(c, m));
  }
  std::size_t size = 1;
  while (size < static_cast<std::size_t>(2 * N)) size <<= 1;
  for (int round = 0; round < 3; ++round) {
    std::vector<std::uint32_t> f(size, 0);
    std::copy(s.begin(), s.end(), f.begin());
    ntt(f, false, prime);
    for (auto& x : f) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * x % m);
    ntt(f, true, prime);
    std::copy(f.begin(), f.begin() + N, s.begin());
  }
  return s;
}

}  // namespace

CoefficientSeries unit_series(std::int64_t N) {
  std::vector<Complex> a(static_cast<std::size_t>(N), Complex{});
  if (N >= 1) a[0] = 1.0;
  return CoefficientSeries("unit", std::move(a), 0.0, 1.0);
}

CoefficientSeries ones_series(std::int64_t N) {
  return CoefficientSeries("zeta", std::vector<Complex>(static_cast<std::size_t>(N), 1.0), 0.0,
                           1.0);
}

CoefficientSeries divisor_series(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("divisor_series: N must be positive");
  std::vector<std::int32_t> d(static_cast<std::size_t>(N + 1), 0);
  for (std::int64_t i = 1; i <= N; ++i)
    for (std::int64_t j = i; j <= N; j += i) ++d[j];
  std::vector<Complex> a(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) a[n - 1] = static_cast<double>(d[n]);
  // d(n) <= 2 sqrt(n).
  return CoefficientSeries("zeta^2", std::move(a), 0.5, 2.0);
}

std::vector<__int128> ramanujan_tau(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("ramanujan_tau: N must be positive");
  // 2N must fit the smallest 2-adic order (2^21); |tau(n)| <= d(n) n^{11/2}
  // stays below half the CRT modulus up to this bound.
  if (N > (std::int64_t{1} << 20)) throw std::invalid_argument("ramanujan_tau: N > 2^20");

  std::vector<std::future<std::vector<std::uint32_t>>> jobs;
  for (const auto& prime : kNttPrimes)
    jobs.push_back(std::async(std::launch::async, eta24_mod, N, prime));
  std::vector<std::vector<std::uint32_t>> residues;
  for (auto& j : jobs) residues.push_back(j.get());

  // Garner reconstruction into [0, P), then the symmetric representative.
  constexpr std::size_t r = std::size(kNttPrimes);
  unsigned __int128 P = 1;
  for (const auto& prime : kNttPrimes) P *= prime.modulus;
  std::uint32_t inverse[r][r] = {};
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < i; ++j)
      inverse[j][i] = power(kNttPrimes[j].modulus, kNttPrimes[i].modulus - 2, kNttPrimes[i].modulus);

  std::vector<__int128> tau(static_cast<std::size_t>(N + 1), 0);
  for (std::int64_t idx = 0; idx < N; ++idx) {
    std::uint64_t digit[r];
    for (std::size_t i = 0; i < r; ++i) {
      const std::uint64_t mi = kNttPrimes[i].modulus;
      std::uint64_t x = residues[i][idx];
      for (std::size_t j = 0; j < i; ++j) {
        x = (x + mi - digit[j] % mi) % mi;
        x = x * inverse[j][i] % mi;
      }
      digit[i] = x;
    }
    unsigned __int128 value = 0;
    for (std::size_t i = r; i-- > 0;) value = value * kNttPrimes[i].modulus + digit[i];
    tau[idx + 1] = value > P / 2 ? -static_cast<__int128>(P - value) : static_cast<__int128>(value);
  }
  return tau;
}

CoefficientSeries delta_normalized(std::int64_t N) {
  const auto tau = ramanujan_tau(N);
  std::vector<Complex> a(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) {
    const long double t = static_cast<long double>(tau[n]);
    a[n - 1] = static_cast<double>(t / std::pow(static_cast<long double>(n), 5.5L));
  }
  // Deligne: |tau(n)| n^{-11/2} <= d(n) <= 2 sqrt(n).
  return CoefficientSeries("delta", std::move(a), 0.5, 2.0);
}

CoefficientSeries zeta_times_l(const DirichletCharacter& chi, std::int64_t N) {
  const auto ones = ones_series(N);
  auto product = dirichlet_convolve(ones, twist_by_character(ones, chi));
  return CoefficientSeries("zeta*L(chi mod " + std::to_string(chi.modulus()) + ")",
                           {product.coefficients().begin(), product.coefficients().end()},
                           product.growth_exponent(), product.growth_constant());
}

}  // namespace ltwist
