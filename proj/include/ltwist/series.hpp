// Truncated Dirichlet series a(1..N) and the local-factor machinery built
// on them.
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ltwist/characters.hpp"

namespace ltwist {

using Complex = std::complex<double>;

/// Coefficients a(1..N). Growth metadata: |a(n)| <= growth_constant * n^growth_exponent,
/// used only for tail bounds.
class CoefficientSeries {
 public:
  CoefficientSeries() = default;
  CoefficientSeries(std::string label, std::vector<Complex> coefficients,
                    double growth_exponent = 0.0, double growth_constant = 1.0);

  const std::string& label() const { return label_; }
  std::int64_t size() const { return static_cast<std::int64_t>(a_.size()); }
  double growth_exponent() const { return growth_exponent_; }
  double growth_constant() const { return growth_constant_; }

  /// a(n) for 1 <= n <= N; anything else throws std::out_of_range.
  const Complex& operator()(std::int64_t n) const;
  bool contains(std::int64_t n) const { return n >= 1 && n <= size(); }

  /// a(1..N) as a 0-based view.
  std::span<const Complex> coefficients() const { return a_; }

 private:
  std::string label_;
  std::vector<Complex> a_;
  double growth_exponent_ = 0.0;
  double growth_constant_ = 1.0;
};

/// c(n) = sum_{d | n} x(d) y(n/d), truncated at min(Nx, Ny).
CoefficientSeries dirichlet_convolve(const CoefficientSeries& x, const CoefficientSeries& y);

/// Zeroes every a(n) with gcd(n, M) > 1.
CoefficientSeries restrict_coprime(const CoefficientSeries& x, std::int64_t M);

/// b(n) = a(n) chi(n).
CoefficientSeries twist_by_character(const CoefficientSeries& x, const DirichletCharacter& chi);

/// Inverse local factor F_p^{-1}(s) = sum_{l <= degree} A_l p^{-ls}, A_0 = 1.
struct LocalFactorInverse {
  std::int64_t p = 0;
  int degree = 0;
  std::vector<Complex> A;  // A_0 .. A_degree
  double worst_residual = 0.0;
};

struct NotSplit {
  std::int64_t p = 0;
  int max_degree = 0;
  std::string reason;
};

class InsufficientCoefficients : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSplitError : public std::runtime_error {
 public:
  NotSplitError(std::int64_t p, const std::string& reason);
  std::int64_t prime() const { return p_; }

 private:
  std::int64_t p_;
};

inline constexpr int kDefaultMaxLocalDegree = 8;
inline constexpr double kSplitTolerance = 1e-8;

/// The largest degree bound d <= cap with p^(2d) <= N, i.e. the largest
/// bound for which detect_polynomial_split has its required margin rows.
int max_detectable_degree(std::int64_t N, std::int64_t p, int cap = kDefaultMaxLocalDegree);

/// Decides whether the local factor at p is the inverse of a polynomial of
/// degree <= max_degree, from u_k = a(p^k), k = 0..K (p^K <= N).
///
/// For each candidate degree d = 0, 1, ... the K x (d+1) Toeplitz system
/// T[k][l] = u_{k-l} (k = 1..K, u_negative = 0) is row-normalised and its
/// singular values inspected; the first d whose smallest relative singular
/// value is <= tol has a null vector, which normalised to A_0 = 1 is the
/// inverse polynomial. The rows k <= d pin A to the power-series inverse of
/// sum u_k X^k; rows k > d are the recurrence checks.
///
/// Requires p^(2 * max_degree) <= N (max_degree extra recurrence rows);
/// throws InsufficientCoefficients otherwise.
std::variant<LocalFactorInverse, NotSplit> detect_polynomial_split(
    const CoefficientSeries& x, std::int64_t p, int max_degree = kDefaultMaxLocalDegree,
    double tol = kSplitTolerance);

/// Per-prime inverse local factors for p | D and the multiplicative table
/// B_m, m | D*.
class SplitTable {
 public:
  SplitTable(std::int64_t D, std::vector<LocalFactorInverse> factors);

  std::int64_t D() const { return D_; }
  std::int64_t D_star() const { return D_star_; }
  /// prod_{p | d} p^{degree_p} for a divisor d of D.
  std::int64_t star_of(std::int64_t d) const;
  const LocalFactorInverse& factor(std::int64_t p) const;
  const std::vector<LocalFactorInverse>& factors() const { return factors_; }

  /// B_m = prod_{p^l || m} A_l(p); zero when m does not divide D*.
  Complex B(std::int64_t m) const;
  const std::map<std::int64_t, Complex>& B_table() const { return B_; }

 private:
  std::int64_t D_;
  std::int64_t D_star_;
  std::vector<LocalFactorInverse> factors_;
  std::map<std::int64_t, Complex> B_;
};

/// Throws NotSplitError naming the first prime p | D that does not split.
/// max_degree <= 0 selects, per prime, max_detectable_degree(N, p).
SplitTable build_split_table(const CoefficientSeries& x, std::int64_t D,
                             int max_degree = kDefaultMaxLocalDegree,
                             double tol = kSplitTolerance);

/// |a(n) chi_0(n) - sum_{m | (n, D*)} B_m a(n/m)|, chi_0 principal mod D.
double verify_lemma2(const CoefficientSeries& x, const SplitTable& split, std::int64_t n);

// Fixture families.

/// a(n) = [n = 1].
CoefficientSeries unit_series(std::int64_t N);
/// a(n) = 1.
CoefficientSeries ones_series(std::int64_t N);
/// zeta(s)^2: a(n) = d(n).
CoefficientSeries divisor_series(std::int64_t N);
/// Ramanujan tau(n) at index n = 0..N (tau(0) = 0), exact, from
/// q * prod_{k>=1} (1 - q^k)^24. N <= 2^20.
std::vector<__int128> ramanujan_tau(std::int64_t N);
/// a(n) = tau(n) / n^{11/2}.
CoefficientSeries delta_normalized(std::int64_t N);
/// zeta(s) L(s, chi) = ones * (chi-twisted ones).
CoefficientSeries zeta_times_l(const DirichletCharacter& chi, std::int64_t N);

}  // namespace ltwist
