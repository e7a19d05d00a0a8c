#include "ltwist/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ltwist/arith.hpp"

namespace ltwist {

CoefficientSeries::CoefficientSeries(std::string label, std::vector<Complex> coefficients,
                                     double growth_exponent, double growth_constant)
    : label_(std::move(label)),
      a_(std::move(coefficients)),
      growth_exponent_(growth_exponent),
      growth_constant_(growth_constant) {
  if (growth_exponent_ < 0.0) throw std::invalid_argument("growth exponent must be non-negative");
}

const Complex& CoefficientSeries::operator()(std::int64_t n) const {
  if (!contains(n))
    throw std::out_of_range("coefficient index " + std::to_string(n) + " outside 1.." +
                            std::to_string(size()) + " of series '" + label_ + "'");
  return a_[static_cast<std::size_t>(n - 1)];
}

CoefficientSeries dirichlet_convolve(const CoefficientSeries& x, const CoefficientSeries& y) {
  const std::int64_t N = std::min(x.size(), y.size());
  std::vector<Complex> c(static_cast<std::size_t>(N), Complex{});
  const auto xs = x.coefficients();
  const auto ys = y.coefficients();
  for (std::int64_t d = 1; d <= N; ++d) {
    const Complex xd = xs[d - 1];
    if (xd == Complex{}) continue;
    for (std::int64_t k = 1; d * k <= N; ++k) c[d * k - 1] += xd * ys[k - 1];
  }
  // |sum_{d|n} x(d) y(n/d)| <= Kx Ky n^max(cx, cy) d(n) and d(n) <= 2 sqrt(n).
  return CoefficientSeries("(" + x.label() + ")*(" + y.label() + ")", std::move(c),
                           std::max(x.growth_exponent(), y.growth_exponent()) + 0.5,
                           2.0 * x.growth_constant() * y.growth_constant());
}

CoefficientSeries restrict_coprime(const CoefficientSeries& x, std::int64_t M) {
  if (M < 1) throw std::invalid_argument("restrict_coprime: M must be positive");
  std::vector<Complex> a(x.coefficients().begin(), x.coefficients().end());
  for (const auto p : prime_divisors(M))
    for (std::int64_t n = p; n <= x.size(); n += p) a[n - 1] = Complex{};
  return CoefficientSeries(x.label() + "|" + std::to_string(M), std::move(a),
                           x.growth_exponent(), x.growth_constant());
}

CoefficientSeries twist_by_character(const CoefficientSeries& x, const DirichletCharacter& chi) {
  std::vector<Complex> a(x.coefficients().begin(), x.coefficients().end());
  for (std::int64_t n = 1; n <= x.size(); ++n) a[n - 1] *= chi.complex_value(n);
  return CoefficientSeries(x.label() + "^chi(" + std::to_string(chi.modulus()) + ")",
                           std::move(a), x.growth_exponent(), x.growth_constant());
}

NotSplitError::NotSplitError(std::int64_t p, const std::string& reason)
    : std::runtime_error("series does not split polynomially at p=" + std::to_string(p) + ": " +
                         reason),
      p_(p) {}

int max_detectable_degree(std::int64_t N, std::int64_t p, int cap) {
  int d = 0;
  while (d < cap) {
    std::int64_t pk = 0;
    try {
      pk = checked_pow(p, 2 * (d + 1));
    } catch (const std::overflow_error&) {
      break;
    }
    if (pk > N) break;
    ++d;
  }
  return d;
}

std::variant<LocalFactorInverse, NotSplit> detect_polynomial_split(const CoefficientSeries& x,
                                                                   std::int64_t p, int max_degree,
                                                                   double tol) {
  if (!is_prime(p)) throw std::invalid_argument("detect_polynomial_split: p must be prime");
  if (max_degree < 0) throw std::invalid_argument("detect_polynomial_split: negative degree bound");
  if (max_detectable_degree(x.size(), p, max_degree) < max_degree)
    throw InsufficientCoefficients("need p^" + std::to_string(2 * max_degree) + " <= N = " +
                                   std::to_string(x.size()) + " at p=" + std::to_string(p));

  std::vector<Complex> u;
  for (std::int64_t pk = 1;; pk *= p) {
    u.push_back(x(pk));
    if (pk > x.size() / p) break;
  }
  const int K = static_cast<int>(u.size()) - 1;
  if (std::abs(u[0]) == 0.0) return NotSplit{p, max_degree, "a(1) = 0"};

  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  auto at = [&](int k) { return k >= 0 ? u[k] : Complex{}; };

  for (int d = 0; d <= max_degree; ++d) {
    std::vector<int> rows;
    std::vector<double> norms;
    for (int k = 1; k <= K; ++k) {
      double norm = 0.0;
      for (int l = 0; l <= d; ++l) norm += std::norm(at(k - l));
      if (norm > 0.0) {
        rows.push_back(k);
        norms.push_back(std::sqrt(norm));
      }
    }

    std::vector<Complex> A(static_cast<std::size_t>(d + 1), Complex{});
    if (rows.empty()) {
      A[0] = 1.0;
    } else {
      Matrix T(static_cast<Eigen::Index>(rows.size()), d + 1);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (int l = 0; l <= d; ++l) T(static_cast<Eigen::Index>(r), l) = at(rows[r] - l) / norms[r];
      Eigen::JacobiSVD<Matrix> svd(T, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      // Fewer rows than columns leaves a null space by counting alone.
      const double smallest = T.rows() < T.cols() ? 0.0 : sv(sv.size() - 1);
      if (smallest > tol * sv(0)) continue;
      const auto v = svd.matrixV().col(d);
      if (std::abs(v(0)) <= tol) continue;
      for (int l = 1; l <= d; ++l) A[l] = v(l) / v(0);
      A[0] = 1.0;
    }
    if (d > 0 && std::abs(A[d]) <= tol) continue;

    double worst = 0.0;
    for (int k = 1; k <= K; ++k) {
      Complex sum{};
      double scale = 0.0;
      for (int l = 0; l <= d; ++l) {
        sum += A[l] * at(k - l);
        scale += std::abs(A[l]) * std::abs(at(k - l));
      }
      if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
    }
    return LocalFactorInverse{p, d, std::move(A), worst};
  }
  return NotSplit{p, max_degree, "no inverse polynomial of degree <= " + std::to_string(max_degree)};
}

SplitTable::SplitTable(std::int64_t D, std::vector<LocalFactorInverse> factors)
    : D_(D), D_star_(1), factors_(std::move(factors)) {
  if (D < 1 || !is_squarefree(D)) throw std::invalid_argument("SplitTable: D must be squarefree");
  std::sort(factors_.begin(), factors_.end(),
            [](const auto& a, const auto& b) { return a.p < b.p; });
  if (prime_divisors(D) != [&] {
        std::vector<std::int64_t> ps;
        for (const auto& f : factors_) ps.push_back(f.p);
        return ps;
      }())
    throw std::invalid_argument("SplitTable: factors must cover exactly the primes of D");
  for (const auto& f : factors_) {
    if (f.A.empty() || f.A[0] != Complex{1.0, 0.0})
      throw std::invalid_argument("SplitTable: A_0 must be 1");
    D_star_ *= checked_pow(f.p, f.degree);
  }
  for (const auto m : divisors(D_star_)) {
    Complex b = 1.0;
    for (const auto& f : factors_) b *= f.A[static_cast<std::size_t>(valuation(m, f.p))];
    B_[m] = b;
  }
}

std::int64_t SplitTable::star_of(std::int64_t d) const {
  if (d < 1 || D_ % d != 0) throw std::invalid_argument("star_of: argument must divide D");
  std::int64_t s = 1;
  for (const auto& f : factors_)
    if (d % f.p == 0) s *= checked_pow(f.p, f.degree);
  return s;
}

const LocalFactorInverse& SplitTable::factor(std::int64_t p) const {
  for (const auto& f : factors_)
    if (f.p == p) return f;
  throw std::out_of_range("SplitTable: no factor at p=" + std::to_string(p));
}

Complex SplitTable::B(std::int64_t m) const {
  const auto it = B_.find(m);
  return it == B_.end() ? Complex{} : it->second;
}

SplitTable build_split_table(const CoefficientSeries& x, std::int64_t D, int max_degree,
                             double tol) {
  if (D < 1 || !is_squarefree(D))
    throw std::invalid_argument("build_split_table: D must be squarefree");
  std::vector<LocalFactorInverse> factors;
  for (const auto p : prime_divisors(D)) {
    const int bound = max_degree > 0 ? max_degree : max_detectable_degree(x.size(), p);
    auto result = detect_polynomial_split(x, p, bound, tol);
    if (auto* ns = std::get_if<NotSplit>(&result)) throw NotSplitError(p, ns->reason);
    factors.push_back(std::get<LocalFactorInverse>(std::move(result)));
  }
  return SplitTable(D, std::move(factors));
}

double verify_lemma2(const CoefficientSeries& x, const SplitTable& split, std::int64_t n) {
  const Complex lhs = std::gcd(n, split.D()) == 1 ? x(n) : Complex{};
  Complex rhs{};
  for (const auto m : divisors(std::gcd(n, split.D_star()))) rhs += split.B(m) * x(n / m);
  return std::abs(lhs - rhs);
}

}  // namespace ltwist
