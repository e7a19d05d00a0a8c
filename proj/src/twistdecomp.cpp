#include "ltwist/twistdecomp.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ltwist {

namespace {

using TermKey = std::tuple<std::int64_t, std::vector<std::int64_t>, std::int64_t>;
using TermMap = std::map<TermKey, Complex>;

TermKey key_of(const DirichletCharacter& chi_star, std::int64_t m) {
  return {chi_star.modulus(), chi_star.exponents(), m};
}

TermMap to_map(const Decomposition& d) {
  TermMap out;
  for (const auto& t : d.terms) out[key_of(t.chi_star, t.m)] += t.scalar;
  return out;
}

void check_modulus(const SplitTable& split, std::int64_t a) {
  if (std::gcd(a, split.D()) != 1)
    throw std::invalid_argument("decomposition: gcd(a, D) must be 1");
}

// The inductive construction. Values are coefficients of
// m^{-s} F^{chi*}(s, 0, m^lambda alpha, lambda) in F(s, a/D', ...).
class RecursiveBuilder {
 public:
  explicit RecursiveBuilder(const SplitTable& split) : split_(split) {}

  const TermMap& build(std::int64_t D, std::int64_t a) {
    a = mod_floor(a, D);
    if (const auto it = memo_.find({D, a}); it != memo_.end()) return it->second;

    TermMap out;
    if (D == 1) {
      out[key_of(DirichletCharacter::trivial(), 1)] = 1.0;
      return memo_[{D, a}] = std::move(out);
    }

    // A: the part coprime to D, expanded over characters mod D; each
    // F^chi = F^{chi*} restricted to (n, D/f) = 1 is inverted with the
    // local factors at the primes of D/f.
    const double phi = static_cast<double>(euler_phi(D));
    for (const auto& chi : enumerate_characters(D)) {
      const auto star = chi.primitive();
      const Complex c = c_coefficient(chi, a);
      for (const auto m : divisors(split_.star_of(D / star.modulus())))
        out[key_of(star, m)] += split_.B(m) * c * star(m).to_complex() / phi;
    }

    // B: the non-coprime part, one reduced-modulus twist per 1 < k | D*.
    const std::int64_t D_star = split_.star_of(D);
    for (const auto k : divisors(D_star)) {
      if (k == 1) continue;
      const Complex Bk = split_.B(k);
      const std::int64_t g = std::gcd(k, D);
      const std::int64_t sub_D = D / g;
      const std::int64_t sub_a = mul_mod(mod_floor(a, sub_D), (k / g) % sub_D, sub_D);
      const TermMap sub = build(sub_D, sub_a);
      for (const auto& [key, v] : sub) {
        const auto& [f, exps, m] = key;
        out[{f, exps, k * m}] -= Bk * v;
      }
    }
    return memo_[{D, a}] = std::move(out);
  }

 private:
  const SplitTable& split_;
  std::map<std::pair<std::int64_t, std::int64_t>, TermMap> memo_;
};

}  // namespace

Complex f_coefficient(const DirichletCharacter& chi, std::int64_t m, std::int64_t a,
                      const SplitTable& split) {
  const std::int64_t D = chi.modulus();
  if (D != split.D()) throw std::invalid_argument("f_coefficient: split table is for another D");
  if (std::gcd(a, D) != 1) throw std::invalid_argument("f_coefficient: gcd(a, D) must be 1");
  const auto star = chi.primitive();
  const std::int64_t cofactor = D / star.modulus();
  if (m < 1 || split.star_of(cofactor) % m != 0)
    throw std::invalid_argument("f_coefficient: m must divide (D/f)*");
  const RootOfUnity unit = star(cofactor).conj() * star(mod_floor(a, star.modulus())) * star(m);
  return static_cast<double>(mobius(cofactor) * radical(m)) * unit.to_complex() *
         std::conj(gauss_sum(star).value);
}

Decomposition decompose(const SplitTable& split, std::int64_t a) {
  check_modulus(split, a);
  const std::int64_t D = split.D();
  Decomposition out{D, mod_floor(a, D), {}};
  const double phi = static_cast<double>(euler_phi(D));
  const auto chars = enumerate_characters(D);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto star = chars[i].primitive();
    for (const auto m : divisors(split.star_of(D / star.modulus())))
      out.terms.push_back(
          {star, i, star.modulus(), m, split.B(m) * f_coefficient(chars[i], m, a, split) / phi});
  }
  return out;
}

Decomposition decompose_recursive(const SplitTable& split, std::int64_t a) {
  check_modulus(split, a);
  const std::int64_t D = split.D();
  RecursiveBuilder builder(split);
  const TermMap& map = builder.build(D, a);

  const auto chars = enumerate_characters(D);
  std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, std::size_t> index;
  std::vector<DirichletCharacter> stars;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    stars.push_back(chars[i].primitive());
    index[{stars.back().modulus(), stars.back().exponents()}] = i;
  }

  Decomposition out{D, mod_floor(a, D), {}};
  for (const auto& [key, v] : map) {
    const auto& [f, exps, m] = key;
    const auto it = index.find({f, exps});
    if (it == index.end())
      throw std::logic_error("decompose_recursive: primitive character not induced from mod D");
    out.terms.push_back({stars[it->second], it->second, f, m, v});
  }
  return out;
}

double compare_decompositions(const Decomposition& x, const Decomposition& y) {
  const TermMap mx = to_map(x);
  const TermMap my = to_map(y);
  double worst = 0.0;
  for (const auto& [key, v] : mx) {
    const auto it = my.find(key);
    worst = std::max(worst, std::abs(v - (it == my.end() ? Complex{} : it->second)));
  }
  for (const auto& [key, v] : my)
    if (!mx.contains(key)) worst = std::max(worst, std::abs(v));
  return worst;
}

double verify_lemma3_coefficient(const CoefficientSeries& x, const Decomposition& dec,
                                 std::int64_t n) {
  const Complex lhs = x(n) * RootOfUnity::from_fraction(-dec.a * (n % dec.D), dec.D).to_complex();
  Complex rhs{};
  for (const auto& t : dec.terms) {
    if (n % t.m != 0) continue;
    const std::int64_t k = n / t.m;
    rhs += t.scalar * t.chi_star.complex_value(k) * x(k);
  }
  return std::abs(lhs - rhs);
}

void NonlinearTwistParams::validate() const {
  if (!(lambda > 0.0 && lambda <= 0.5))
    throw std::invalid_argument("nonlinear twist: lambda must lie in (0, 1/2]");
}

TwistSum evaluate_nonlinear_twist(const CoefficientSeries& x, Complex s,
                                  const NonlinearTwistParams& params, std::int64_t N) {
  params.validate();
  const double sigma = s.real();
  const double c = x.growth_exponent();
  if (!(sigma > 1.0 + c))
    throw std::invalid_argument("evaluate_nonlinear_twist: need Re(s) > 1 + growth exponent");
  if (N < 1 || N > x.size())
    throw std::invalid_argument("evaluate_nonlinear_twist: N outside 1.." + std::to_string(x.size()));

  // e(-beta n) depends only on beta mod 1, handled exactly as e(-pn/q).
  const BigInt bq = denominator(params.beta);
  BigInt bp = numerator(params.beta) % bq;
  if (bp < 0) bp += bq;
  if (bq > BigInt(std::int64_t{1} << 40))
    throw std::invalid_argument("evaluate_nonlinear_twist: beta denominator too large");
  const auto p = static_cast<std::int64_t>(bp);
  const auto q = static_cast<std::int64_t>(bq);

  Complex sum{};
  const auto a = x.coefficients();
  for (std::int64_t n = 1; n <= N; ++n) {
    const Complex an = a[n - 1];
    if (an == Complex{}) continue;
    const double nd = static_cast<double>(n);
    const Complex linear = RootOfUnity::from_fraction(-mul_mod(p, n % q, q), q).to_complex();
    const Complex phase = params.alpha == 0.0 ? Complex{1.0}
                                              : e_of(-params.alpha * std::pow(nd, params.lambda));
    sum += an * std::exp(-s * std::log(nd)) * linear * phase;
  }
  const double Nd = static_cast<double>(N);
  const double tail =
      x.growth_constant() * std::pow(Nd, c - sigma + 1.0) / (sigma - c - 1.0);
  return {sum, tail};
}

DecompositionNumericResult verify_lemma3_numeric(const CoefficientSeries& x, const Decomposition& dec,
                                          double alpha, double lambda, Complex s, std::int64_t N) {
  DecompositionNumericResult out;
  const auto lhs = evaluate_nonlinear_twist(x, s, {Rational(dec.a, dec.D), alpha, lambda}, N);
  out.lhs = lhs.value;
  out.combined_tail = lhs.tail_bound;

  std::map<std::size_t, CoefficientSeries> twisted;
  for (const auto& t : dec.terms) {
    if (t.scalar == Complex{}) continue;
    auto it = twisted.find(t.chi_index);
    if (it == twisted.end()) it = twisted.emplace(t.chi_index, twist_by_character(x, t.chi_star)).first;
    const double md = static_cast<double>(t.m);
    const auto term =
        evaluate_nonlinear_twist(it->second, s, {Rational(0), alpha * std::pow(md, lambda), lambda}, N);
    const Complex weight = t.scalar * std::exp(-s * std::log(md));
    out.rhs += weight * term.value;
    out.combined_tail += std::abs(weight) * term.tail_bound;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

std::int64_t telescoping_check(std::int64_t m, std::int64_t D) {
  if (m < 1 || D < 1) throw std::invalid_argument("telescoping_check: m, D must be positive");
  if (D % radical(m) != 0)
    throw std::invalid_argument("telescoping_check: every prime of m must divide D");
  std::int64_t total = 0;
  for (const auto k : divisors(m)) {
    if (std::gcd(k, m / k) != 1) continue;
    const std::int64_t g = std::gcd(k, D);
    total += euler_phi(g) * mobius(g) * radical(m / k);
  }
  return total;
}

}  // namespace ltwist
