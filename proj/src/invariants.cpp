#include "ltwist/invariants.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ltwist {

void GammaFactorData::validate() const {
  if (!(Q > 0.0)) throw std::invalid_argument("gamma data: Q must be positive");
  for (const auto& f : factors) {
    if (!(f.lambda > 0.0)) throw std::invalid_argument("gamma data: lambda must be positive");
    if (f.mu.real() < 0.0) throw std::invalid_argument("gamma data: Re(mu) must be >= 0");
  }
  if (std::abs(std::abs(omega) - 1.0) > 1e-12)
    throw std::invalid_argument("gamma data: |omega| must be 1");
}

InvariantTriple compute_invariants(const GammaFactorData& g) {
  g.validate();
  double lambda_sum = 0.0;
  double log_prod = 0.0;
  double mu_im = 0.0;
  for (const auto& f : g.factors) {
    lambda_sum += f.lambda;
    log_prod += 2.0 * f.lambda * std::log(f.lambda);
    mu_im += f.mu.imag();
  }
  const double d = 2.0 * lambda_sum;
  if (d == 0.0) throw std::invalid_argument("compute_invariants: degree 0, internal shift undefined");
  const double q = std::exp(d * std::log(2.0 * kPi) + 2.0 * std::log(g.Q) + log_prod);
  return {d, q, 2.0 / d * mu_im};
}

GammaFactorData duplicate_factor(const GammaFactorData& g, std::size_t j) {
  if (j >= g.factors.size()) throw std::out_of_range("duplicate_factor: no such factor");
  GammaFactorData out = g;
  const auto [lambda, mu] = g.factors[j];
  out.factors[j] = {lambda / 2.0, mu / 2.0};
  out.factors.insert(out.factors.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                     {lambda / 2.0, (mu + 1.0) / 2.0});
  out.Q = g.Q * std::pow(2.0, lambda);
  out.omega = g.omega * std::polar(1.0, -2.0 * mu.imag() * std::log(2.0));
  return out;
}

GammaFactorData zeta_squared_gamma() {
  return {1.0 / kPi, {{0.5, 0.0}, {0.5, 0.0}}, 1.0};
}

GammaFactorData delta_gamma() { return {1.0 / (2.0 * kPi), {{1.0, 5.5}}, 1.0}; }

GammaFactorData zeta_times_l_gamma(const DirichletCharacter& chi) {
  if (!chi.is_primitive()) throw std::invalid_argument("zeta_times_l_gamma: chi must be primitive");
  const double q = static_cast<double>(chi.modulus());
  const bool odd = chi(-1) != RootOfUnity::one();
  const double kappa = odd ? 1.0 : 0.0;
  const Complex tau = gauss_sum(chi).value;
  const Complex i_kappa = odd ? Complex{0.0, 1.0} : Complex{1.0, 0.0};
  return {std::sqrt(q) / kPi, {{0.5, 0.0}, {0.5, kappa / 2.0}}, tau / (i_kappa * std::sqrt(q))};
}

Alpha::Alpha(const Rational& power, int root) : power_(power), root_(root), exact_(true) {
  if (power_ <= 0) throw std::invalid_argument("Alpha: value must be positive");
  if (root_ < 1) throw std::invalid_argument("Alpha: root must be >= 1");
  value_ = std::pow(to_double(power_), 1.0 / root_);
}

Alpha Alpha::approximate(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("Alpha: value must be positive");
  Alpha a;
  a.exact_ = false;
  a.value_ = value;
  return a;
}

Alpha Alpha::times_root(std::int64_t m, int k) const {
  if (m < 1 || k < 1) throw std::invalid_argument("Alpha::times_root: m, k must be positive");
  if (!exact_) return approximate(value_ * std::pow(static_cast<double>(m), 1.0 / k));
  const int L = std::lcm(root_, k);
  return Alpha(rational_pow(power_, L / root_) * rational_pow(Rational(m), L / k), L);
}

std::string Alpha::to_string() const {
  std::ostringstream os;
  if (!exact_) {
    os.precision(17);
    os << value_;
  } else if (root_ == 1) {
    os << power_;
  } else {
    os << "(" << power_ << ")^(1/" << root_ << ")";
  }
  return os.str();
}

PolePrediction predict_pole(const Rational& d, const Rational& q, double theta,
                            const Alpha& alpha, const CoefficientSeries* coefficients,
                            const DirichletCharacter* chi) {
  if (d <= 0) throw std::invalid_argument("predict_pole: d must be positive");
  if (q <= 0) throw std::invalid_argument("predict_pole: q must be positive");
  const double dd = to_double(d);
  PolePrediction out;
  out.s0 = Complex{0.5 + 1.0 / (2.0 * dd), -theta};

  if (alpha.is_exact() && is_integer(d)) {
    const int di = static_cast<int>(numerator(d));
    // alpha^d = power^(d/root) = (power^(d/g))^(1/(root/g)).
    const int g = std::gcd(di, alpha.root());
    const auto alpha_d = exact_root(rational_pow(alpha.power(), di / g), alpha.root() / g);
    out.exact = true;
    if (alpha_d) {
      const Rational n = q * *alpha_d / rational_pow(d, di);
      out.n_alpha_exact = n;
      out.n_alpha = to_double(n);
      out.integral = is_integer(n) && n > 0;
    } else {
      // An irrational alpha^d times a nonzero rational is irrational.
      out.n_alpha = to_double(q) * std::pow(alpha.value(), dd) / std::pow(dd, dd);
    }
  } else {
    out.n_alpha = to_double(q) * std::pow(alpha.value() / dd, dd);
  }

  if (!out.integral) return out;
  const BigInt big = numerator(*out.n_alpha_exact);
  if (coefficients != nullptr && big > coefficients->size())
    throw std::out_of_range("predict_pole: n_alpha = " + big.str() +
                            " beyond the coefficient truncation N = " +
                            std::to_string(coefficients->size()));
  if (big > BigInt(std::numeric_limits<std::int64_t>::max()))
    throw std::out_of_range("predict_pole: n_alpha does not fit in 64 bits");
  out.index = static_cast<std::int64_t>(big);
  if (coefficients != nullptr) {
    Complex shape = std::conj((*coefficients)(out.index));
    if (chi != nullptr) shape *= std::conj(chi->complex_value(out.index));
    out.residue_shape =
        shape * std::pow(static_cast<double>(out.index), out.s0 - 1.0);
  }
  return out;
}

Alpha alpha_nu(int d0, const Rational& q0, std::int64_t nu) {
  if (d0 < 1) throw std::invalid_argument("alpha_nu: d0 must be a positive integer");
  if (q0 <= 0) throw std::invalid_argument("alpha_nu: q0 must be positive");
  if (nu < 1) throw std::invalid_argument("alpha_nu: nu must be positive");
  return Alpha::root_of(rational_pow(Rational(d0), d0) * nu / q0, d0);
}

}  // namespace ltwist
