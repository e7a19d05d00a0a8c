#include "ltwist/phase.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ltwist/roots.hpp"

namespace ltwist {

double PhaseParams::q() const { return q_F / (16.0 * kPi * kPi); }

void PhaseParams::validate() const {
  if (!(q_F > 0.0)) throw std::invalid_argument("phase: q_F must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("phase: beta must be positive");
  if (!(lambda > 0.0 && lambda <= 0.5))
    throw std::invalid_argument("phase: lambda must lie in (0, 1/2]");
  if (!std::isfinite(alpha)) throw std::invalid_argument("phase: alpha must be finite");
}

double phi(double z, double xi, const PhaseParams& p) {
  const double q = p.q();
  return std::sqrt(z) - 2.0 * kPi * q * p.beta * z / xi -
         2.0 * kPi * p.alpha * std::pow(q * z / xi, p.lambda);
}

double critical_equation_residual(double x, double xi, const PhaseParams& p) {
  const double q = p.q();
  const double u = x / xi;
  const double psi = 1.0 + p.alpha * p.lambda / p.beta * std::pow(q * u, p.lambda - 1.0);
  const double root = std::sqrt(x);
  return std::abs(root - 4.0 * kPi * q * p.beta * u * psi) / root;
}

CriticalPoint solve_critical_point(double xi, const PhaseParams& p, double tol) {
  p.validate();
  if (!(xi > 0.0)) throw std::invalid_argument("solve_critical_point: xi must be positive");

  CriticalPoint cp;
  cp.xi = xi;
  const double lead = 4.0 * kPi / (p.beta * p.q_F);
  cp.u0 = lead * lead * xi;
  cp.c0 = p.alpha * p.lambda / p.beta * std::pow(p.q() * cp.u0, p.lambda - 1.0);
  const double power = 2.0 - 2.0 * p.lambda;
  auto map = [&](double eps) { return cp.c0 * std::pow(1.0 + eps, power); };
  auto settled = [&](double a, double b) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) ||
           std::abs(a - b) <= 4.0 * std::numeric_limits<double>::denorm_min();
  };

  std::vector<double> trace;
  bool converged = cp.c0 == 0.0;
  double eps = 0.0;
  if (!converged) {
    double weight = 1.0;
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxPhaseIterations; ++it) {
      double next = (1.0 - weight) * eps + weight * map(eps);
      if (!(next > -1.0)) next = (eps - 1.0) / 2.0;  // keep psi > 0
      trace.push_back(next);
      ++cp.iterations;
      const double step = std::abs(next - eps);
      if (step >= last_step) weight /= 2.0;
      last_step = step;
      const bool done = settled(next, eps);
      eps = next;
      if (done) {
        converged = true;
        break;
      }
      if (weight < 1e-6) break;
    }
  }

  if (!converged) {
    // h(eps) = eps - c0 (1+eps)^power changes sign on the bracket; take the
    // root nearest zero.
    auto h = [&](double e) { return e - map(e); };
    double lo, hi;
    if (cp.c0 < 0.0) {
      lo = -1.0;
      hi = 0.0;
    } else {
      lo = 0.0;
      hi = cp.c0;
      int widen = 0;
      while (h(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++widen > 60)
          throw NoConvergence("solve_critical_point: no sign change, xi too small for these parameters",
                              trace);
      }
    }
    cp.used_bisection = true;
    for (int it = 0; it < kMaxPhaseIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      trace.push_back(mid);
      ++cp.iterations;
      (h(mid) > 0.0 ? hi : lo) = mid;
      if (settled(lo, hi)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NoConvergence("solve_critical_point: no convergence in " +
                              std::to_string(kMaxPhaseIterations) + " iterations",
                          trace);
    eps = 0.5 * (lo + hi);
  }

  cp.epsilon = eps;
  cp.x0 = xi * cp.u0 / ((1.0 + eps) * (1.0 + eps));
  cp.residual = critical_equation_residual(cp.x0, xi, p);
  return cp;
}

double phase_over_2pi(const CriticalPoint& cp, const PhaseParams& p) {
  const double A = cp.xi / (p.q_F * p.beta);
  const double r = (1.0 - 2.0 * p.lambda) / p.lambda;
  const double linear = 1.0 - r * cp.epsilon;
  if (linear <= 0.0) return A * linear / ((1.0 + cp.epsilon) * (1.0 + cp.epsilon));
  return A * std::exp(-2.0 * std::log1p(cp.epsilon) + std::log1p(-r * cp.epsilon));
}

namespace {

// Phi(x0, xi)/2pi - predicted_phase(xi), keeping the O(xi) parts apart.
double phase_difference(const CriticalPoint& cp, const PhaseParams& p) {
  const double A = cp.xi / (p.q_F * p.beta);
  const double r = (1.0 - 2.0 * p.lambda) / p.lambda;
  const double linear = 1.0 - r * cp.epsilon;
  double g_minus_1;
  if (linear <= 0.0)
    g_minus_1 = linear / ((1.0 + cp.epsilon) * (1.0 + cp.epsilon)) - 1.0;
  else
    g_minus_1 = std::expm1(-2.0 * std::log1p(cp.epsilon) + std::log1p(-r * cp.epsilon));
  const double second = p.alpha * std::pow(cp.xi, p.lambda) /
                        (std::pow(p.beta, 2.0 * p.lambda) * std::pow(p.q_F, p.lambda));
  return A * g_minus_1 + second;
}

}  // namespace

double predicted_phase(double xi, const PhaseParams& p) {
  return xi / (p.q_F * p.beta) -
         p.alpha * std::pow(xi, p.lambda) / (std::pow(p.beta, 2.0 * p.lambda) * std::pow(p.q_F, p.lambda));
}

double asymptotic_residual(double xi, const PhaseParams& p) {
  const auto cp = solve_critical_point(xi, p);
  return std::abs(phase_difference(cp, p)) / std::pow(xi, p.lambda);
}

ConstantFit fit_constant_term(const std::vector<double>& xis, const PhaseParams& p) {
  if (xis.empty()) throw std::invalid_argument("fit_constant_term: empty grid");
  std::vector<double> diffs;
  for (const double xi : xis) diffs.push_back(phase_difference(solve_critical_point(xi, p), p));
  ConstantFit fit;
  for (const double d : diffs) fit.constant += d;
  fit.constant /= static_cast<double>(diffs.size());
  for (std::size_t i = 0; i < xis.size(); ++i)
    fit.residuals.push_back(std::abs(diffs[i] - fit.constant) / std::pow(xis[i], p.lambda));
  return fit;
}

std::vector<PhaseRow> phase_table(const std::vector<double>& xis, const PhaseParams& p) {
  std::vector<PhaseRow> rows;
  for (const double xi : xis) {
    const auto cp = solve_critical_point(xi, p);
    rows.push_back({xi, cp.x0, phase_over_2pi(cp, p), predicted_phase(xi, p),
                    std::abs(phase_difference(cp, p)) / std::pow(xi, p.lambda)});
  }
  return rows;
}

DualPhaseParams dual_phase(const PhaseParams& p) {
  p.validate();
  return {1.0 / (p.q_F * p.beta),
          -p.alpha / (std::pow(p.beta, 2.0 * p.lambda) * std::pow(p.q_F, p.lambda)), p.lambda};
}

std::optional<ExactPhase> dual_phase_exact(const ExactPhase& p) {
  if (p.q_F <= 0 || p.beta <= 0) throw std::invalid_argument("dual_phase_exact: q_F, beta must be positive");
  if (p.lambda <= 0 || p.lambda > Rational(1, 2))
    throw std::invalid_argument("dual_phase_exact: lambda must lie in (0, 1/2]");
  const int k = static_cast<int>(numerator(p.lambda));
  const int n = static_cast<int>(denominator(p.lambda));
  // beta^(2 lambda) q_F^lambda = (beta^(2k) q_F^k)^(1/n).
  if (p.alpha == 0) return ExactPhase{p.q_F, 1 / (p.q_F * p.beta), Rational(0), p.lambda};
  const auto scale = exact_root(rational_pow(p.beta, 2 * k) * rational_pow(p.q_F, k), n);
  if (!scale) return std::nullopt;
  return ExactPhase{p.q_F, 1 / (p.q_F * p.beta), -p.alpha / *scale, p.lambda};
}

bool dual_linear_phase_agrees(std::int64_t D, std::int64_t q_F, std::int64_t n_max) {
  if (q_F < 1) throw std::invalid_argument("dual_linear_phase_agrees: q_F must be positive");
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::int64_t Dn = mul_mod(mod_floor(D, q_F), n % q_F, q_F);
    if (RootOfUnity::from_fraction(-Dn, q_F) != RootOfUnity::from_fraction(-n, q_F)) return false;
  }
  return true;
}

}  // namespace ltwist
