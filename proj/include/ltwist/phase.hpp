// Stationary-phase quantities for f(n) = beta n + alpha n^lambda: the
// phase Phi(z, xi), its critical point x0, the expansion of Phi(x0, xi)/2pi
// and the dual phase f*.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ltwist/arith.hpp"

namespace ltwist {

struct PhaseParams {
  double q_F = 1.0;
  double beta = 1.0;
  double alpha = 0.0;
  double lambda = 0.5;

  /// q_F / (4 pi)^2.
  double q() const;
  /// Throws std::invalid_argument unless q_F > 0, beta > 0, 0 < lambda <= 1/2.
  void validate() const;
};

/// Phi(z, xi) = z^(1/2) - 2 pi q beta z / xi - 2 pi alpha q^lambda z^lambda / xi^lambda.
double phi(double z, double xi, const PhaseParams& p);

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  /// Successive iterates of psi(x0/xi) - 1.
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// The critical point written as x0 / xi = u0 (1 + eps)^(-2), where
/// u0 = (4 pi / (beta q_F))^2 xi is the leading term and eps = psi(x0/xi) - 1
/// solves eps = c0 (1 + eps)^(2 - 2 lambda) with
/// c0 = (alpha lambda / beta) (q u0)^(lambda - 1).
struct CriticalPoint {
  double xi = 0.0;
  double x0 = 0.0;
  double u0 = 0.0;
  double c0 = 0.0;
  double epsilon = 0.0;
  int iterations = 0;
  bool used_bisection = false;
  /// |x0^(1/2) - 4 pi q beta (x0/xi) psi(x0/xi)| / x0^(1/2), from the raw equation.
  double residual = 0.0;
};

inline constexpr int kMaxPhaseIterations = 200;

/// Damped fixed-point iteration on eps from eps = 0, falling back to
/// bisection on a geometrically widened bracket. Throws NoConvergence when
/// neither reaches tol (relative, on eps) within kMaxPhaseIterations steps.
CriticalPoint solve_critical_point(double xi, const PhaseParams& p, double tol = 1e-15);

/// |x^(1/2) - 4 pi q beta (x/xi) psi(x/xi)| / x^(1/2).
double critical_equation_residual(double x, double xi, const PhaseParams& p);

/// Phi(x0, xi) / 2pi = xi/(q_F beta) (1+eps)^(-2) (1 - ((1 - 2 lambda)/lambda) eps),
/// evaluated without cancellation.
double phase_over_2pi(const CriticalPoint& cp, const PhaseParams& p);

/// The two-term prediction xi/(q_F beta) - alpha xi^lambda / (beta^(2 lambda) q_F^lambda).
double predicted_phase(double xi, const PhaseParams& p);

/// |Phi(x0, xi)/2pi - predicted_phase(xi)| / xi^lambda. For lambda = 1/2 the
/// difference tends to the constant alpha^2 / (4 beta), which is included.
double asymptotic_residual(double xi, const PhaseParams& p);

/// Least-squares constant c in Phi(x0, xi)/2pi - predicted_phase(xi) ~ c over
/// the grid, and the per-point residual |difference - c| / xi^lambda.
struct ConstantFit {
  double constant = 0.0;
  std::vector<double> residuals;
};
ConstantFit fit_constant_term(const std::vector<double>& xis, const PhaseParams& p);

struct PhaseRow {
  double xi = 0.0;
  double x0 = 0.0;
  double phase = 0.0;  // Phi(x0, xi) / 2pi
  double predicted = 0.0;
  double residual = 0.0;
};
std::vector<PhaseRow> phase_table(const std::vector<double>& xis, const PhaseParams& p);

struct DualPhaseParams {
  double beta_star = 0.0;
  double alpha_star = 0.0;
  double lambda = 0.0;
};

/// beta* = 1/(q_F beta), alpha* = -alpha / (beta^(2 lambda) q_F^lambda).
DualPhaseParams dual_phase(const PhaseParams& p);

struct ExactPhase {
  Rational q_F;
  Rational beta;
  Rational alpha;
  Rational lambda;
  friend bool operator==(const ExactPhase&, const ExactPhase&) = default;
};

/// The dual in exact arithmetic, available when alpha = 0 or
/// beta^(2 lambda) q_F^lambda is rational; empty otherwise.
std::optional<ExactPhase> dual_phase_exact(const ExactPhase& p);

/// Whether e(-(D/q_F) n) = e(-n/q_F) for n = 1..n_max, compared exactly.
bool dual_linear_phase_agrees(std::int64_t D, std::int64_t q_F, std::int64_t n_max);

}  // namespace ltwist
