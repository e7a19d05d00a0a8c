// Degree, conductor and internal shift from gamma-factor data, and the
// pole location / residue shape of the standard twist.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltwist/arith.hpp"
#include "ltwist/characters.hpp"
#include "ltwist/series.hpp"

namespace ltwist {

/// One factor Gamma(lambda s + mu).
struct GammaFactor {
  double lambda = 0.0;
  Complex mu;
};

/// gamma(s) = Q^s prod_j Gamma(lambda_j s + mu_j), root number omega.
struct GammaFactorData {
  double Q = 1.0;
  std::vector<GammaFactor> factors;
  Complex omega{1.0, 0.0};

  /// Throws std::invalid_argument unless Q > 0, every lambda > 0,
  /// Re(mu) >= 0 and |omega| = 1 within 1e-12.
  void validate() const;
};

struct InvariantTriple {
  double d = 0.0;
  double q = 0.0;
  double theta = 0.0;
};

/// d = 2 sum lambda, q = (2 pi)^d Q^2 prod lambda^(2 lambda),
/// theta = (2/d) Im sum mu. Throws std::invalid_argument when d = 0.
InvariantTriple compute_invariants(const GammaFactorData& g);

/// Splits factor j with the duplication formula:
/// Gamma(lambda s + mu) -> Gamma(lambda s/2 + mu/2) Gamma(lambda s/2 + (mu+1)/2),
/// Q -> Q 2^lambda, omega -> omega 2^(-2i Im mu). The invariants are unchanged.
GammaFactorData duplicate_factor(const GammaFactorData& g, std::size_t j);

/// Gamma data of the fixtures.
GammaFactorData zeta_squared_gamma();
GammaFactorData delta_gamma();
/// zeta(s) L(s, chi) for primitive chi.
GammaFactorData zeta_times_l_gamma(const DirichletCharacter& chi);

/// A positive real alpha = power^(1/root), kept exact so that
/// q alpha^d / d^d can be tested for integrality without rounding.
/// Values built from a double carry no exact form.
class Alpha {
 public:
  static Alpha exact(const Rational& value) { return Alpha(value, 1); }
  /// value^(1/root); value > 0, root >= 1.
  static Alpha root_of(const Rational& value, int root) { return Alpha(value, root); }
  static Alpha approximate(double value);

  bool is_exact() const { return exact_; }
  const Rational& power() const { return power_; }
  int root() const { return root_; }
  double value() const { return value_; }

  /// alpha * m^(1/k).
  Alpha times_root(std::int64_t m, int k) const;
  std::string to_string() const;

 private:
  Alpha(const Rational& power, int root);
  Alpha() = default;

  Rational power_{1};
  int root_ = 1;
  double value_ = 1.0;
  bool exact_ = true;
};

struct PolePrediction {
  Complex s0;
  /// n_alpha when it has an exact rational value; empty when irrational
  /// or computed in floating point only.
  std::optional<Rational> n_alpha_exact;
  double n_alpha = 0.0;
  /// The integrality test was decided exactly.
  bool exact = false;
  bool integral = false;
  std::int64_t index = 0;  // n_alpha when integral
  /// conj(a(n)) conj(chi*(n)) n^(s0 - 1) with the unknown constant set to 1;
  /// zero when n_alpha is not a positive integer.
  Complex residue_shape;
};

/// s0 = 1/2 + 1/(2d) - i theta and n_alpha = q d^(-d) alpha^d. Exact when d
/// is an integer and alpha is exact; otherwise n_alpha is a double and the
/// prediction is non-integral. coefficients may be null (shape left 0);
/// chi, when given, is the primitive twisting character.
/// Throws std::out_of_range when an integral n_alpha exceeds the truncation.
PolePrediction predict_pole(const Rational& d, const Rational& q, double theta,
                            const Alpha& alpha, const CoefficientSeries* coefficients = nullptr,
                            const DirichletCharacter* chi = nullptr);

/// alpha_nu = d0 (nu / q0)^(1/d0), exact for integer d0.
Alpha alpha_nu(int d0, const Rational& q0, std::int64_t nu);

}  // namespace ltwist
