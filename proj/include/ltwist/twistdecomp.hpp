// Decomposition of F(s, a/D, alpha, lambda) into twists by primitive
// characters, built two ways: the closed form and the inductive assembly
// over proper divisors of D.
#pragma once

#include <cstdint>
#include <vector>

#include "ltwist/arith.hpp"
#include "ltwist/characters.hpp"
#include "ltwist/series.hpp"

namespace ltwist {

struct DecompositionTerm {
  DirichletCharacter chi_star;   // primitive, mod chi_conductor
  std::size_t chi_index = 0;     // position of chi in enumerate_characters(D)
  std::int64_t chi_conductor = 1;
  std::int64_t m = 1;            // divides (D/f)*
  /// B_m f(chi, m, a) / phi(D); the term is scalar m^{-s} F^{chi*}(s, 0, m^lambda alpha, lambda).
  Complex scalar;
};

struct Decomposition {
  std::int64_t D = 1;
  std::int64_t a = 1;
  std::vector<DecompositionTerm> terms;
};

/// mu(D/f) conj(tau(chi*)) conj(chi*(D/f)) chi*(am) r(m) for chi mod D.
/// D* is taken from split (which must be built for D).
/// Throws std::invalid_argument if m does not divide (D/f)* or gcd(a, D) > 1.
Complex f_coefficient(const DirichletCharacter& chi, std::int64_t m, std::int64_t a,
                      const SplitTable& split);

/// One term per chi mod D and m | (D/f_chi)*, including terms whose B_m vanishes.
Decomposition decompose(const SplitTable& split, std::int64_t a);

/// The same coefficients assembled as in the induction on D: the coprime
/// part through the character expansion and the coprime restriction, minus
/// B_k k^{-s} F(s, ak/D, k^lambda alpha, lambda) for 1 < k | D*, each of
/// which is decomposed recursively at modulus D/(k, D). Terms whose
/// contributions cancel exactly still appear (with scalar near zero).
Decomposition decompose_recursive(const SplitTable& split, std::int64_t a);

/// Largest |scalar difference| over the union of (chi*, m) keys, a key
/// missing on one side counting as zero.
double compare_decompositions(const Decomposition& x, const Decomposition& y);

/// |a(n) e(-an/D) - sum_{terms, m | n} scalar chi*(n/m) a(n/m)|.
double verify_lemma3_coefficient(const CoefficientSeries& x, const Decomposition& dec,
                                 std::int64_t n);

struct NonlinearTwistParams {
  Rational beta{0};
  double alpha = 0.0;
  double lambda = 0.5;

  /// Throws std::invalid_argument unless 0 < lambda <= 1/2.
  void validate() const;
};

struct TwistSum {
  Complex value;
  double tail_bound = 0.0;
};

/// sum_{n <= N} a(n) n^{-s} e(-beta n - alpha n^lambda) and the bound
/// K N^{c - sigma + 1} / (sigma - c - 1) on the omitted tail.
/// Throws std::invalid_argument when Re(s) <= 1 + c or N exceeds the series.
TwistSum evaluate_nonlinear_twist(const CoefficientSeries& x, Complex s,
                                  const NonlinearTwistParams& params, std::int64_t N);

struct DecompositionNumericResult {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  double combined_tail = 0.0;
};

/// Both sides of the decomposition at (s, alpha, lambda), truncated at N.
/// The right side sums scalar m^{-s} F^{chi*}(s, 0, m^lambda alpha, lambda).
DecompositionNumericResult verify_lemma3_numeric(const CoefficientSeries& x, const Decomposition& dec,
                                          double alpha, double lambda, Complex s, std::int64_t N);

/// sum_{k | m, (k, m/k) = 1} phi((k,D)) mu((k,D)) r(m/k). Every prime of m
/// must divide D (std::invalid_argument otherwise).
std::int64_t telescoping_check(std::int64_t m, std::int64_t D);

}  // namespace ltwist
