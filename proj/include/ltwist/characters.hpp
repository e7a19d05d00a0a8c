// Dirichlet characters held exactly as exponent vectors over fixed
// generators of (Z/qZ)^*.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "ltwist/roots.hpp"

namespace ltwist {

/// One cyclic factor of the unit group. `generator` is the CRT lift mod q:
/// it is the local generator on its own prime-power component and 1 on
/// every other component.
struct GeneratorSlot {
  std::int64_t prime;
  int prime_exponent;         // component is prime^prime_exponent
  std::int64_t order;
  std::int64_t local_generator;  // residue mod prime^prime_exponent
  std::int64_t generator;        // residue mod q
};

/// Structure of (Z/qZ)^* with discrete-log tables. Odd prime powers use
/// their least primitive root; 4 uses -1; 8*2^k uses the pair {-1, 5}.
class UnitGroup {
 public:
  static std::shared_ptr<const UnitGroup> make(std::int64_t q);

  std::int64_t modulus() const { return q_; }
  std::int64_t order() const { return order_; }
  /// lcm of the slot orders; every character value is e(k/exponent()).
  std::int64_t exponent() const { return exponent_; }
  const std::vector<GeneratorSlot>& slots() const { return slots_; }

  bool is_unit(std::int64_t n) const;
  /// Discrete logs of n (mod q) with respect to the slot generators.
  /// n must be a unit.
  std::vector<std::int64_t> log(std::int64_t n) const;

  /// e(k/exponent()) for 0 <= k < exponent(), precomputed.
  const std::complex<double>& root(std::int64_t k) const { return roots_[k]; }

 private:
  explicit UnitGroup(std::int64_t q);

  std::int64_t q_;
  std::int64_t order_;
  std::int64_t exponent_;
  std::vector<GeneratorSlot> slots_;
  std::vector<std::vector<std::int64_t>> logs_;  // by residue; empty if not a unit
  std::vector<std::complex<double>> roots_;
};

class DirichletCharacter {
 public:
  /// exponents[i] in [0, slots[i].order): chi(generator_i) = e(exponents[i]/order_i).
  DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                     std::vector<std::int64_t> exponents);

  /// The character mod 1 (identically 1 on all integers).
  static DirichletCharacter trivial();
  static DirichletCharacter principal(std::int64_t q);

  std::int64_t modulus() const { return group_->modulus(); }
  const std::vector<std::int64_t>& exponents() const { return exponents_; }
  const UnitGroup& group() const { return *group_; }

  RootOfUnity operator()(std::int64_t n) const;
  std::complex<double> complex_value(std::int64_t n) const;

  bool is_principal() const;
  std::int64_t conductor() const;
  bool is_primitive() const { return conductor() == modulus(); }
  /// The primitive character mod conductor() inducing this one.
  DirichletCharacter primitive() const;
  DirichletCharacter conj() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<std::int64_t> exponents_;
  std::vector<std::int64_t> numerators_;  // value e(k/exponent); -1 marks zero
};

/// All phi(q) characters mod q, principal first, then mixed-radix order
/// over the slot exponents (first slot varies fastest).
std::vector<DirichletCharacter> enumerate_characters(std::int64_t q);

enum class GaussMethod { DirectSum, ClosedForm };

struct GaussSumValue {
  std::complex<double> value;
  GaussMethod method;
};

/// tau(chi) = sum_{n mod q} chi(n) e(n/q), summed directly.
GaussSumValue gauss_sum(const DirichletCharacter& chi);
/// tau(chi) = mu(q/f) chi*(q/f) tau(chi*), with tau(chi*) summed directly.
GaussSumValue gauss_sum_closed_form(const DirichletCharacter& chi);

enum class CoefficientMethod { ClosedForm, DirectSum };

/// Fourier coefficient c(chi, a/D) of chi_0(n) e(-an/D) on the characters
/// mod D = chi.modulus(). Closed form:
///   mu(D/f) chi*(a) conj(chi*(D/f)) conj(tau(chi*)).
/// Direct: sum_{n mod D} conj(chi(n)) e(-an/D).
/// Throws std::invalid_argument when gcd(a, D) > 1.
std::complex<double> c_coefficient(const DirichletCharacter& chi, std::int64_t a,
                                   CoefficientMethod method = CoefficientMethod::ClosedForm);

/// The expansion of chi_0(n) e(-an/D) over the characters mod D, with the
/// closed-form coefficients computed once for repeated evaluation.
class CharacterExpansion {
 public:
  CharacterExpansion(std::int64_t D, std::int64_t a);

  std::int64_t modulus() const { return D_; }
  const std::vector<DirichletCharacter>& characters() const { return chars_; }
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }

  std::complex<double> lhs(std::int64_t n) const;
  std::complex<double> rhs(std::int64_t n) const;
  double residual(std::int64_t n) const { return std::abs(lhs(n) - rhs(n)); }

 private:
  std::int64_t D_;
  std::int64_t a_;
  std::vector<DirichletCharacter> chars_;
  std::vector<std::complex<double>> coeffs_;
};

/// |chi_0(n) e(-an/D) - (1/phi(D)) sum_chi c(chi, a/D) chi(n)|.
double verify_lemma1(std::int64_t D, std::int64_t a, std::int64_t n);

}  // namespace ltwist
