// The finite core of the contradiction argument for twists of a saturated
// series: saturation search, the sets A0/B0/C0, q0 and M, classification of
// the residue terms, the coefficients l(chi) and the witness search.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltwist/arith.hpp"
#include "ltwist/characters.hpp"
#include "ltwist/series.hpp"

namespace ltwist {

struct SaturationEntry {
  std::int64_t M = 1;
  std::int64_t residue = 0;               // a mod D
  std::optional<std::int64_t> witness;    // least nu found, if any
};

struct SaturationReport {
  std::int64_t D = 1;
  std::int64_t search_bound = 0;
  bool saturated = true;                  // every (M, a) pair has a witness
  std::vector<SaturationEntry> entries;
};

inline constexpr double kNonzeroCoefficient = 1e-12;

/// For each M and each reduced residue a mod D, the least nu <= bound with
/// nu = a (mod D), gcd(nu, M) = 1 and |a(nu)| > 1e-12. The bound is capped at N.
SaturationReport saturation_check(const CoefficientSeries& x, std::int64_t D,
                                  const std::vector<std::int64_t>& M_list,
                                  std::int64_t search_bound);

/// Numerical rank (singular values above 1e-8 of the largest) of the
/// phi(D) x K matrix with rows (a(n) chi(n)) over n <= cutoff, gcd(n, M) = 1.
int independence_rank(const CoefficientSeries& x, std::int64_t D, std::int64_t M,
                      std::int64_t cutoff);

/// Degree, internal shift and conductor of the twist F^{chi*}.
struct TwistInvariants {
  double degree = 2.0;
  double theta = 0.0;
  Rational conductor{1};
};

/// Hypothetical invariants of every twist, indexed like enumerate_characters(D).
struct TwistHypothesis {
  std::int64_t D = 1;
  double theta_F = 0.0;
  std::vector<TwistInvariants> twists;

  /// Throws std::invalid_argument unless there are phi(D) entries, every
  /// degree is >= 2 and every conductor is positive.
  void validate() const;
};

enum class AuditBranch {
  Degree,      // some degree exceeds 2
  Shift,       // all degrees 2, some shift differs from theta_F
  Consistent,  // all degrees 2 and all shifts theta_F
};

std::string to_string(AuditBranch b);

struct AuditSets {
  AuditBranch branch = AuditBranch::Consistent;
  std::int64_t D = 1;
  double d0 = 2.0;
  double lambda0 = 0.5;
  double theta0 = 0.0;
  std::vector<std::size_t> A0, B0, C0;  // character indices
  Rational q0{1};
  std::int64_t M = 1;
  std::vector<DirichletCharacter> characters;  // enumerate_characters(D)
  std::vector<DirichletCharacter> primitives;  // chi* for each character
  std::vector<std::int64_t> cofactor_star;     // (D/f_chi)* for each character
  std::vector<Rational> conductors;            // q(chi*) for each character
  /// For chi in B0 \ C0: q(chi*)/q0 = l/m in lowest terms.
  std::map<std::size_t, Rational> reduced_ratio;
};

/// Sets of the contradiction argument. In the degree branch theta0 is the
/// least shift on A0; in the shift branch theta0 is the least shift that
/// differs from theta_F (any such choice is admissible).
AuditSets compute_sets(const TwistHypothesis& h, const SplitTable& split);

enum class ResidueClass { VanishNonintegral, VanishProperDivisor, Active };
std::string to_string(ResidueClass c);

struct ResidueTerm {
  ResidueClass cls = ResidueClass::Active;
  Rational index;  // n = q(chi*) m nu / q0
};

/// Classifies the residue term of (chi in B0, m | (D/f)*) at nu by the exact
/// index q(chi*) m nu / q0. Throws std::invalid_argument if gcd(nu, MD) > 1
/// or chi is not in B0, and std::logic_error if an integral index occurs
/// anywhere other than chi in C0, m = (D/f)*.
ResidueTerm classify_residue_term(std::size_t chi, std::int64_t m, std::int64_t nu,
                                  const AuditSets& sets);

class ZeroLeadingCoefficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// l(chi) = c f(chi, (D/f)*, 1) prod_{p | D/f} A_{deg p}(p) p^{-deg_p s0} for
/// chi in C0, with the unknown constants c taken from `constants` (default 1).
std::map<std::size_t, Complex> ell_coefficients(const AuditSets& sets, const SplitTable& split,
                                                Complex s0,
                                                const std::map<std::size_t, Complex>& constants = {});

enum class Verdict { Contradiction, NoWitnessUpToBound, HypothesisConsistent };
std::string to_string(Verdict v);

struct AuditReport {
  AuditSets sets;
  Complex s0;
  std::map<std::size_t, Complex> ell;
  std::optional<std::int64_t> witness;
  Complex witness_sum;  // a(nu) sum conj(l(chi)) chi*(nu) at the witness
  Verdict verdict = Verdict::NoWitnessUpToBound;
  std::int64_t nu_bound = 0;
  std::int64_t terms_classified = 0;
  /// Terms whose classification disagreed with the integrality of n_alpha
  /// computed independently from alpha_nu (only when d0 is an integer).
  std::int64_t classification_mismatches = 0;
  std::vector<std::string> notes;
};

inline constexpr double kWitnessThreshold = 1e-9;
inline constexpr std::int64_t kDefaultNuBound = 10000;

/// Scans nu <= nu_bound (capped at N) with gcd(nu, MD) = 1 for a nonzero
/// a(nu) sum_{chi in C0} conj(l(chi)) chi*(nu). Consistent hypotheses are
/// reported without scanning.
AuditReport find_contradiction(const CoefficientSeries& x, const SplitTable& split,
                               const TwistHypothesis& h, std::int64_t nu_bound = kDefaultNuBound,
                               const std::map<std::size_t, Complex>& constants = {});

}  // namespace ltwist
