#include "ltwist/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ltwist/invariants.hpp"
#include "ltwist/twistdecomp.hpp"

namespace ltwist {

namespace {

bool same(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }

bool contains(const std::vector<std::size_t>& v, std::size_t i) {
  return std::find(v.begin(), v.end(), i) != v.end();
}

}  // namespace

SaturationReport saturation_check(const CoefficientSeries& x, std::int64_t D,
                                  const std::vector<std::int64_t>& M_list,
                                  std::int64_t search_bound) {
  if (D < 1) throw std::invalid_argument("saturation_check: D must be positive");
  SaturationReport report;
  report.D = D;
  report.search_bound = std::min(search_bound, x.size());
  for (const auto M : M_list) {
    if (M < 1) throw std::invalid_argument("saturation_check: M must be positive");
    for (std::int64_t a = 0; a < D; ++a) {
      if (std::gcd(a, D) != 1) continue;
      SaturationEntry entry{M, a, std::nullopt};
      for (std::int64_t nu = a == 0 ? D : a; nu <= report.search_bound; nu += D) {
        if (std::gcd(nu, M) == 1 && std::abs(x(nu)) > kNonzeroCoefficient) {
          entry.witness = nu;
          break;
        }
      }
      if (!entry.witness) report.saturated = false;
      report.entries.push_back(entry);
    }
  }
  return report;
}

int independence_rank(const CoefficientSeries& x, std::int64_t D, std::int64_t M,
                      std::int64_t cutoff) {
  if (cutoff > x.size()) throw std::invalid_argument("independence_rank: cutoff exceeds N");
  const auto chars = enumerate_characters(D);
  std::vector<std::int64_t> cols;
  for (std::int64_t n = 1; n <= cutoff; ++n)
    if (std::gcd(n, M) == 1) cols.push_back(n);
  if (cols.empty()) return 0;
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(chars.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          x(cols[j]) * chars[i].complex_value(cols[j]);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  return rank;
}

void TwistHypothesis::validate() const {
  if (D < 1 || !is_squarefree(D)) throw std::invalid_argument("hypothesis: D must be squarefree");
  if (static_cast<std::int64_t>(twists.size()) != euler_phi(D))
    throw std::invalid_argument("hypothesis: need one entry per character mod D (" +
                                std::to_string(euler_phi(D)) + ")");
  for (const auto& t : twists) {
    if (!(t.degree >= 2.0))
      throw std::invalid_argument("hypothesis: twist degrees must be >= 2");
    if (!std::isfinite(t.theta)) throw std::invalid_argument("hypothesis: theta must be finite");
    if (t.conductor <= 0) throw std::invalid_argument("hypothesis: conductors must be positive");
  }
}

std::string to_string(AuditBranch b) {
  switch (b) {
    case AuditBranch::Degree: return "degree";
    case AuditBranch::Shift: return "shift";
    case AuditBranch::Consistent: return "consistent";
  }
  return "?";
}

std::string to_string(ResidueClass c) {
  switch (c) {
    case ResidueClass::VanishNonintegral: return "VANISH-NONINTEGRAL";
    case ResidueClass::VanishProperDivisor: return "VANISH-PROPER-DIVISOR";
    case ResidueClass::Active: return "ACTIVE";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Contradiction: return "CONTRADICTION";
    case Verdict::NoWitnessUpToBound: return "NO-WITNESS-UP-TO-BOUND";
    case Verdict::HypothesisConsistent: return "HYPOTHESIS-CONSISTENT";
  }
  return "?";
}

AuditSets compute_sets(const TwistHypothesis& h, const SplitTable& split) {
  h.validate();
  if (split.D() != h.D) throw std::invalid_argument("compute_sets: split table is for another D");
  AuditSets s;
  s.D = h.D;
  s.characters = enumerate_characters(h.D);
  for (std::size_t i = 0; i < s.characters.size(); ++i) {
    s.primitives.push_back(s.characters[i].primitive());
    s.cofactor_star.push_back(split.star_of(h.D / s.primitives.back().modulus()));
    s.conductors.push_back(h.twists[i].conductor);
  }
  const std::size_t count = h.twists.size();

  double d0 = 0.0;
  for (const auto& t : h.twists) d0 = std::max(d0, t.degree);
  if (!same(d0, 2.0)) {
    s.branch = AuditBranch::Degree;
    s.d0 = d0;
    for (std::size_t i = 0; i < count; ++i)
      if (same(h.twists[i].degree, d0)) s.A0.push_back(i);
    s.theta0 = h.twists[s.A0.front()].theta;
    for (const auto i : s.A0) s.theta0 = std::min(s.theta0, h.twists[i].theta);
  } else {
    s.d0 = 2.0;
    for (std::size_t i = 0; i < count; ++i) s.A0.push_back(i);
    std::optional<double> theta0;
    for (const auto& t : h.twists)
      if (!same(t.theta, h.theta_F)) theta0 = theta0 ? std::min(*theta0, t.theta) : t.theta;
    if (!theta0) {
      s.branch = AuditBranch::Consistent;
      s.theta0 = h.theta_F;
      s.lambda0 = 0.5;
      return s;
    }
    s.branch = AuditBranch::Shift;
    s.theta0 = *theta0;
  }
  s.lambda0 = 1.0 / s.d0;
  for (const auto i : s.A0)
    if (same(h.twists[i].theta, s.theta0)) s.B0.push_back(i);

  s.q0 = 0;
  for (const auto i : s.B0) {
    const Rational v = s.cofactor_star[i] * s.conductors[i];
    if (v > s.q0) s.q0 = v;
  }
  BigInt M = 1;
  for (const auto i : s.B0) {
    if (Rational(s.cofactor_star[i] * s.conductors[i]) == s.q0) {
      s.C0.push_back(i);
    } else {
      const Rational ratio = s.conductors[i] / s.q0;
      s.reduced_ratio[i] = ratio;
      M = boost::multiprecision::lcm(M, denominator(ratio));
    }
  }
  if (M > BigInt(std::int64_t{1} << 40)) throw std::overflow_error("compute_sets: M too large");
  s.M = static_cast<std::int64_t>(M);
  return s;
}

ResidueTerm classify_residue_term(std::size_t chi, std::int64_t m, std::int64_t nu,
                                  const AuditSets& sets) {
  if (!contains(sets.B0, chi)) throw std::invalid_argument("classify_residue_term: chi not in B0");
  const std::int64_t star = sets.cofactor_star[chi];
  if (m < 1 || star % m != 0)
    throw std::invalid_argument("classify_residue_term: m must divide (D/f)*");
  if (nu < 1 || std::gcd(nu, sets.M * sets.D) != 1)
    throw std::invalid_argument("classify_residue_term: need gcd(nu, MD) = 1");

  ResidueTerm term;
  term.index = sets.conductors[chi] * m * nu / sets.q0;
  const bool integral = is_integer(term.index);
  if (contains(sets.C0, chi) && m == star) {
    if (term.index != nu) throw std::logic_error("classify_residue_term: active index differs from nu");
    term.cls = ResidueClass::Active;
    return term;
  }
  if (integral)
    throw std::logic_error("classify_residue_term: integral index " + term.index.str() +
                           " on a term the argument says vanishes");
  term.cls = contains(sets.C0, chi) ? ResidueClass::VanishProperDivisor
                                    : ResidueClass::VanishNonintegral;
  return term;
}

std::map<std::size_t, Complex> ell_coefficients(const AuditSets& sets, const SplitTable& split,
                                                Complex s0,
                                                const std::map<std::size_t, Complex>& constants) {
  std::map<std::size_t, Complex> out;
  for (const auto i : sets.C0) {
    const auto& chi = sets.characters[i];
    const std::int64_t cofactor = sets.D / sets.primitives[i].modulus();
    Complex value = f_coefficient(chi, sets.cofactor_star[i], 1, split);
    for (const auto p : prime_divisors(cofactor)) {
      const auto& factor = split.factor(p);
      const Complex lead = factor.A.at(static_cast<std::size_t>(factor.degree));
      if (std::abs(lead) == 0.0)
        throw ZeroLeadingCoefficient("leading coefficient A_" + std::to_string(factor.degree) +
                                     "(" + std::to_string(p) + ") vanishes");
      value *= lead * std::exp(-static_cast<double>(factor.degree) * s0 *
                               std::log(static_cast<double>(p)));
    }
    const auto c = constants.find(i);
    out[i] = value * (c == constants.end() ? Complex{1.0} : c->second);
  }
  return out;
}

AuditReport find_contradiction(const CoefficientSeries& x, const SplitTable& split,
                               const TwistHypothesis& h, std::int64_t nu_bound,
                               const std::map<std::size_t, Complex>& constants) {
  AuditReport report;
  report.sets = compute_sets(h, split);
  const AuditSets& s = report.sets;
  report.nu_bound = std::min(nu_bound, x.size());
  report.notes.push_back("f(chi, m, 1/D) is evaluated as f(chi, m, a) with a = 1");
  report.notes.push_back(
      "twist conductors are rational, so the case of an irrational q(chi*)/q0 does not arise");
  report.notes.push_back("degrees below 2 are rejected on input");
  report.notes.push_back(constants.empty() ? "unknown residue constants c(F^chi*) set to 1"
                                           : "residue constants c(F^chi*) supplied by caller");

  if (s.branch == AuditBranch::Consistent) {
    report.verdict = Verdict::HypothesisConsistent;
    report.s0 = {0.75, -s.theta0};
    return report;
  }
  if (s.branch == AuditBranch::Shift)
    report.notes.push_back("shift branch: theta0 is the least shift different from theta_F, lambda0 = 1/2");

  report.s0 = {0.5 + 1.0 / (2.0 * s.d0), -s.theta0};
  report.ell = ell_coefficients(s, split, report.s0, constants);

  const bool integer_degree = std::abs(s.d0 - std::round(s.d0)) == 0.0;
  const int d0 = static_cast<int>(std::round(s.d0));
  for (std::int64_t nu = 1; nu <= report.nu_bound; ++nu) {
    if (std::gcd(nu, s.M * s.D) != 1) continue;
    for (const auto i : s.B0) {
      for (const auto m : divisors(s.cofactor_star[i])) {
        const auto term = classify_residue_term(i, m, nu, s);
        ++report.terms_classified;
        if (integer_degree) {
          // n_alpha at alpha = m^(1/d0) alpha_nu from the pole predictor.
          const auto pole = predict_pole(Rational(d0), s.conductors[i], s.theta0,
                                         alpha_nu(d0, s.q0, nu).times_root(m, d0));
          const bool active = term.cls == ResidueClass::Active;
          if (pole.integral != active || (active && pole.index != nu) ||
              (pole.n_alpha_exact && *pole.n_alpha_exact != term.index))
            ++report.classification_mismatches;
        }
      }
    }
    Complex sum{};
    for (const auto& [i, ell] : report.ell) sum += std::conj(ell) * s.primitives[i].complex_value(nu);
    sum *= x(nu);
    if (std::abs(sum) > kWitnessThreshold) {
      report.witness = nu;
      report.witness_sum = sum;
      report.verdict = Verdict::Contradiction;
      if (s.C0.size() > 1)
        report.notes.push_back(
            "assuming nonzero constants: with |C0| > 1 the witness sum depends on the unknown constants");
      return report;
    }
  }
  report.verdict = Verdict::NoWitnessUpToBound;
  return report;
}

}  // namespace ltwist
