#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "ltwist/arith.hpp"
#include "ltwist/audit.hpp"
#include "ltwist/invariants.hpp"

using namespace ltwist;

namespace {

const CoefficientSeries& zeta2() {
  static const CoefficientSeries x = divisor_series(50000);
  return x;
}

TwistHypothesis uniform(std::int64_t D, double degree, double theta, double theta_F = 0.0) {
  TwistHypothesis h;
  h.D = D;
  h.theta_F = theta_F;
  h.twists.assign(static_cast<std::size_t>(euler_phi(D)), {degree, theta, Rational(1)});
  return h;
}

}  // namespace

TEST(Saturation, ZetaSquared) {
  const auto r = saturation_check(zeta2(), 6, {2, 3, 5, 7, 210}, 10000);
  EXPECT_TRUE(r.saturated);
  EXPECT_EQ(r.entries.size(), 10u);
  for (const auto& e : r.entries) {
    ASSERT_TRUE(e.witness.has_value());
    EXPECT_EQ(*e.witness % 6, e.residue);
    EXPECT_EQ(std::gcd(*e.witness, e.M), 1);
  }
  const auto r1 = saturation_check(zeta2(), 1, {1}, 10);
  EXPECT_TRUE(r1.saturated);
  ASSERT_EQ(r1.entries.size(), 1u);
  EXPECT_EQ(*r1.entries[0].witness, 1);
}

TEST(Saturation, FlagsMissingClass) {
  std::vector<Complex> a(1000, Complex(1.0));
  for (std::size_t n = 2; n <= a.size(); n += 3) a[n - 1] = 0.0;
  const CoefficientSeries x("holes", std::move(a));
  const auto r = saturation_check(x, 3, {1, 7}, 1000);
  EXPECT_FALSE(r.saturated);
  for (const auto& e : r.entries) EXPECT_EQ(e.witness.has_value(), e.residue == 1);
}

TEST(IndependenceRank, Examples) {
  EXPECT_EQ(independence_rank(zeta2(), 6, 1, 200), 2);
  EXPECT_EQ(independence_rank(zeta2(), 1, 1, 200), 1);
  for (std::int64_t D : {2, 3, 6, 10}) EXPECT_EQ(independence_rank(zeta2(), D, 7, 500), euler_phi(D));
  std::vector<Complex> a(600, Complex{});
  for (std::size_t n = 1; n <= a.size(); n += 5) a[n - 1] = 1.0;
  EXPECT_EQ(independence_rank(CoefficientSeries("one-class", std::move(a)), 5, 1, 600), 1);
}

TEST(Sets, DegreeThreeAtSix) {
  const auto split = build_split_table(zeta2(), 6, 2);
  const auto s = compute_sets(uniform(6, 3, 0), split);
  EXPECT_EQ(s.branch, AuditBranch::Degree);
  EXPECT_EQ(s.d0, 3.0);
  EXPECT_NEAR(s.lambda0, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(s.A0, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.B0, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.C0, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.q0, Rational(36));
  EXPECT_EQ(s.cofactor_star[1], 4);
  EXPECT_EQ(s.reduced_ratio.at(1), Rational(1, 36));
  EXPECT_EQ(s.M, 36);
}

TEST(Sets, TrivialModulusAndShiftBranch) {
  const auto s1 = compute_sets(uniform(1, 3, 0), build_split_table(zeta2(), 1));
  EXPECT_EQ(s1.C0, (std::vector<std::size_t>{0}));
  EXPECT_EQ(s1.M, 1);

  const auto split = build_split_table(zeta2(), 6, 2);
  auto h = uniform(6, 2, 0.0);
  h.twists[1].theta = 0.3;
  const auto s = compute_sets(h, split);
  EXPECT_EQ(s.branch, AuditBranch::Shift);
  EXPECT_EQ(s.theta0, 0.3);
  EXPECT_EQ(s.B0, (std::vector<std::size_t>{1}));
  EXPECT_EQ(s.C0, (std::vector<std::size_t>{1}));
  EXPECT_EQ(compute_sets(uniform(6, 2, 0.0), split).branch, AuditBranch::Consistent);
}

TEST(Sets, HypothesisValidation) {
  auto h = uniform(6, 1.5, 0);
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h = uniform(6, 2, 0);
  h.twists.pop_back();
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h = uniform(6, 2, 0);
  h.twists[0].conductor = 0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(Classify, WorkedExamples) {
  const auto s = compute_sets(uniform(6, 3, 0), build_split_table(zeta2(), 6, 2));
  const auto t1 = classify_residue_term(1, 4, 5, s);
  EXPECT_EQ(t1.cls, ResidueClass::VanishNonintegral);
  EXPECT_EQ(t1.index, Rational(5, 9));
  const auto t2 = classify_residue_term(0, 12, 5, s);
  EXPECT_EQ(t2.cls, ResidueClass::VanishProperDivisor);
  EXPECT_EQ(t2.index, Rational(5, 3));
  const auto t3 = classify_residue_term(0, 36, 5, s);
  EXPECT_EQ(t3.cls, ResidueClass::Active);
  EXPECT_EQ(t3.index, Rational(5));
  EXPECT_THROW(classify_residue_term(0, 36, 2, s), std::invalid_argument);
  EXPECT_THROW(classify_residue_term(0, 5, 1, s), std::invalid_argument);
}

TEST(Classify, MatchesPolePredictorOnEveryTerm) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> deg(2, 4), num(1, 12), den(1, 6), coin(0, 1);
  for (std::int64_t D : {2, 3, 6, 10, 15, 30}) {
    const auto split = build_split_table(zeta2(), D, 2);
    for (int trial = 0; trial < 10; ++trial) {
      auto h = uniform(D, 2, 0);
      for (auto& t : h.twists) {
        t.degree = deg(rng);
        t.theta = coin(rng) ? 0.0 : 0.5;
        t.conductor = Rational(num(rng), den(rng));
      }
      const auto s = compute_sets(h, split);
      const int d0 = static_cast<int>(s.d0);
      for (std::int64_t nu = 1; nu <= 60; ++nu) {
        if (std::gcd(nu, s.M * s.D) != 1) continue;
        for (const auto i : s.B0) {
          for (const auto m : divisors(s.cofactor_star[i])) {
            const auto term = classify_residue_term(i, m, nu, s);
            const auto pole = predict_pole(d0, s.conductors[i], s.theta0,
                                           alpha_nu(d0, s.q0, nu).times_root(m, d0));
            ASSERT_TRUE(pole.exact);
            EXPECT_EQ(*pole.n_alpha_exact, term.index);
            EXPECT_EQ(pole.integral, term.cls == ResidueClass::Active);
          }
        }
      }
    }
  }
}

TEST(Ell, Examples) {
  const auto s1 = compute_sets(uniform(1, 3, 0), build_split_table(zeta2(), 1));
  const auto e1 = ell_coefficients(s1, build_split_table(zeta2(), 1), {2.0 / 3.0, 0.0});
  EXPECT_NEAR(std::abs(e1.at(0) - 1.0), 0.0, 1e-15);

  const auto split2 = build_split_table(zeta2(), 2, 2);
  const auto s2 = compute_sets(uniform(2, 3, 0), split2);
  const auto e2 = ell_coefficients(s2, split2, {2.0 / 3.0, 0.0});
  EXPECT_NEAR(std::abs(e2.at(0) - (-0.79370052598409973738)), 0.0, 1e-12);
}

TEST(Ell, NonzeroOnRandomHypotheses) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(2, 4), num(1, 20), coin(0, 2);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t D = std::vector<std::int64_t>{6, 10, 15}[trial % 3];
    const auto split = build_split_table(zeta2(), D, 2);
    auto h = uniform(D, 2, 0);
    for (auto& t : h.twists) {
      t.degree = deg(rng);
      t.theta = 0.1 * coin(rng);
      t.conductor = Rational(num(rng));
    }
    const auto s = compute_sets(h, split);
    const Complex s0{0.5 + 0.5 / s.d0, -s.theta0};
    for (const auto& [i, v] : ell_coefficients(s, split, s0)) {
      EXPECT_GT(std::abs(v), 1e-6);
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Contradiction, DegreeBranch) {
  const auto split = build_split_table(zeta2(), 6, 2);
  const auto r = find_contradiction(zeta2(), split, uniform(6, 3, 0), 10000);
  EXPECT_EQ(r.verdict, Verdict::Contradiction);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, 1);
  EXPECT_EQ(r.classification_mismatches, 0);
  EXPECT_GT(r.terms_classified, 0);
  EXPECT_EQ(r.s0, Complex(0.5 + 1.0 / 6.0, 0.0));
}

TEST(Contradiction, ShiftBranchAndConsistent) {
  const auto split = build_split_table(zeta2(), 6, 2);
  const auto r = find_contradiction(zeta2(), split, uniform(6, 2, 0.3), 10000);
  EXPECT_EQ(r.verdict, Verdict::Contradiction);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_LE(*r.witness, 100);
  EXPECT_EQ(r.s0, Complex(0.75, -0.3));

  const auto c = find_contradiction(zeta2(), split, uniform(6, 2, 0.0), 10000);
  EXPECT_EQ(c.verdict, Verdict::HypothesisConsistent);
  EXPECT_FALSE(c.witness.has_value());
  EXPECT_EQ(c.terms_classified, 0);
}

TEST(Contradiction, NoWitnessWhenCoefficientsVanish) {
  const auto split = build_split_table(zeta2(), 2, 2);
  std::vector<Complex> a(200, Complex{});
  a[0] = 0.0;
  const CoefficientSeries zero("zero", std::move(a));
  const auto r = find_contradiction(zero, split, uniform(2, 3, 0), 150);
  EXPECT_EQ(r.verdict, Verdict::NoWitnessUpToBound);
  EXPECT_EQ(r.nu_bound, 150);
}

TEST(Contradiction, ConstantRescalingWithSingleActiveCharacter) {
  const auto split = build_split_table(zeta2(), 6, 2);
  const auto h = uniform(6, 4, 0);
  const auto base = find_contradiction(zeta2(), split, h, 10000);
  ASSERT_EQ(base.sets.C0.size(), 1u);
  for (const Complex c : {Complex(-3.0, 0.5), Complex(1e-3, 0.0), Complex(0.0, 7.0)}) {
    const auto r = find_contradiction(zeta2(), split, h, 10000, {{base.sets.C0[0], c}});
    EXPECT_EQ(r.verdict, base.verdict);
    EXPECT_EQ(r.witness, base.witness);
  }
}

TEST(Contradiction, SeveralActiveCharactersAreAnnotated) {
  const auto split = build_split_table(zeta2(), 5, 2);
  auto h = uniform(5, 3, 0);
  // Every character mod 5 except the principal one is primitive: (5/f)* = 1, so
  // giving them conductor 25 puts all three in C0.
  for (std::size_t i = 1; i < h.twists.size(); ++i) h.twists[i].conductor = 25;
  const auto r = find_contradiction(zeta2(), split, h, 10000);
  EXPECT_EQ(r.sets.C0.size(), 4u);
  EXPECT_EQ(r.verdict, Verdict::Contradiction);
  bool annotated = false;
  for (const auto& n : r.notes) annotated |= n.find("assuming nonzero constants") != std::string::npos;
  EXPECT_TRUE(annotated);
}

TEST(Contradiction, SaturationGivesWitnessForAnyCombination) {
  // Any nonzero combination of distinct characters is nonzero at some
  // admissible nu when the series is saturated.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::int64_t D : {3, 5, 6, 10}) {
    const auto chars = enumerate_characters(D);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Complex> c(chars.size());
      for (auto& z : c) z = {g(rng), g(rng)};
      bool found = false;
      for (std::int64_t nu = 1; nu <= 10000 && !found; ++nu) {
        if (std::gcd(nu, 7 * D) != 1) continue;
        Complex sum{};
        for (std::size_t i = 0; i < chars.size(); ++i)
          sum += c[i] * chars[i].primitive().complex_value(nu);
        found = std::abs(zeta2()(nu) * sum) > kWitnessThreshold;
      }
      EXPECT_TRUE(found);
    }
  }
}
