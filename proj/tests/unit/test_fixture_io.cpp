#include <gtest/gtest.h>

#include <random>

#include "ltwist/fixture_io.hpp"

using namespace ltwist;

namespace {

std::string location_of(std::string_view text) {
  try {
    parse_fixture(text);
  } catch (const DocumentError& e) {
    return e.location();
  }
  return "";
}

}  // namespace

TEST(FixtureIo, RoundTripIsBitExact) {
  for (const auto& family : {"zeta-squared", "delta", "zeta-l"}) {
    const auto doc = make_fixture(family, 300);
    const auto text = serialize_fixture(doc);
    const auto back = parse_fixture(text);
    EXPECT_EQ(serialize_fixture(back), text) << family;
    ASSERT_EQ(back.series.size(), doc.series.size());
    for (std::int64_t n = 1; n <= doc.series.size(); ++n) ASSERT_EQ(back.series(n), doc.series(n));
    EXPECT_EQ(back.series.growth_exponent(), doc.series.growth_exponent());
    ASSERT_TRUE(back.gamma.has_value());
    EXPECT_EQ(back.gamma->Q, doc.gamma->Q);
    EXPECT_EQ(back.gamma->omega, doc.gamma->omega);
  }
}

TEST(FixtureIo, RandomDoublesRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<Complex> a(200);
  for (auto& z : a) z = {u(rng) * 1e-7, u(rng)};
  FixtureDocument doc{CoefficientSeries("random", a, 0.25, 3.5), std::nullopt, ""};
  const auto back = parse_fixture(serialize_fixture(doc));
  for (std::int64_t n = 1; n <= 200; ++n) EXPECT_EQ(back.series(n), a[n - 1]);
  EXPECT_EQ(back.series.growth_constant(), 3.5);
  EXPECT_FALSE(back.gamma.has_value());
}

TEST(FixtureIo, ZetaSquaredContent) {
  const auto doc = make_fixture("zeta-squared", 100);
  EXPECT_EQ(doc.series(12), Complex(6.0));
  EXPECT_THROW(make_fixture("nope", 10), std::invalid_argument);
  EXPECT_THROW(make_fixture("zeta-l", 10, 6), std::invalid_argument);
}

TEST(FixtureIo, ErrorLocations) {
  EXPECT_EQ(location_of("{\n  \"label\": \"x\",\n  \"N\": 1,,\n}"), "line 3, column 10");
  EXPECT_EQ(location_of(R"({"label":"x","N":2,"coefficients":[[1,0]],"growth_exponent":0})"),
            "/coefficients");
  EXPECT_EQ(location_of(R"({"label":"x","N":2,"coefficients":[[1,0],[1]],"growth_exponent":0})"),
            "/coefficients/1");
  EXPECT_EQ(location_of(R"({"label":"x","N":1,"coefficients":[[1,0]]})"), "/growth_exponent");
  EXPECT_EQ(location_of(R"({"label":"x","N":1,"coefficients":[[1,"a"]],"growth_exponent":0})"),
            "/coefficients/0/1");
  EXPECT_EQ(location_of(R"({"label":"x","N":1,"coefficients":[[1,0]],"growth_exponent":0,
              "gamma":{"Q":1,"factors":[{"lambda":0.5}],"omega":[1,0]}})"),
            "/gamma/factors/0/mu");
  EXPECT_EQ(location_of("[]"), "/");
}

TEST(FixtureIo, GammaRoundTrip) {
  const auto g = zeta_times_l_gamma(enumerate_characters(5)[1]);
  const auto back = gamma_from_json(gamma_to_json(g));
  EXPECT_EQ(back.Q, g.Q);
  ASSERT_EQ(back.factors.size(), g.factors.size());
  for (std::size_t i = 0; i < g.factors.size(); ++i) {
    EXPECT_EQ(back.factors[i].lambda, g.factors[i].lambda);
    EXPECT_EQ(back.factors[i].mu, g.factors[i].mu);
  }
  EXPECT_EQ(back.omega, g.omega);
}

TEST(Hypothesis, Parse) {
  const auto h = parse_hypothesis(R"({"theta_F": 0, "entries": [
      {"chi_index": 1, "degree": 2, "theta": 0.3, "conductor": "9/4"},
      {"chi_index": 0, "degree": 3, "theta": 0, "conductor": 1}]})",
                                  6);
  EXPECT_EQ(h.D, 6);
  ASSERT_EQ(h.twists.size(), 2u);
  EXPECT_EQ(h.twists[0].degree, 3.0);
  EXPECT_EQ(h.twists[1].conductor, Rational(9, 4));
  EXPECT_EQ(h.twists[1].theta, 0.3);
}

TEST(Hypothesis, Errors) {
  auto where = [](std::string_view text) -> std::string {
    try {
      parse_hypothesis(text, 6);
    } catch (const DocumentError& e) {
      return e.location();
    }
    return "";
  };
  EXPECT_EQ(where(R"({"entries": [{"chi_index": 0, "degree": 3, "theta": 0, "conductor": 1}]})"),
            "/entries");
  EXPECT_EQ(where(R"({"entries": [{"chi_index": 2, "degree": 3, "theta": 0, "conductor": 1}]})"),
            "/entries/0/chi_index");
  EXPECT_EQ(where(R"({"entries": [{"chi_index": 0, "degree": 3, "theta": 0, "conductor": "x"},
                                  {"chi_index": 1, "degree": 3, "theta": 0, "conductor": 1}]})"),
            "/entries/0/conductor");
  EXPECT_EQ(where(R"({"entries": [{"chi_index": 0, "degree": 1, "theta": 0, "conductor": 1},
                                  {"chi_index": 1, "degree": 3, "theta": 0, "conductor": 1}]})"),
            "/entries");
}

TEST(DecompositionJson, Schema) {
  const auto split = build_split_table(divisor_series(1000), 2, 2);
  const auto j = decomposition_to_json(decompose(split, 1));
  ASSERT_EQ(j.size(), 3u);
  for (const auto& t : j) {
    EXPECT_TRUE(t.contains("chi_conductor"));
    EXPECT_TRUE(t.contains("chi_index"));
    EXPECT_TRUE(t.contains("m"));
    EXPECT_EQ(t["scalar"].size(), 2u);
  }
}
