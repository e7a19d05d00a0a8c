// Acceptance run: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltwist/arith.hpp"
#include "ltwist/audit.hpp"
#include "ltwist/characters.hpp"
#include "ltwist/invariants.hpp"
#include "ltwist/phase.hpp"
#include "ltwist/series.hpp"
#include "ltwist/twistdecomp.hpp"
#include "oracles.hpp"

using namespace ltwist;

namespace {

const std::vector<std::int64_t> kModuli{2, 3, 5, 6, 10, 15, 30};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

// Fixture sizes: degree-2 detection at p needs p^4 <= N. 29^4 = 707281
// covers every prime of D <= 30; 47^4 = 4879681 covers p <= 50 for zeta^2.
struct Fixtures {
  CoefficientSeries zeta2_large;
  CoefficientSeries zeta2;
  CoefficientSeries delta;
  CoefficientSeries zeta_l;
  std::vector<__int128> tau;

  Fixtures() {
    zeta2_large = divisor_series(4879681);
    zeta2 = divisor_series(707281);
    delta = delta_normalized(1 << 20);
    zeta_l = zeta_times_l(enumerate_characters(4)[1], 707281);
    tau = oracle::tau_by_product(60);
  }
  std::vector<const CoefficientSeries*> all() const { return {&zeta2, &delta, &zeta_l}; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// AC1 -----------------------------------------------------------------------
void lemma1(Outcome& o) {
  double worst = 0.0, worst_c = 0.0;
  std::int64_t wD = 0, wa = 0, wn = 0;
  for (std::int64_t D = 1; D <= 60; ++D) {
    const auto chars = enumerate_characters(D);
    for (std::int64_t a = 1; a <= D; ++a) {
      if (std::gcd(a, D) != 1) continue;
      const CharacterExpansion e(D, a);
      for (std::int64_t n = 1; n <= 200; ++n) {
        const double r = e.residual(n);
        if (r > worst) worst = r, wD = D, wa = a, wn = n;
      }
      for (const auto& chi : chars)
        worst_c = std::max(worst_c, std::abs(c_coefficient(chi, a, CoefficientMethod::ClosedForm) -
                                             c_coefficient(chi, a, CoefficientMethod::DirectSum)));
    }
  }
  o.require(worst < 1e-9, "identity residual");
  o.require(worst_c < 1e-10, "closed vs direct c");
  o.detail << " residual " << sci(worst) << " at (D,a,n)=(" << wD << "," << wa << "," << wn
           << "), c agreement " << sci(worst_c);
}

// AC2 -----------------------------------------------------------------------
void lemma2(Outcome& o, const Fixtures& f) {
  double worst = 0.0;
  for (const auto* x : f.all()) {
    for (const auto D : kModuli) {
      const auto t = build_split_table(*x, D, 2);
      for (std::int64_t n = 1; n <= 10000; ++n) worst = std::max(worst, verify_lemma2(*x, t, n));
    }
  }
  o.require(worst < 1e-8, "residual");
  o.detail << " worst residual " << sci(worst);
}

// AC3 -----------------------------------------------------------------------
void lemma3(Outcome& o, const Fixtures& f) {
  double worst = 0.0, worst_paths = 0.0;
  for (const auto* x : f.all()) {
    for (const auto D : kModuli) {
      const auto t = build_split_table(*x, D, 2);
      for (std::int64_t a = 1; a <= D; ++a) {
        if (std::gcd(a, D) != 1) continue;
        const auto dec = decompose(t, a);
        for (std::int64_t n = 1; n <= 5000; ++n)
          worst = std::max(worst, verify_lemma3_coefficient(*x, dec, n));
        worst_paths = std::max(worst_paths, compare_decompositions(dec, decompose_recursive(t, a)));
      }
    }
  }
  o.require(worst < 1e-8, "per-coefficient residual");
  o.require(worst_paths < 1e-10, "closed form vs recursive");
  o.detail << " per-coefficient " << sci(worst) << ", closed vs recursive " << sci(worst_paths);
}

// AC4 -----------------------------------------------------------------------
void lemma3_numeric(Outcome& o, const Fixtures& f) {
  const std::int64_t N = 100000;
  const Complex s{2.0, 3.0};
  double worst_ratio = 0.0;
  int cases = 0;
  for (const auto* x : f.all()) {
    for (const auto D : kModuli) {
      const auto t = build_split_table(*x, D, 2);
      const auto dec = decompose(t, 1);
      for (double alpha : {0.0, 1.0}) {
        for (double lambda : {1.0 / 3.0, 0.5}) {
          const auto r = verify_lemma3_numeric(*x, dec, alpha, lambda, s, N);
          ++cases;
          worst_ratio = std::max(worst_ratio, r.residual / r.combined_tail);
          o.require(r.residual <= r.combined_tail, x->label() + " D=" + std::to_string(D));
        }
      }
    }
  }
  o.detail << " " << cases << " cases, worst residual/tail " << sci(worst_ratio);
}

// AC5 -----------------------------------------------------------------------
void telescoping(Outcome& o, const Fixtures& f) {
  int checked = 0;
  for (const auto* x : f.all()) {
    for (std::int64_t D = 1; D <= 30; ++D) {
      if (!is_squarefree(D)) continue;
      const auto t = build_split_table(*x, D, 2);
      for (const auto m : divisors(t.D_star())) {
        ++checked;
        o.require(telescoping_check(m, D) == 1, "m=" + std::to_string(m) + " D=" + std::to_string(D));
      }
    }
  }
  o.detail << " " << checked << " (m, D, fixture) cases equal 1";
}

// AC6 -----------------------------------------------------------------------
void splitting(Outcome& o, const Fixtures& f) {
  double worst_z = 0.0, worst_d = 0.0;
  for (const auto p : primes_up_to(50)) {
    const auto z = detect_polynomial_split(f.zeta2_large, p, 2);
    if (const auto* s = std::get_if<LocalFactorInverse>(&z); s && s->degree == 2) {
      worst_z = std::max({worst_z, std::abs(s->A[0] - 1.0), std::abs(s->A[1] + 2.0),
                          std::abs(s->A[2] - 1.0)});
    } else {
      o.require(false, "zeta^2 at p=" + std::to_string(p));
    }
  }
  // Delta at 2^20 reaches p <= 31 with the p^4 <= N margin.
  for (const auto p : primes_up_to(31)) {
    const auto d = detect_polynomial_split(f.delta, p, 2);
    const double ap = static_cast<double>(f.tau[p]) / std::pow(double(p), 5.5);
    if (const auto* s = std::get_if<LocalFactorInverse>(&d); s && s->degree == 2) {
      worst_d = std::max({worst_d, std::abs(s->A[0] - 1.0), std::abs(s->A[1] + ap),
                          std::abs(s->A[2] - 1.0)});
    } else {
      o.require(false, "delta at p=" + std::to_string(p));
    }
  }
  o.require(worst_z <= 1e-10, "zeta^2 coefficients");
  o.require(worst_d <= 1e-10, "delta coefficients");

  // Synthetic round trip: a(p^k) from 1 / P(X) with a random P of degree <= 4.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(1, 4), coef(-2, 2);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  const std::int64_t primes[] = {2, 3, 5, 7};
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t p = primes[pick(rng)];
    const int d = deg(rng);
    std::vector<Complex> A(static_cast<std::size_t>(d + 1));
    A[0] = 1.0;
    for (int l = 1; l <= d; ++l) A[l] = coef(rng);
    while (A[d] == Complex{}) A[d] = coef(rng);
    const std::int64_t N = checked_pow(p, 8);
    std::vector<Complex> a(static_cast<std::size_t>(N), Complex{});
    std::vector<Complex> u{1.0};
    for (int k = 1; k <= 8; ++k) {
      Complex next{};
      for (int l = 1; l <= d && l <= k; ++l) next -= A[l] * u[k - l];
      u.push_back(next);
    }
    for (int k = 0; k <= 8; ++k) a[checked_pow(p, k) - 1] = u[k];
    const auto got = detect_polynomial_split(CoefficientSeries("synthetic", std::move(a)), p, 4);
    const auto* s = std::get_if<LocalFactorInverse>(&got);
    bool ok = s && s->degree == d;
    for (int l = 0; ok && l <= d; ++l) ok = std::abs(s->A[l] - A[l]) <= 1e-8;
    recovered += ok;
  }
  o.require(recovered == 100, "synthetic round trip");
  o.detail << " zeta^2 p<=50 max err " << sci(worst_z) << ", delta p<=31 max err " << sci(worst_d)
           << ", synthetic " << recovered << "/100";
}

// AC7 -----------------------------------------------------------------------
void invariants(Outcome& o) {
  const auto z = compute_invariants(zeta_squared_gamma());
  const auto d = compute_invariants(delta_gamma());
  GammaFactorData g;
  g.Q = 1.0 / kPi;
  g.factors = {{0.5, {0.0, 1.0}}, {0.5, {0.0, 1.0}}};
  const auto s = compute_invariants(g);
  const double err = std::max({std::abs(z.d - 2), std::abs(z.q - 1), std::abs(z.theta),
                               std::abs(d.d - 2), std::abs(d.q - 1), std::abs(d.theta)});
  o.require(err <= 1e-12, "fixture triples");
  o.require(std::abs(s.theta - 2.0) <= 1e-12 && std::abs(s.d - 2) <= 1e-12 &&
                std::abs(s.q - 1) <= 1e-12,
            "synthetic shift");
  o.detail << " fixture error " << sci(err) << ", synthetic theta " << s.theta;
}

// AC8 -----------------------------------------------------------------------
void pole(Outcome& o) {
  int exact_hits = 0;
  for (std::int64_t nu = 1; nu <= 100; ++nu) {
    const auto p = predict_pole(2, 1, 0.0, alpha_nu(2, 1, nu));
    exact_hits += p.exact && p.integral && p.index == nu && *p.n_alpha_exact == Rational(nu);
  }
  o.require(exact_hits == 100, "alpha_nu round trip");
  // alpha with alpha^2 rational but not q-scaled to an integer: 1, 3/2, sqrt(5)/2, ...
  int nonintegral = 0;
  const std::vector<Alpha> alphas{Alpha::exact(1), Alpha::exact(Rational(3, 2)),
                                  Alpha::root_of(Rational(5, 4), 2), Alpha::root_of(7, 2),
                                  Alpha::root_of(Rational(4000000001, 1000000000), 2)};
  for (const auto& a : alphas) {
    const auto p = predict_pole(2, 1, 0.0, a);
    nonintegral += p.exact && !p.integral;
  }
  o.require(nonintegral == static_cast<int>(alphas.size()), "exact non-integrality");
  o.detail << " " << exact_hits << "/100 exact n_alpha = nu, " << nonintegral << "/" << alphas.size()
           << " exact non-integral";
}

// AC9 -----------------------------------------------------------------------
void phase(Outcome& o) {
  const std::vector<double> grid{1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
  double closed = 0.0;
  for (double beta : {1.0, 0.5, 0.2}) {
    const PhaseParams p{1.0, beta, 0.0, 1.0 / 3.0};
    for (double xi : grid) {
      const auto cp = solve_critical_point(xi, p);
      const double x_exact = std::pow(4.0 * kPi * xi / beta, 2);
      closed = std::max({closed, std::abs(cp.x0 / x_exact - 1.0),
                         std::abs(phase_over_2pi(cp, p) / (xi / beta) - 1.0)});
    }
  }
  o.require(closed <= 1e-10, "alpha = 0 closed form");

  int sets = 0, monotone = 0;
  double worst_final = 0.0;
  for (double lambda : {0.2, 1.0 / 3.0, 0.45, 0.5}) {
    for (double alpha : {1.0, -1.0, 3.0, -3.0}) {
      for (double beta : {0.5, 0.2, 1.0 / 30.0}) {
        const auto rows = phase_table(grid, {1.0, beta, alpha, lambda});
        bool dec = true;
        for (std::size_t i = 1; i < rows.size(); ++i) dec = dec && rows[i].residual < rows[i - 1].residual;
        ++sets;
        monotone += dec;
        worst_final = std::max(worst_final, rows.back().residual);
      }
    }
  }
  o.require(monotone == sets, "strictly decreasing");
  o.require(worst_final <= 1e-2, "final value");

  const std::vector<ExactPhase> exact{
      {Rational(1), Rational(1, 4), Rational(3), Rational(1, 2)},
      {Rational(4), Rational(1, 9), Rational(-5, 7), Rational(1, 2)},
      {Rational(1), Rational(1, 8), Rational(2), Rational(1, 3)},
      {Rational(27), Rational(1), Rational(-1, 3), Rational(1, 3)},
      {Rational(128), Rational(1, 2), Rational(1), Rational(1, 5)},
  };
  int involutions = 0;
  for (const auto& p : exact) {
    const auto once = dual_phase_exact(p);
    const auto twice = once ? dual_phase_exact(*once) : std::nullopt;
    involutions += twice && *twice == p;
  }
  o.require(involutions == static_cast<int>(exact.size()), "exact involution");
  o.detail << " closed form " << sci(closed) << ", " << monotone << "/" << sets
           << " grids decreasing, worst final " << sci(worst_final) << ", involution "
           << involutions << "/" << exact.size();
}

// AC10 ----------------------------------------------------------------------
TwistHypothesis hypothesis(std::int64_t D, std::vector<std::pair<double, double>> deg_theta) {
  TwistHypothesis h;
  h.D = D;
  for (const auto& [d, t] : deg_theta) h.twists.push_back({d, t, Rational(1)});
  return h;
}

void audit(Outcome& o, const Fixtures& f) {
  const auto split = build_split_table(f.zeta2, 6, 2);
  struct Case {
    std::string name;
    TwistHypothesis h;
    Verdict expected;
  };
  const std::vector<Case> cases{
      {"d=(3,3)", hypothesis(6, {{3, 0}, {3, 0}}), Verdict::Contradiction},
      {"d=(4,4)", hypothesis(6, {{4, 0}, {4, 0}}), Verdict::Contradiction},
      {"d=(2,3)", hypothesis(6, {{2, 0}, {3, 0}}), Verdict::Contradiction},
      {"d=(3,2)", hypothesis(6, {{3, 0}, {2, 0}}), Verdict::Contradiction},
      {"d=(4,3)", hypothesis(6, {{4, 0}, {3, 0}}), Verdict::Contradiction},
      {"d=(2,4)", hypothesis(6, {{2, 0}, {4, 0.3}}), Verdict::Contradiction},
      {"theta=(0.3,0.3)", hypothesis(6, {{2, 0.3}, {2, 0.3}}), Verdict::Contradiction},
      {"theta=(0,0.3)", hypothesis(6, {{2, 0}, {2, 0.3}}), Verdict::Contradiction},
      {"theta=(0.3,0)", hypothesis(6, {{2, 0.3}, {2, 0}}), Verdict::Contradiction},
      {"consistent", hypothesis(6, {{2, 0}, {2, 0}}), Verdict::HypothesisConsistent},
  };
  std::int64_t terms = 0, mismatches = 0, worst_witness = 0;
  for (const auto& c : cases) {
    const auto r = find_contradiction(f.zeta2, split, c.h, 10000);
    o.require(r.verdict == c.expected, c.name + " verdict " + to_string(r.verdict));
    if (c.expected == Verdict::Contradiction) {
      o.require(r.witness && *r.witness <= 100, c.name + " witness");
      if (r.witness) worst_witness = std::max(worst_witness, *r.witness);
    }
    terms += r.terms_classified;
    mismatches += r.classification_mismatches;
  }
  // Classification over the full scan range, independent of where the witness stopped.
  for (const auto& c : cases) {
    const auto s = compute_sets(c.h, split);
    for (std::int64_t nu = 1; nu <= 10000; ++nu) {
      if (std::gcd(nu, s.M * s.D) != 1) continue;
      for (const auto i : s.B0) {
        for (const auto m : divisors(s.cofactor_star[i])) {
          const auto term = classify_residue_term(i, m, nu, s);
          ++terms;
          const bool active = term.cls == ResidueClass::Active;
          if (active != is_integer(term.index)) ++mismatches;
        }
      }
    }
  }
  o.require(mismatches == 0, "classification");
  o.detail << " " << cases.size() << " hypotheses, largest witness " << worst_witness << ", "
           << terms << " terms classified, " << mismatches << " mismatches";
}

// AC11 ----------------------------------------------------------------------
void saturation(Outcome& o, const Fixtures& f) {
  std::int64_t largest = 0;
  int moduli = 0;
  for (std::int64_t D = 1; D <= 30; ++D) {
    const auto r = saturation_check(f.zeta2, D, {1, 2, 3, 5, 7, 210, 2310}, 10000);
    o.require(r.saturated, "zeta^2 mod " + std::to_string(D));
    for (const auto& e : r.entries)
      if (e.witness) largest = std::max(largest, *e.witness);
    ++moduli;
  }
  std::vector<Complex> a(3000, Complex(1.0));
  for (std::size_t n = 2; n <= a.size(); n += 3) a[n - 1] = 0.0;
  const auto holes = saturation_check(CoefficientSeries("holes", std::move(a)), 3, {1}, 3000);
  bool flagged = !holes.saturated;
  for (const auto& e : holes.entries) flagged = flagged && (e.residue == 2) != e.witness.has_value();
  o.require(flagged, "non-saturated construction");
  std::string ranks;
  for (std::int64_t D : {2, 3, 6, 10}) {
    const int rank = independence_rank(f.zeta2, D, 1, 200);
    o.require(rank == euler_phi(D), "rank mod " + std::to_string(D));
    ranks += " " + std::to_string(rank) + "/" + std::to_string(euler_phi(D));
  }
  o.detail << " " << moduli << " moduli saturated, largest witness " << largest
           << ", counterexample flagged, ranks" << ranks;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* title, double budget,
                    const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(t0);
    if (budget > 0.0) o.require(elapsed < budget, "runtime over " + std::to_string(int(budget)) + " s");
    failures += !o.pass;
    std::printf("[%s] %s %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(),
                elapsed);
    std::fflush(stdout);
  };

  const auto t0 = std::chrono::steady_clock::now();
  const Fixtures f;
  std::printf("fixtures built in %.2f s\n", seconds_since(t0));

  report("AC1", "character expansion sweep", 10, [](Outcome& o) { lemma1(o); });
  report("AC2", "coprime restriction sweep", 30, [&](Outcome& o) { lemma2(o, f); });
  report("AC3", "per-coefficient decomposition sweep", 120, [&](Outcome& o) { lemma3(o, f); });
  report("AC4", "numeric decomposition at s = 2+3i", 0, [&](Outcome& o) { lemma3_numeric(o, f); });
  report("AC5", "telescoping identity", 0, [&](Outcome& o) { telescoping(o, f); });
  report("AC6", "splitting detection", 0, [&](Outcome& o) { splitting(o, f); });
  report("AC7", "invariants", 0, [](Outcome& o) { invariants(o); });
  report("AC8", "pole predictor", 0, [](Outcome& o) { pole(o); });
  report("AC9", "phase", 10, [](Outcome& o) { phase(o); });
  report("AC10", "audit", 5, [&](Outcome& o) { audit(o, f); });
  report("AC11", "saturation", 0, [&](Outcome& o) { saturation(o, f); });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
