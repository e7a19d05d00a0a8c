#include "ltwist/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltwist/arith.hpp"
#include "ltwist/audit.hpp"
#include "ltwist/characters.hpp"
#include "ltwist/fixture_io.hpp"
#include "ltwist/invariants.hpp"
#include "ltwist/phase.hpp"
#include "ltwist/series.hpp"
#include "ltwist/twistdecomp.hpp"

namespace ltwist::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  bool as_json = false;
  std::string out_path;
  std::uint64_t seed = 20240101;
};

/// Text summary plus a JSON document; one of them is emitted.
struct Report {
  std::ostringstream text;
  json data = json::object();
  bool pass = true;

  void check(bool ok) { pass = pass && ok; }
};

/// Worst residual over a sweep, with the tuple that produced it.
struct Worst {
  double value = 0.0;
  json witness;

  void update(double r, const json& where) {
    if (witness.is_null() || r > value) {
      value = r;
      witness = where;
    }
  }
};

json pair(Complex z) { return json::array({z.real(), z.imag()}); }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
     << "i";
  return os.str();
}

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("--") + name + ": not a rational number: '" + text + "'");
  }
}

FixtureDocument fixture_arg(const std::string& path) {
  if (path.empty()) throw UsageError("--fixture is required");
  return load_fixture(path);
}

void require_squarefree(std::int64_t D) {
  if (D < 1 || !is_squarefree(D)) throw UsageError("D = " + std::to_string(D) + " must be squarefree");
}

std::vector<std::int64_t> units_mod(std::int64_t D) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= D; ++a)
    if (std::gcd(a, D) == 1) out.push_back(a);
  return out;
}

void emit(const Report& r, const Common& c, std::ostream& out) {
  std::ostringstream body;
  if (c.as_json) {
    json data = r.data;
    data["pass"] = r.pass;
    body << data.dump(2) << "\n";
  } else {
    body << r.text.str();
    body << (r.pass ? "PASS" : "FAIL") << "\n";
  }
  if (c.out_path.empty()) {
    out << body.str();
  } else {
    std::ofstream f(c.out_path);
    if (!f) throw std::runtime_error("cannot write " + c.out_path);
    f << body.str();
  }
}

// verify-lemma1 ------------------------------------------------------------

struct ExpansionArgs {
  std::int64_t max_D = 60;
  std::int64_t max_n = 200;
  std::int64_t D = 0;
};

Report verify_lemma1_cmd(const ExpansionArgs& a) {
  Report r;
  Worst identity, coefficients;
  std::int64_t checks = 0;
  const std::int64_t lo = a.D > 0 ? a.D : 1;
  const std::int64_t hi = a.D > 0 ? a.D : a.max_D;
  for (std::int64_t D = lo; D <= hi; ++D) {
    const auto chars = enumerate_characters(D);
    for (const auto x : units_mod(D)) {
      const CharacterExpansion expansion(D, x);
      for (std::int64_t n = 1; n <= a.max_n; ++n) {
        identity.update(expansion.residual(n), {{"D", D}, {"a", x}, {"n", n}});
        ++checks;
      }
      for (std::size_t i = 0; i < chars.size(); ++i) {
        const Complex closed = c_coefficient(chars[i], x, CoefficientMethod::ClosedForm);
        const Complex direct = c_coefficient(chars[i], x, CoefficientMethod::DirectSum);
        coefficients.update(std::abs(closed - direct), {{"D", D}, {"a", x}, {"chi_index", i}});
      }
    }
  }
  r.check(identity.value < 1e-9);
  r.check(coefficients.value < 1e-10);
  r.text << "character expansion of chi_0(n) e(-an/D): D in " << lo << ".." << hi << ", n <= "
         << a.max_n << ", " << checks << " checks\n"
         << "  worst identity residual " << fmt(identity.value) << " at " << identity.witness.dump()
         << " (tol 1e-9)\n"
         << "  worst closed-form vs direct coefficient gap " << fmt(coefficients.value) << " at "
         << coefficients.witness.dump() << " (tol 1e-10)\n";
  r.data = {{"command", "verify-lemma1"},
            {"checks", checks},
            {"worst_residual", identity.value},
            {"witness", identity.witness},
            {"worst_coefficient_gap", coefficients.value},
            {"coefficient_witness", coefficients.witness}};
  return r;
}

// verify-lemma2 ------------------------------------------------------------

struct SeriesArgs {
  std::string fixture;
  std::vector<std::int64_t> D{2, 3, 5, 6, 10, 15, 30};
  std::int64_t max_n = 10000;
  int max_degree = 0;
};

Report verify_lemma2_cmd(const SeriesArgs& a) {
  Report r;
  const auto doc = fixture_arg(a.fixture);
  const auto& x = doc.series;
  if (a.max_n > x.size()) throw UsageError("--max-n exceeds the fixture length");
  Worst worst;
  json per_D = json::array();
  r.text << "coprime restriction via inverse local factors, fixture '" << x.label() << "'\n";
  for (const auto D : a.D) {
    require_squarefree(D);
    try {
      const auto split = build_split_table(x, D, a.max_degree);
      Worst w;
      for (std::int64_t n = 1; n <= a.max_n; ++n)
        w.update(verify_lemma2(x, split, n), {{"D", D}, {"n", n}});
      worst.update(w.value, w.witness);
      r.check(w.value < 1e-8);
      r.text << "  D=" << D << " D*=" << split.D_star() << " worst residual " << fmt(w.value)
             << " at " << w.witness.dump() << "\n";
      per_D.push_back({{"D", D}, {"D_star", split.D_star()}, {"worst_residual", w.value}, {"witness", w.witness}});
    } catch (const NotSplitError& e) {
      r.check(false);
      r.text << "  D=" << D << " " << e.what() << "\n";
      per_D.push_back({{"D", D}, {"error", e.what()}});
    }
  }
  r.text << "  worst residual " << fmt(worst.value) << " at " << worst.witness.dump() << " (tol 1e-8)\n";
  r.data = {{"command", "verify-lemma2"}, {"fixture", x.label()}, {"results", per_D},
            {"worst_residual", worst.value}, {"witness", worst.witness}};
  return r;
}

// verify-lemma3 ------------------------------------------------------------

struct DecompositionArgs {
  std::string fixture;
  std::int64_t D = 6;
  std::int64_t a = 0;  // 0: all a coprime to D
  std::int64_t max_n = 5000;
  int max_degree = 0;
  bool numeric = false;
  double alpha = 1.0;
  std::string lambda = "1/3";
  double sigma = 2.0;
  double t = 3.0;
  std::int64_t N = 0;  // numeric truncation, default the fixture length
};

Report verify_lemma3_cmd(const DecompositionArgs& args) {
  Report r;
  require_squarefree(args.D);
  const auto doc = fixture_arg(args.fixture);
  const auto& x = doc.series;
  if (args.max_n > x.size()) throw UsageError("--max-n exceeds the fixture length");
  const auto split = build_split_table(x, args.D, args.max_degree);
  std::vector<std::int64_t> residues;
  if (args.a != 0) {
    if (std::gcd(args.a, args.D) != 1) throw UsageError("--a must be coprime to --D");
    residues.push_back(args.a);
  } else {
    residues = units_mod(args.D);
  }

  Worst coefficient, paths;
  json numeric = json::array();
  r.text << "twist decomposition, fixture '" << x.label() << "', D=" << args.D << "\n";
  for (const auto a : residues) {
    const auto closed = decompose(split, a);
    const auto recursive = decompose_recursive(split, a);
    paths.update(compare_decompositions(closed, recursive), {{"D", args.D}, {"a", a}});
    for (std::int64_t n = 1; n <= args.max_n; ++n)
      coefficient.update(verify_lemma3_coefficient(x, closed, n), {{"D", args.D}, {"a", a}, {"n", n}});
    if (args.numeric) {
      const double lambda = to_double(rational_arg(args.lambda, "lambda"));
      const std::int64_t N = args.N > 0 ? args.N : x.size();
      const auto res = verify_lemma3_numeric(x, closed, args.alpha, lambda, {args.sigma, args.t}, N);
      const bool ok = res.residual <= res.combined_tail + 1e-9;
      r.check(ok);
      r.text << "  numeric a=" << a << " s=" << args.sigma << "+" << args.t << "i alpha=" << args.alpha
             << " lambda=" << args.lambda << " N=" << N << ": |LHS-RHS| = " << fmt(res.residual)
             << " <= tail " << fmt(res.combined_tail) << (ok ? "" : "  VIOLATED") << "\n";
      numeric.push_back({{"a", a}, {"lhs", pair(res.lhs)}, {"rhs", pair(res.rhs)},
                         {"residual", res.residual}, {"combined_tail", res.combined_tail}});
    }
  }
  r.check(coefficient.value < 1e-8);
  r.check(paths.value < 1e-10);
  r.text << "  " << residues.size() << " residue classes, n <= " << args.max_n << "\n"
         << "  worst per-coefficient residual " << fmt(coefficient.value) << " at "
         << coefficient.witness.dump() << " (tol 1e-8)\n"
         << "  worst closed-form vs recursive scalar gap " << fmt(paths.value) << " at "
         << paths.witness.dump() << " (tol 1e-10)\n";
  r.data = {{"command", "verify-lemma3"},
            {"fixture", x.label()},
            {"D", args.D},
            {"worst_residual", coefficient.value},
            {"witness", coefficient.witness},
            {"worst_path_gap", paths.value},
            {"path_witness", paths.witness}};
  if (args.numeric) r.data["numeric"] = numeric;
  return r;
}

// split --------------------------------------------------------------------

struct SplitArgs {
  std::string fixture;
  std::vector<std::int64_t> primes;
  std::int64_t p_max = 50;
  int max_degree = 0;
  int synthetic = 0;
};

json factor_json(const LocalFactorInverse& f) {
  json A = json::array();
  for (const auto& z : f.A) A.push_back(pair(z));
  return {{"p", f.p}, {"degree", f.degree}, {"A", A}, {"worst_residual", f.worst_residual}};
}

Report split_cmd(const SplitArgs& a, const Common& common) {
  Report r;
  json results = json::array();
  if (!a.fixture.empty()) {
    const auto doc = fixture_arg(a.fixture);
    const auto& x = doc.series;
    std::vector<std::int64_t> primes = a.primes;
    if (primes.empty()) primes = primes_up_to(a.p_max);
    r.text << "local factor detection, fixture '" << x.label() << "', N=" << x.size() << "\n";
    for (const auto p : primes) {
      if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
      const int bound = a.max_degree > 0 ? a.max_degree : max_detectable_degree(x.size(), p);
      const auto result = detect_polynomial_split(x, p, bound);
      if (const auto* f = std::get_if<LocalFactorInverse>(&result)) {
        r.text << "  p=" << p << " degree " << f->degree << " A =";
        for (const auto& z : f->A) r.text << " (" << fmt(z) << ")";
        r.text << " residual " << fmt(f->worst_residual) << "\n";
        results.push_back(factor_json(*f));
      } else {
        const auto& ns = std::get<NotSplit>(result);
        r.check(false);
        r.text << "  p=" << p << " not split up to degree " << ns.max_degree << ": " << ns.reason << "\n";
        results.push_back({{"p", p}, {"not_split", ns.reason}, {"max_degree", ns.max_degree}});
      }
    }
  }
  json synthetic = json::object();
  if (a.synthetic > 0) {
    // Round trip: random inverse polynomials of degree <= 4 at p = 2, 3, 5.
    std::mt19937_64 rng(common.seed);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(0, 4);
    const std::int64_t ps[] = {2, 3, 5};
    int recovered = 0;
    double worst = 0.0;
    for (int trial = 0; trial < a.synthetic; ++trial) {
      const std::int64_t p = ps[trial % 3];
      const int d = deg(rng);
      std::vector<Complex> A(static_cast<std::size_t>(d + 1));
      A[0] = 1.0;
      for (int l = 1; l <= d; ++l) A[l] = {coef(rng), coef(rng)};
      if (d > 0 && std::abs(A[d]) < 0.1) A[d] = 1.0;
      const std::int64_t N = checked_pow(p, 2 * 4);
      // a(p^k) from 1 / sum A_l X^l; zero off powers of p.
      std::vector<Complex> u(64, Complex{});
      u[0] = 1.0;
      for (std::size_t k = 1; k < u.size(); ++k)
        for (int l = 1; l <= d && l <= static_cast<int>(k); ++l) u[k] -= A[l] * u[k - l];
      std::vector<Complex> coeffs(static_cast<std::size_t>(N), Complex{});
      std::int64_t pk = 1;
      for (std::size_t k = 0; pk <= N; ++k, pk *= p) coeffs[pk - 1] = u[k];
      const CoefficientSeries x("synthetic", std::move(coeffs));
      const auto result = detect_polynomial_split(x, p, 4);
      if (const auto* f = std::get_if<LocalFactorInverse>(&result); f && f->degree == d) {
        double gap = 0.0;
        for (int l = 0; l <= d; ++l) gap = std::max(gap, std::abs(f->A[l] - A[l]));
        worst = std::max(worst, gap);
        if (gap < 1e-8) ++recovered;
      }
    }
    r.check(recovered == a.synthetic);
    r.text << "synthetic round trip (seed " << common.seed << "): " << recovered << "/" << a.synthetic
           << " recovered, worst coefficient gap " << fmt(worst) << "\n";
    synthetic = {{"trials", a.synthetic}, {"recovered", recovered}, {"worst_gap", worst},
                 {"seed", common.seed}};
  }
  if (a.fixture.empty() && a.synthetic <= 0) throw UsageError("split needs --fixture or --synthetic");
  r.data = {{"command", "split"}, {"factors", results}, {"synthetic", synthetic}};
  return r;
}

// invariants ---------------------------------------------------------------

Report invariants_cmd(const std::string& fixture, bool reshape) {
  Report r;
  const auto doc = fixture_arg(fixture);
  if (!doc.gamma) throw UsageError("fixture has no gamma data");
  const auto inv = compute_invariants(*doc.gamma);
  r.text << std::setprecision(15) << "invariants of '" << doc.series.label() << "': d = " << inv.d
         << ", q = " << inv.q << ", theta = " << inv.theta << "\n";
  r.data = {{"command", "invariants"}, {"d", inv.d}, {"q", inv.q}, {"theta", inv.theta}};
  if (reshape) {
    double worst = 0.0;
    for (std::size_t j = 0; j < doc.gamma->factors.size(); ++j) {
      const auto other = compute_invariants(duplicate_factor(*doc.gamma, j));
      worst = std::max({worst, std::abs(other.d - inv.d), std::abs(other.q - inv.q) / inv.q,
                        std::abs(other.theta - inv.theta)});
    }
    r.check(worst < 1e-9);
    r.text << "  duplication reshape changes the invariants by at most " << fmt(worst) << "\n";
    r.data["reshape_gap"] = worst;
  }
  return r;
}

// decompose ----------------------------------------------------------------

Report decompose_cmd(const std::string& fixture, std::int64_t D, std::int64_t a, int max_degree) {
  Report r;
  require_squarefree(D);
  if (std::gcd(a, D) != 1) throw UsageError("--a must be coprime to --D");
  const auto doc = fixture_arg(fixture);
  const auto split = build_split_table(doc.series, D, max_degree);
  const auto dec = decompose(split, a);
  const double gap = compare_decompositions(dec, decompose_recursive(split, a));
  r.check(gap < 1e-10);
  r.text << "decomposition of '" << doc.series.label() << "' at a/D = " << a << "/" << D << ": "
         << dec.terms.size() << " terms\n";
  for (const auto& t : dec.terms)
    r.text << "  chi#" << t.chi_index << " (conductor " << t.chi_conductor << ") m=" << t.m
           << " scalar " << fmt(t.scalar) << "\n";
  r.text << "  closed-form vs recursive gap " << fmt(gap) << "\n";
  r.data = {{"command", "decompose"}, {"D", D}, {"a", a}, {"terms", decomposition_to_json(dec)},
            {"path_gap", gap}};
  return r;
}

// pole ---------------------------------------------------------------------

struct PoleArgs {
  std::string d = "2";
  std::string q = "1";
  double theta = 0.0;
  std::string alpha = "1";
  int alpha_root = 1;
  std::string fixture;
};

Report pole_cmd(const PoleArgs& a) {
  Report r;
  const Rational d = rational_arg(a.d, "d");
  const Rational q = rational_arg(a.q, "q");
  const Alpha alpha = Alpha::root_of(rational_arg(a.alpha, "alpha"), a.alpha_root);
  std::optional<FixtureDocument> doc;
  if (!a.fixture.empty()) doc = fixture_arg(a.fixture);
  const auto pole = predict_pole(d, q, a.theta, alpha, doc ? &doc->series : nullptr);
  r.text << "standard twist with d = " << d << ", q = " << q << ", theta = " << a.theta
         << ", alpha = " << alpha.to_string() << "\n"
         << "  s0 = " << fmt(pole.s0) << "\n"
         << "  n_alpha = "
         << (pole.n_alpha_exact ? pole.n_alpha_exact->str() : fmt(pole.n_alpha) + " (irrational or inexact)")
         << "\n";
  if (pole.integral) {
    r.text << "  n_alpha is a positive integer: possible simple pole at s0";
    if (doc) r.text << ", residue shape " << fmt(pole.residue_shape) << " (constant set to 1)";
    r.text << "\n";
  } else {
    r.text << "  n_alpha is not a positive integer" << (pole.exact ? "" : " (decided in floating point)")
           << ": holomorphic at s0\n";
  }
  r.data = {{"command", "pole"},
            {"s0", pair(pole.s0)},
            {"n_alpha", pole.n_alpha_exact ? json(pole.n_alpha_exact->str()) : json(pole.n_alpha)},
            {"exact", pole.exact},
            {"integral", pole.integral},
            {"holomorphic", !pole.integral},
            {"residue_shape", pair(pole.residue_shape)}};
  return r;
}

// phase --------------------------------------------------------------------

struct PhaseArgs {
  std::string q_F = "1";
  std::string beta = "1/5";
  std::string alpha = "1";
  std::string lambda = "1/3";
  std::vector<double> xi{1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};
};

Report phase_cmd(const PhaseArgs& a) {
  Report r;
  const ExactPhase exact{rational_arg(a.q_F, "q-F"), rational_arg(a.beta, "beta"),
                         rational_arg(a.alpha, "alpha"), rational_arg(a.lambda, "lambda")};
  const PhaseParams p{to_double(exact.q_F), to_double(exact.beta), to_double(exact.alpha),
                      to_double(exact.lambda)};
  p.validate();
  const bool half = exact.lambda == Rational(1, 2);
  const auto rows = phase_table(a.xi, p);
  double worst_critical = 0.0;
  bool decreasing = true;
  json table = json::array();
  r.text << "stationary phase for f(n) = " << a.beta << " n + " << a.alpha << " n^(" << a.lambda
         << "), q_F = " << a.q_F << "\n"
         << "  xi            x0                      Phi/2pi                 predicted               residual\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto cp = solve_critical_point(row.xi, p);
    worst_critical = std::max(worst_critical, cp.residual);
    if (i > 0 && !(row.residual < rows[i - 1].residual)) decreasing = false;
    r.text << "  " << std::left << std::setw(13) << fmt(row.xi) << " " << std::setw(23)
           << std::setprecision(16) << row.x0 << " " << std::setw(23) << row.phase << " "
           << std::setw(23) << row.predicted << " " << fmt(row.residual) << std::right << "\n";
    table.push_back({{"xi", row.xi}, {"x0", row.x0}, {"phase", row.phase},
                     {"predicted", row.predicted}, {"residual", row.residual},
                     {"critical_residual", cp.residual}});
  }
  r.check(worst_critical < 1e-8);
  r.check(decreasing);
  r.text << "  critical-point equation residual <= " << fmt(worst_critical) << " (tol 1e-8)\n"
         << "  residual strictly decreasing in xi: " << (decreasing ? "yes" : "NO") << "\n";
  if (half) {
    const auto fit = fit_constant_term(a.xi, p);
    r.text << "  lambda = 1/2: fitted constant " << fmt(fit.constant) << " (alpha^2/(4 beta) = "
           << fmt(p.alpha * p.alpha / (4.0 * p.beta)) << "), residual after removal <= "
           << fmt(*std::max_element(fit.residuals.begin(), fit.residuals.end())) << "\n";
    r.data["constant_fit"] = {{"constant", fit.constant}, {"residuals", fit.residuals}};
  }
  const auto dual = dual_phase(p);
  r.text << "  dual phase: beta* = " << dual.beta_star << ", alpha* = " << dual.alpha_star << "\n";
  json dual_json = {{"beta_star", dual.beta_star}, {"alpha_star", dual.alpha_star}};
  if (const auto d1 = dual_phase_exact(exact)) {
    const auto d2 = dual_phase_exact(*d1);
    const bool involution = d2 && *d2 == exact;
    r.check(involution);
    r.text << "  exact dual: beta* = " << d1->beta << ", alpha* = " << d1->alpha
           << "; involution " << (involution ? "holds" : "FAILS") << "\n";
    dual_json["exact"] = {{"beta_star", d1->beta.str()}, {"alpha_star", d1->alpha.str()},
                          {"involution", involution}};
  }
  r.data["command"] = "phase";
  r.data["table"] = table;
  r.data["worst_critical_residual"] = worst_critical;
  r.data["strictly_decreasing"] = decreasing;
  r.data["dual"] = dual_json;
  return r;
}

// audit --------------------------------------------------------------------

Report audit_cmd(const std::string& fixture, std::int64_t D, const std::string& hypothesis,
                 std::int64_t nu_bound, int max_degree) {
  Report r;
  require_squarefree(D);
  if (hypothesis.empty()) throw UsageError("--hypothesis is required");
  const auto doc = fixture_arg(fixture);
  const auto h = load_hypothesis(hypothesis, D);
  const auto split = build_split_table(doc.series, D, max_degree);
  const auto report = find_contradiction(doc.series, split, h, nu_bound);
  const auto& s = report.sets;

  auto indices = [](const std::vector<std::size_t>& v) { return json(v); };
  json ell = json::object();
  for (const auto& [i, v] : report.ell) ell[std::to_string(i)] = pair(v);

  r.check(report.verdict != Verdict::NoWitnessUpToBound);
  r.check(report.classification_mismatches == 0);
  r.text << "audit of '" << doc.series.label() << "' mod " << D << " (" << to_string(s.branch)
         << " branch)\n";
  if (s.branch != AuditBranch::Consistent) {
    r.text << "  d0 = " << s.d0 << ", lambda0 = " << s.lambda0 << ", theta0 = " << s.theta0
           << ", s0 = " << fmt(report.s0) << "\n"
           << "  A0 = " << indices(s.A0).dump() << ", B0 = " << indices(s.B0).dump()
           << ", C0 = " << indices(s.C0).dump() << ", q0 = " << s.q0 << ", M = " << s.M << "\n";
    for (const auto& [i, v] : report.ell) r.text << "  l(chi#" << i << ") = " << fmt(v) << "\n";
    r.text << "  " << report.terms_classified << " residue terms classified, "
           << report.classification_mismatches << " disagreements with the pole predictor\n";
  }
  r.text << "  verdict " << to_string(report.verdict);
  if (report.witness)
    r.text << " at nu = " << *report.witness << " (sum " << fmt(report.witness_sum) << ")";
  r.text << "\n";
  for (const auto& note : report.notes) r.text << "  note: " << note << "\n";

  json ratios = json::object();
  for (const auto& [i, q] : s.reduced_ratio) ratios[std::to_string(i)] = q.str();
  r.data = {{"command", "audit"},
            {"D", D},
            {"branch", to_string(s.branch)},
            {"sets",
             {{"d0", s.d0},
              {"lambda0", s.lambda0},
              {"theta0", s.theta0},
              {"A0", s.A0},
              {"B0", s.B0},
              {"C0", s.C0},
              {"q0", s.q0.str()},
              {"M", s.M},
              {"reduced_ratios", ratios}}},
            {"s0", pair(report.s0)},
            {"ell", ell},
            {"witness", report.witness ? json(*report.witness) : json(nullptr)},
            {"witness_sum", pair(report.witness_sum)},
            {"verdict", to_string(report.verdict)},
            {"nu_bound", report.nu_bound},
            {"terms_classified", report.terms_classified},
            {"classification_mismatches", report.classification_mismatches},
            {"notes", report.notes}};
  return r;
}

// saturation ---------------------------------------------------------------

Report saturation_cmd(const std::string& fixture, std::int64_t D, std::vector<std::int64_t> M_list,
                      std::int64_t bound, std::int64_t rank_cutoff) {
  Report r;
  if (D < 1) throw UsageError("--D must be positive");
  const auto doc = fixture_arg(fixture);
  if (M_list.empty()) M_list = {1, D};
  const auto report = saturation_check(doc.series, D, M_list, bound);
  r.check(report.saturated);
  r.text << "saturation of '" << doc.series.label() << "' mod " << D << " up to " << report.search_bound
         << "\n";
  json entries = json::array();
  std::int64_t largest = 0;
  for (const auto& e : report.entries) {
    if (e.witness) largest = std::max(largest, *e.witness);
    else r.text << "  no witness for a = " << e.residue << " avoiding M = " << e.M << "\n";
    entries.push_back({{"M", e.M}, {"a", e.residue},
                       {"witness", e.witness ? json(*e.witness) : json(nullptr)}});
  }
  r.text << "  " << (report.saturated ? "SATURATED-UP-TO-BOUND" : "COUNTEREXAMPLE-CANDIDATE")
         << ", largest witness " << largest << "\n";
  r.data = {{"command", "saturation"}, {"D", D}, {"bound", report.search_bound},
            {"verdict", report.saturated ? "SATURATED-UP-TO-BOUND" : "COUNTEREXAMPLE-CANDIDATE"},
            {"entries", entries}};
  if (rank_cutoff > 0) {
    const int rank = independence_rank(doc.series, D, 1, std::min(rank_cutoff, doc.series.size()));
    r.check(rank == euler_phi(D));
    r.text << "  independence rank " << rank << " of phi(D) = " << euler_phi(D) << "\n";
    r.data["rank"] = rank;
  }
  return r;
}

// gen-fixture --------------------------------------------------------------

int gen_fixture_cmd(const std::string& family, std::int64_t N, std::int64_t modulus,
                    std::size_t chi_index, const Common& c, std::ostream& out) {
  const auto doc = make_fixture(family, N, modulus, chi_index);
  const std::string text = serialize_fixture(doc);
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path);
    if (!f) throw std::runtime_error("cannot write " + c.out_path);
    f << text;
  }
  return kExitPass;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.as_json, "Emit the report as JSON");
  sub->add_option("--out", c.out_path, "Write the report to this path instead of stdout");
  sub->add_option("--seed", c.seed, "Seed for randomized sweeps");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twist identities for degree-2 L-function fixtures"};
  app.require_subcommand(1);
  Common common;

  ExpansionArgs l1;
  auto* c_l1 = app.add_subcommand("verify-lemma1", "Character expansion of chi_0(n) e(-an/D)");
  c_l1->add_option("--max-D", l1.max_D, "Largest modulus");
  c_l1->add_option("--max-n", l1.max_n, "Largest n");
  c_l1->add_option("--D", l1.D, "Check a single modulus");
  add_common(c_l1, common);

  SeriesArgs l2;
  auto* c_l2 = app.add_subcommand("verify-lemma2", "Coprime restriction through inverse local factors");
  c_l2->add_option("--fixture", l2.fixture)->required();
  c_l2->add_option("--D", l2.D, "Squarefree moduli")->delimiter(',');
  c_l2->add_option("--max-n", l2.max_n);
  c_l2->add_option("--max-degree", l2.max_degree, "Degree bound per prime (0: largest detectable)");
  add_common(c_l2, common);

  DecompositionArgs l3;
  auto* c_l3 = app.add_subcommand("verify-lemma3", "Twist decomposition identities");
  c_l3->add_option("--fixture", l3.fixture)->required();
  c_l3->add_option("--D", l3.D);
  c_l3->add_option("--a", l3.a, "Residue (default: all coprime to D)");
  c_l3->add_option("--max-n", l3.max_n);
  c_l3->add_option("--max-degree", l3.max_degree);
  c_l3->add_flag("--numeric", l3.numeric, "Also compare both sides as truncated sums");
  c_l3->add_option("--alpha", l3.alpha);
  c_l3->add_option("--lambda", l3.lambda);
  c_l3->add_option("--sigma", l3.sigma);
  c_l3->add_option("--t", l3.t);
  c_l3->add_option("--N", l3.N, "Truncation for --numeric");
  add_common(c_l3, common);

  SplitArgs sp;
  auto* c_sp = app.add_subcommand("split", "Detect polynomial local factors");
  c_sp->add_option("--fixture", sp.fixture);
  c_sp->add_option("--primes", sp.primes)->delimiter(',');
  c_sp->add_option("--p-max", sp.p_max);
  c_sp->add_option("--max-degree", sp.max_degree);
  c_sp->add_option("--synthetic", sp.synthetic, "Random round-trip trials (degree <= 4)");
  add_common(c_sp, common);

  std::string inv_fixture;
  bool inv_reshape = false;
  auto* c_inv = app.add_subcommand("invariants", "Degree, conductor and shift from gamma data");
  c_inv->add_option("--fixture", inv_fixture)->required();
  c_inv->add_flag("--reshape", inv_reshape, "Also check invariance under factor duplication");
  add_common(c_inv, common);

  std::string dec_fixture;
  std::int64_t dec_D = 6, dec_a = 1;
  int dec_degree = 0;
  auto* c_dec = app.add_subcommand("decompose", "Dump the twist decomposition");
  c_dec->add_option("--fixture", dec_fixture)->required();
  c_dec->add_option("--D", dec_D);
  c_dec->add_option("--a", dec_a);
  c_dec->add_option("--max-degree", dec_degree);
  add_common(c_dec, common);

  PoleArgs pole;
  auto* c_pole = app.add_subcommand("pole", "Pole location and residue shape of the standard twist");
  c_pole->add_option("--d", pole.d);
  c_pole->add_option("--q", pole.q);
  c_pole->add_option("--theta", pole.theta);
  c_pole->add_option("--alpha", pole.alpha, "alpha, or alpha^k with --alpha-root k");
  c_pole->add_option("--alpha-root", pole.alpha_root);
  c_pole->add_option("--fixture", pole.fixture, "Coefficients for the residue shape");
  add_common(c_pole, common);

  PhaseArgs ph;
  auto* c_ph = app.add_subcommand("phase", "Critical point and expansion of the phase");
  c_ph->add_option("--q-F", ph.q_F);
  c_ph->add_option("--beta", ph.beta);
  c_ph->add_option("--alpha", ph.alpha);
  c_ph->add_option("--lambda", ph.lambda);
  c_ph->add_option("--xi", ph.xi)->delimiter(',');
  add_common(c_ph, common);

  std::string au_fixture, au_hypothesis;
  std::int64_t au_D = 6, au_bound = kDefaultNuBound;
  int au_degree = 0;
  auto* c_au = app.add_subcommand("audit", "Run the contradiction argument on a hypothesis");
  c_au->add_option("--fixture", au_fixture)->required();
  c_au->add_option("--D", au_D);
  c_au->add_option("--hypothesis", au_hypothesis)->required();
  c_au->add_option("--nu-bound", au_bound);
  c_au->add_option("--max-degree", au_degree);
  add_common(c_au, common);

  std::string sat_fixture;
  std::int64_t sat_D = 6, sat_bound = 10000, sat_cutoff = 0;
  std::vector<std::int64_t> sat_M;
  auto* c_sat = app.add_subcommand("saturation", "Search saturation witnesses");
  c_sat->add_option("--fixture", sat_fixture)->required();
  c_sat->add_option("--D", sat_D);
  c_sat->add_option("--M", sat_M)->delimiter(',');
  c_sat->add_option("--bound", sat_bound);
  c_sat->add_option("--rank-cutoff", sat_cutoff, "Also compute the independence rank");
  add_common(c_sat, common);

  std::string family;
  std::int64_t gen_N = 0, gen_modulus = 4;
  std::size_t gen_chi = 0;
  auto* c_gen = app.add_subcommand("gen-fixture", "Write a fixture document");
  c_gen->add_option("--family", family, "zeta-squared | delta | zeta-l")->required();
  c_gen->add_option("--N", gen_N)->required();
  c_gen->add_option("--modulus", gen_modulus, "zeta-l: modulus of the character");
  c_gen->add_option("--chi-index", gen_chi, "zeta-l: index among primitive characters");
  add_common(c_gen, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Report report;
    if (c_l1->parsed()) report = verify_lemma1_cmd(l1);
    else if (c_l2->parsed()) report = verify_lemma2_cmd(l2);
    else if (c_l3->parsed()) report = verify_lemma3_cmd(l3);
    else if (c_sp->parsed()) report = split_cmd(sp, common);
    else if (c_inv->parsed()) report = invariants_cmd(inv_fixture, inv_reshape);
    else if (c_dec->parsed()) report = decompose_cmd(dec_fixture, dec_D, dec_a, dec_degree);
    else if (c_pole->parsed()) report = pole_cmd(pole);
    else if (c_ph->parsed()) report = phase_cmd(ph);
    else if (c_au->parsed()) report = audit_cmd(au_fixture, au_D, au_hypothesis, au_bound, au_degree);
    else if (c_sat->parsed()) report = saturation_cmd(sat_fixture, sat_D, sat_M, sat_bound, sat_cutoff);
    else return gen_fixture_cmd(family, gen_N, gen_modulus, gen_chi, common, out);
    emit(report, common, out);
    return report.pass ? kExitPass : kExitFailure;
  } catch (const DocumentError& e) {
    err << "malformed document at " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotSplitError& e) {
    err << "identity precondition failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ltwist::cli
