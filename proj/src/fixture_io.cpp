#include "ltwist/fixture_io.hpp"

#include <fstream>
#include <sstream>

#include "ltwist/arith.hpp"

namespace ltwist {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column pair.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw DocumentError("line " + std::to_string(line) + ", column " + std::to_string(column),
                        "JSON syntax error");
  }
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw DocumentError(where.empty() ? "/" : where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw DocumentError(where + "/" + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw DocumentError(where, "expected a number");
  return j.get<double>();
}

Complex complex_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw DocumentError(where, "expected [re, im]");
  return {number(j[0], where + "/0"), number(j[1], where + "/1")};
}

json pair(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json gamma_to_json(const GammaFactorData& g) {
  json factors = json::array();
  for (const auto& f : g.factors) factors.push_back({{"lambda", f.lambda}, {"mu", pair(f.mu)}});
  json out = json::object();
  out["Q"] = g.Q;
  out["factors"] = std::move(factors);
  out["omega"] = pair(g.omega);
  return out;
}

GammaFactorData gamma_from_json(const json& j, const std::string& where) {
  GammaFactorData g;
  g.Q = number(member(j, "Q", where), where + "/Q");
  const json& factors = member(j, "factors", where);
  if (!factors.is_array()) throw DocumentError(where + "/factors", "expected an array");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string at = where + "/factors/" + std::to_string(i);
    g.factors.push_back({number(member(factors[i], "lambda", at), at + "/lambda"),
                         complex_pair(member(factors[i], "mu", at), at + "/mu")});
  }
  g.omega = complex_pair(member(j, "omega", where), where + "/omega");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw DocumentError(where.empty() ? "/" : where, e.what());
  }
  return g;
}

FixtureDocument parse_fixture(std::string_view text) {
  const json j = parse_json(text);
  const json& label = member(j, "label", "");
  if (!label.is_string()) throw DocumentError("/label", "expected a string");
  const json& N = member(j, "N", "");
  if (!N.is_number_integer() || N.get<std::int64_t>() < 1)
    throw DocumentError("/N", "expected a positive integer");
  const json& coeffs = member(j, "coefficients", "");
  if (!coeffs.is_array()) throw DocumentError("/coefficients", "expected an array");
  if (static_cast<std::int64_t>(coeffs.size()) != N.get<std::int64_t>())
    throw DocumentError("/coefficients", "length " + std::to_string(coeffs.size()) +
                                             " differs from N = " + N.dump());
  std::vector<Complex> a;
  a.reserve(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    a.push_back(complex_pair(coeffs[i], "/coefficients/" + std::to_string(i)));
  const double c = number(member(j, "growth_exponent", ""), "/growth_exponent");
  if (c < 0.0) throw DocumentError("/growth_exponent", "must be non-negative");
  double K = 1.0;
  if (j.contains("growth_constant")) K = number(j["growth_constant"], "/growth_constant");
  if (!(K > 0.0)) throw DocumentError("/growth_constant", "must be positive");

  FixtureDocument doc;
  doc.series = CoefficientSeries(label.get<std::string>(), std::move(a), c, K);
  if (j.contains("gamma")) doc.gamma = gamma_from_json(j["gamma"], "/gamma");
  if (j.contains("notes")) {
    if (!j["notes"].is_string()) throw DocumentError("/notes", "expected a string");
    doc.notes = j["notes"].get<std::string>();
  }
  return doc;
}

FixtureDocument load_fixture(const std::string& path) { return parse_fixture(read_text_file(path)); }

std::string serialize_fixture(const FixtureDocument& doc) {
  // nlohmann's default object is key-sorted, which fixes the key order.
  json j = json::object();
  j["label"] = doc.series.label();
  j["N"] = doc.series.size();
  json coeffs = json::array();
  for (const auto& z : doc.series.coefficients()) coeffs.push_back(pair(z));
  j["coefficients"] = std::move(coeffs);
  j["growth_exponent"] = doc.series.growth_exponent();
  j["growth_constant"] = doc.series.growth_constant();
  if (doc.gamma) j["gamma"] = gamma_to_json(*doc.gamma);
  if (!doc.notes.empty()) j["notes"] = doc.notes;
  return j.dump() + "\n";
}

FixtureDocument make_fixture(const std::string& family, std::int64_t N, std::int64_t modulus,
                             std::size_t chi_index) {
  if (N < 1) throw std::invalid_argument("make_fixture: N must be positive");
  FixtureDocument doc;
  if (family == "zeta-squared") {
    doc.series = divisor_series(N);
    doc.gamma = zeta_squared_gamma();
    doc.notes = "a(n) = d(n)";
  } else if (family == "delta") {
    doc.series = delta_normalized(N);
    doc.gamma = delta_gamma();
    doc.notes = "a(n) = tau(n) n^(-11/2), tau from the 24th power of the eta product";
  } else if (family == "zeta-l") {
    std::vector<DirichletCharacter> primitive;
    for (const auto& chi : enumerate_characters(modulus))
      if (chi.is_primitive()) primitive.push_back(chi);
    if (chi_index >= primitive.size())
      throw std::invalid_argument("make_fixture: no primitive character #" +
                                  std::to_string(chi_index) + " mod " + std::to_string(modulus));
    doc.series = zeta_times_l(primitive[chi_index], N);
    doc.gamma = zeta_times_l_gamma(primitive[chi_index]);
    doc.notes = "zeta(s) L(s, chi), chi primitive mod " + std::to_string(modulus);
  } else {
    throw std::invalid_argument("make_fixture: unknown family '" + family + "'");
  }
  return doc;
}

TwistHypothesis parse_hypothesis(std::string_view text, std::int64_t D) {
  const json j = parse_json(text);
  TwistHypothesis h;
  h.D = D;
  const std::int64_t count = euler_phi(D);
  h.twists.resize(static_cast<std::size_t>(count));
  std::vector<bool> seen(static_cast<std::size_t>(count), false);
  if (j.contains("theta_F")) h.theta_F = number(j["theta_F"], "/theta_F");
  const json& entries = member(j, "entries", "");
  if (!entries.is_array()) throw DocumentError("/entries", "expected an array");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string at = "/entries/" + std::to_string(k);
    const json& idx = member(entries[k], "chi_index", at);
    if (!idx.is_number_integer() || idx.get<std::int64_t>() < 0 || idx.get<std::int64_t>() >= count)
      throw DocumentError(at + "/chi_index", "expected an index in 0.." + std::to_string(count - 1));
    const auto i = idx.get<std::size_t>();
    if (seen[i]) throw DocumentError(at + "/chi_index", "duplicate character");
    seen[i] = true;
    auto& t = h.twists[i];
    t.degree = number(member(entries[k], "degree", at), at + "/degree");
    t.theta = number(member(entries[k], "theta", at), at + "/theta");
    const json& cond = member(entries[k], "conductor", at);
    try {
      if (cond.is_string())
        t.conductor = parse_rational(cond.get<std::string>());
      else if (cond.is_number_integer())
        t.conductor = Rational(cond.get<std::int64_t>());
      else
        throw std::invalid_argument("expected an integer or a rational string");
    } catch (const std::invalid_argument& e) {
      throw DocumentError(at + "/conductor", e.what());
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw DocumentError("/entries", "character " + std::to_string(i) + " missing");
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw DocumentError("/entries", e.what());
  }
  return h;
}

TwistHypothesis load_hypothesis(const std::string& path, std::int64_t D) {
  return parse_hypothesis(read_text_file(path), D);
}

json decomposition_to_json(const Decomposition& dec) {
  json out = json::array();
  for (const auto& t : dec.terms)
    out.push_back({{"chi_conductor", t.chi_conductor},
                   {"chi_index", t.chi_index},
                   {"m", t.m},
                   {"scalar", pair(t.scalar)}});
  return out;
}

}  // namespace ltwist
