// JSON documents: coefficient fixtures, twist hypotheses and decomposition dumps.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltwist/audit.hpp"
#include "ltwist/invariants.hpp"
#include "ltwist/series.hpp"
#include "ltwist/twistdecomp.hpp"

namespace ltwist {

/// A malformed document. location() is "line L, column C" for syntax errors
/// or a JSON pointer such as "/coefficients/12" for schema errors.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

struct FixtureDocument {
  CoefficientSeries series;
  std::optional<GammaFactorData> gamma;
  std::string notes;
};

/// {"label", "N", "coefficients": [[re, im], ...], "growth_exponent",
///  "growth_constant" (optional, default 1), "gamma" (optional), "notes" (optional)}.
FixtureDocument parse_fixture(std::string_view text);
FixtureDocument load_fixture(const std::string& path);
/// Canonical text: fixed key order, shortest round-trip doubles.
std::string serialize_fixture(const FixtureDocument& doc);

nlohmann::json gamma_to_json(const GammaFactorData& g);
GammaFactorData gamma_from_json(const nlohmann::json& j, const std::string& where = "");

/// Named fixture families: "zeta-squared", "delta", "zeta-l" (zeta times
/// L(s, chi) for the primitive character mod `modulus` at index `chi_index`
/// among the primitive characters, default the character mod 4).
FixtureDocument make_fixture(const std::string& family, std::int64_t N, std::int64_t modulus = 4,
                             std::size_t chi_index = 0);

/// {"theta_F": 0, "entries": [{"chi_index": 0, "degree": 3, "theta": 0, "conductor": "1"}]}
/// Every character mod D must appear exactly once; conductors are exact
/// rationals given as strings ("36", "9/4") or integers.
TwistHypothesis parse_hypothesis(std::string_view text, std::int64_t D);
TwistHypothesis load_hypothesis(const std::string& path, std::int64_t D);

/// [{"chi_conductor", "chi_index", "m", "scalar": [re, im]}, ...]
nlohmann::json decomposition_to_json(const Decomposition& dec);

std::string read_text_file(const std::string& path);

}  // namespace ltwist
