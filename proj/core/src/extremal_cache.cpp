#include "petrovitch/extremal.hpp"

namespace petrovitch {

namespace {

constexpr int kCacheVersion = 1;

nlohmann::json decimals(const std::vector<Real>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_decimal(x));
  return out;
}

std::vector<Real> read_decimals(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw DomainError(std::string("extremal cache: missing array '") + key + "'");
  }
  std::vector<Real> out;
  for (const auto& x : j[key]) {
    if (!x.is_string()) throw DomainError("extremal cache: scalars must be decimal strings");
    out.push_back(parse_real(x.get<std::string>()));
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const ExtremalSequence& seq) {
  return {{"version", kCacheVersion},
          {"precision_bits", seq.bits},
          {"degree", seq.degree},
          {"A", decimals(seq.A)},
          {"xi", decimals(seq.xi)},
          {"m", decimals(seq.m)},
          {"residuals", decimals(seq.residuals)}};
}

ExtremalSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("version", 0) != kCacheVersion) {
    throw DomainError("extremal cache: unsupported version");
  }
  ExtremalSequence seq;
  seq.bits = j.at("precision_bits").get<unsigned>();
  seq.degree = j.at("degree").get<int>();
  PrecisionScope scope(seq.bits);
  seq.A = read_decimals(j, "A");
  seq.xi = read_decimals(j, "xi");
  seq.m = read_decimals(j, "m");
  seq.residuals = read_decimals(j, "residuals");
  auto n = static_cast<std::size_t>(seq.degree);
  if (seq.degree < 2 || seq.A.size() != n + 1 || seq.xi.size() != n - 1 ||
      seq.m.size() != n - 1 || seq.residuals.size() != n - 1) {
    throw DomainError("extremal cache: array lengths do not match the degree");
  }
  return seq;
}

}  // namespace petrovitch
