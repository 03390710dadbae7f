#include "petrovitch/poly_io.hpp"

#include <sstream>

namespace petrovitch {

namespace {

std::string term(const std::string& coeff, std::size_t i) {
  if (i == 0) return coeff;
  std::string x = i == 1 ? "x" : "x^" + std::to_string(i);
  if (coeff == "1") return x;
  return coeff + "*" + x;
}

template <class T, class F>
std::string render(const Polynomial<T>& p, F fmt) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    std::string c = fmt(p[i]);
    if (!first) {
      if (c[0] == '-') {
        out << " - ";
        c.erase(0, 1);
      } else {
        out << " + ";
      }
    }
    out << term(c, i);
    first = false;
  }
  return out.str();
}

std::string coeff_text(const nlohmann::json& c) {
  if (c.is_string()) return c.get<std::string>();
  if (c.is_number_integer()) return std::to_string(c.get<long long>());
  if (c.is_number()) {
    // JSON doubles are accepted but carry only double precision.
    std::ostringstream s;
    s.precision(17);
    s << c.get<double>();
    return s.str();
  }
  throw DomainError("polynomial coefficient must be a string or number");
}

}  // namespace

std::string to_string(const ExactPoly& p) { return render(p, to_fraction); }

std::string to_string(const RealPoly& p, int digits) {
  return render(p, [digits](const Real& x) { return to_decimal(x, digits); });
}

nlohmann::json to_json(const ExactPoly& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : p.coeffs()) coeffs.push_back(to_fraction(a));
  return {{"mode", "exact"}, {"coeffs", coeffs}};
}

nlohmann::json to_json(const RealPoly& p, unsigned bits) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : p.coeffs()) coeffs.push_back(to_decimal(a));
  return {{"mode", "float"}, {"bits", bits}, {"coeffs", coeffs}};
}

AnyPoly poly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw DomainError("polynomial JSON needs a \"coeffs\" array");
  }
  std::string mode = j.value("mode", "exact");
  if (mode == "exact") {
    std::vector<Rational> v;
    for (const auto& c : j["coeffs"]) v.push_back(parse_rational(coeff_text(c)));
    return ExactPoly(std::move(v));
  }
  if (mode == "float") {
    std::vector<Real> v;
    auto read = [&] {
      for (const auto& c : j["coeffs"]) v.push_back(parse_real(coeff_text(c)));
    };
    if (j.contains("bits")) {
      PrecisionScope scope(j["bits"].get<unsigned>());
      read();
    } else {
      read();
    }
    return RealPoly(std::move(v));
  }
  throw DomainError("unknown polynomial mode '" + mode + "'");
}

ExactPoly exact_poly_from_json(const nlohmann::json& j) {
  auto p = poly_from_json(j);
  if (auto* e = std::get_if<ExactPoly>(&p)) return *e;
  throw DomainError("expected an exact-mode polynomial");
}

RealPoly as_real(const AnyPoly& p) {
  return std::visit([](const auto& q) { return RealPoly(promote(q)); }, p);
}

}  // namespace petrovitch
