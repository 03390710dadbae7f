#pragma once

#include "petrovitch/poly.hpp"

#include <nlohmann/json.hpp>

#include <variant>

namespace petrovitch {

using AnyPoly = std::variant<ExactPoly, RealPoly>;

/// {"mode": "exact", "coeffs": ["1", "1/4", ...]}
nlohmann::json to_json(const ExactPoly& p);

/// {"mode": "float", "bits": n, "coeffs": [decimal strings]}
nlohmann::json to_json(const RealPoly& p, unsigned bits);

/// Reads either mode. Float coefficients are parsed at `bits` if present,
/// otherwise at the current default precision; the caller owns the scope.
/// Exact coefficients accept "p/q", integers and finite decimals.
AnyPoly poly_from_json(const nlohmann::json& j);

/// Reads a polynomial and forces Exact mode (throws DomainError on float input).
ExactPoly exact_poly_from_json(const nlohmann::json& j);

RealPoly as_real(const AnyPoly& p);

}  // namespace petrovitch
