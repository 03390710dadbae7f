#pragma once

#include "petrovitch/poly.hpp"
#include "petrovitch/report.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace petrovitch {

/// Psi(q,u) = sum q^(j(j+1)/2) u^j and its relatives
///   Theta(q,v) = sum (-1)^j q^(j(j-1)/2) v^j,   Psi(q,u) = Theta(q,-qu)
///   g_r(x)     = sum r^(j^2) x^j,               Psi(q,u) = g_sqrt(q)(sqrt(q) u)
enum class ThetaForm { Psi, G };

std::string to_string(ThetaForm f);

/// Taylor section of degree n in either normalization.
struct ThetaSection {
  Real q;
  int n = 0;
  RealPoly poly;
  ThetaForm form = ThetaForm::Psi;
};

ThetaSection theta_section(const Real& q, int n, ThetaForm form, const PrecisionContext& ctx);

/// A truncated series value. `error_bound` covers the dropped tail and the
/// accumulated rounding of the retained terms.
struct SeriesValue {
  Real value;
  Real error_bound;
  int terms = 0;
};

/// d^a/du^a d^b/dq^b Psi(q,u) for a, b in {0, 1, 2}. Summation stops at the
/// least N >= 3 whose successive-term ratio bound is <= 1/2 and whose term is
/// <= eps_residual/2; the tail is then below |term_N|. Throws DomainError for
/// |q| >= 1.
SeriesValue theta_partial(const Real& q, const Real& u, int a, int b, const PrecisionContext& ctx);

SeriesValue theta_eval(const Real& q, const Real& u, const PrecisionContext& ctx);
SeriesValue theta_du(const Real& q, const Real& u, const PrecisionContext& ctx);
SeriesValue theta_dq(const Real& q, const Real& u, const PrecisionContext& ctx);

/// Theta(q,v) and g_r(x), same truncation scheme.
SeriesValue theta_classic(const Real& q, const Real& v, const PrecisionContext& ctx);
SeriesValue g_form(const Real& r, const Real& x, const PrecisionContext& ctx);

struct FormValues {
  Real psi;            // Psi(q,u)
  Real theta_classic;  // Theta(q,-qu)
  Real g_form;         // g_sqrt(q)(u)
  CheckReport checks;  // psi vs Theta(q,-qu); g_sqrt(q)(u) vs Theta(q,-sqrt(q) u)
};

/// Requires 0 <= q < 1 (the g-form needs sqrt(q)).
FormValues convert_forms(const Real& q, const Real& u, const PrecisionContext& ctx);

struct SignCertificate {
  int m = 1;
  bool ok = false;
  /// n - 2m - 2 when ok, else 0.
  int certified_real_roots = 0;
};

/// Smallest odd m with 1 + 2 sum_{k<=m} (-1)^k q^(k^2) > 0, and whether
/// (-1)^k S_n(q, -q^(-2k)) > 0 for m+1 <= k <= n-m-1, S_n the g-form section.
SignCertificate sign_certificate(const Real& q, int n, const PrecisionContext& ctx);

struct CriticalPoint {
  Real u;
  Real value;
  bool is_min = false;
};

struct CriticalPoints {
  std::vector<CriticalPoint> points;
  bool complete = false;
  /// Whether consecutive critical values alternate in sign.
  bool values_alternate = false;
  std::string note;
};

/// First `count` negative zeros of dPsi/du in increasing |u|, searched on
/// |u| <= q^(-2(count+2)). Requires 0 < q < 1.
CriticalPoints critical_points(const Real& q, int count, const PrecisionContext& ctx);

struct RootEnumeration {
  /// Negative roots in increasing |u|; a double root appears twice.
  std::vector<Real> roots;
  bool complete = false;
  std::string note;
};

/// First `count` negative roots of Psi(q,.), read off between consecutive
/// critical points. `complete` is false when fewer were found or the Psi-form
/// alternation at u = -q^(-(k+1/2)), k > m, fails inside the window.
RootEnumeration real_roots(const Real& q, int count, const PrecisionContext& ctx);

/// Ratios r_{i+1}/r_i of roots, critical points and critical values. Reported,
/// never asserted.
struct ConjectureProbe {
  std::vector<Real> root_ratios;
  std::vector<Real> critical_ratios;
  std::vector<Real> value_ratios;
};

ConjectureProbe conjecture_probe(const Real& q, int count, const PrecisionContext& ctx);

/// (q_hat, u_hat) with Psi(q_hat,.) having a double root at u_hat.
struct CriticalPair {
  Real q_hat;
  Real u_hat;
  int index = 0;
  Real residual_psi;
  Real residual_dpsi;
  /// Beyond the 25 values that have an external reference.
  bool extrapolated = false;
};

/// q_hat_1 < ... < q_hat_kmax. Each negative local minimum of Psi(q,.) is
/// followed in q from q = 1/20 by predictor-corrector continuation until its
/// value changes sign, which is then bisected and polished by Newton on
/// (Psi, dPsi/du) = 0. Throws TrackingError if a track collapses.
std::vector<CriticalPair> spectrum(int k_max, const PrecisionContext& ctx);

/// Polishes one approximate double root (q0, u0) by Newton on the pair
/// Psi = dPsi/du = 0.
CriticalPair polish_pair(const Real& q0, const Real& u0, int index, const PrecisionContext& ctx);

/// sup over grid of |F(x) - 1 - x F(qx)/F(-q)| with F(x) = Psi(q, -u_hat x).
/// Throws DegenerateError when |F(-q)| < eps_sign.
Real functional_residual(const Real& q, const Real& u_hat, const std::vector<Real>& grid,
                         const PrecisionContext& ctx);

/// Equally spaced samples of Psi(q,.) on [from, to], samples+1 points.
std::vector<std::pair<Real, Real>> theta_samples(const Real& q, const Real& from, const Real& to,
                                                 int samples, const PrecisionContext& ctx);

/// CSV with header "u,psi".
std::string samples_csv(const std::vector<std::pair<Real, Real>>& rows, int digits = 30);

nlohmann::json to_json(const CriticalPair& p, int digits = 0);
nlohmann::json to_json(const std::vector<CriticalPair>& pairs, int digits = 0);
CriticalPair critical_pair_from_json(const nlohmann::json& j);

}  // namespace petrovitch
