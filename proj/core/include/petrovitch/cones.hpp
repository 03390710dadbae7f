#pragma once

#include "petrovitch/poly.hpp"
#include "petrovitch/report.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace petrovitch {

/// Coefficient-ratio view of a positive-coefficient polynomial a_0 + ... + a_d x^d.
///   ratios[i-1] = a_i^2 / (a_{i-1} a_{i+1}),  i = 1..d-1
///   gamma[k-1]  = a_{k-1} / a_k,              k = 1..d
///   delta[k-2]  = gamma_k / gamma_{k-1},      k = 2..d  (equal to ratios[k-2])
template <class T>
struct ConeReport {
  std::vector<T> ratios;
  std::vector<T> gamma;
  std::vector<T> delta;
  bool hutchinson_ok = false;
  bool newton_ok = false;
  bool petrovitch_ok = false;
  std::vector<Real> log_image;
  /// One check per inequality: hutchinson_i, newton_i, petrovitch_i.
  CheckReport checks;
};

/// Hutchinson: ratio_i >= 4. Newton: ratio_i >= (n-i+1)(i+1)/((n-i) i) with the
/// degree-n factors. Petrovitch: ratio_i >= m_i for the indices m_table covers
/// (m_table[0] = m_1). Float comparisons allow a relative slack of eps_sign,
/// which also absorbs the rounding in m_table for exact inputs. Throws
/// DomainError on a nonpositive coefficient.
template <class T>
ConeReport<T> cone_report(const Polynomial<T>& p, int n, const std::vector<Real>& m_table,
                          const PrecisionContext& ctx);

struct DeltaReport {
  /// delta_k delta_{k-1} - 4 delta_{k-1} + 3 for k = 3..d; margins[0] is k = 3.
  std::vector<Real> margins;
  Real min_delta;
  /// Some delta_k < 3.
  bool falsified = false;
  bool section_hyperbolic = false;
  CheckReport checks;
};

template <class T>
DeltaReport delta_inequality_check(const Polynomial<T>& p, const PrecisionContext& ctx);

struct Counterexample {
  ExactPoly poly;
  Rational eps;
  int halvings = 0;
  int real_roots = 0;
  CheckReport checks;
};

/// Positive polynomial of degree n with a_k^2 < 4 a_{k-1} a_{k+1} and every other
/// Hutchinson inequality holding, yet not real-rooted. The middle triple is
/// (a_{k-1}, a_k, a_{k+1}); outer coefficients are b_i eps^(|i-k|-1) with
/// b_{i+1} = b_i^2 / (8 b_{i-1}) going up and b_{i-1} = b_i^2 / (8 b_{i+1})
/// going down. eps is halved until the Sturm count certifies a conjugate pair;
/// ConstructionError when 64 halvings do not suffice.
Counterexample hutchinson_counterexample(int n, int k, const Rational& eps,
                                         const PrecisionContext& ctx,
                                         const Rational& a_km1 = 1, const Rational& a_k = 1,
                                         const Rational& a_kp1 = 1);

template <class T>
nlohmann::json to_json(const ConeReport<T>& r, int digits = 20);
nlohmann::json to_json(const DeltaReport& r, int digits = 20);

/// "i,log_a".
std::string log_image_csv(const std::vector<Real>& log_image, int digits = 20);

}  // namespace petrovitch
