#pragma once

#include "petrovitch/poly.hpp"
#include "petrovitch/report.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace petrovitch {

struct StepResult {
  Real A_next;
  Real xi;
  RealPoly T_next;
  /// |T_next(xi)| and |xi T_next'(xi)|, each relative to sum |a_i||xi|^i.
  Real residual_value;
  Real residual_slope;
};

/// Coefficients, double-root locations and minima of an extremal run.
///
/// `A` is the coefficient list of the limiting series in ascending order, so
/// the canonical run from T_1 = x + 1 has A = [1, 1, 1/4, 1/54, ...]. The
/// reverted partial sums are T_j = reverse(A[0..j]) for j >= seed_degree
/// (j >= 1 canonically); xi[k-1] is the double root created at step k, i.e.
/// the rightmost local minimum of x T_k canonically.
struct ExtremalSequence {
  int degree = 0;
  std::vector<Real> A;
  std::vector<Real> xi;
  std::vector<Real> m;
  std::vector<Real> residuals;
  unsigned bits = PrecisionContext::kDefaultBits;
  int seed_degree = 1;
  /// Seed polynomial S_1 for build_from_seed runs of degree >= 2.
  std::optional<RealPoly> seed;
  CheckReport checks;

  bool canonical() const { return !seed.has_value() && seed_degree == 1; }

  /// A_j.
  const Real& A_at(int j) const { return A.at(static_cast<std::size_t>(j)); }
  /// xi_k, k >= 1.
  const Real& xi_at(int k) const { return xi.at(static_cast<std::size_t>(k - 1)); }
  /// m_i, i >= 1.
  const Real& m_at(int i) const { return m.at(static_cast<std::size_t>(i - 1)); }
  /// Reverted partial sum of degree j.
  RealPoly T_at(int j) const;
  /// x T_j.
  RealPoly S_at(int j) const;
};

/// One extremal step: xi is the rightmost local minimum of S = x T on
/// (rightmost root of T, 0), A_next = -S(xi), T_next = S + A_next.
/// `xi_prev` narrows the bracket to [0.34 xi_prev, 0.28 xi_prev] before the
/// fallback scan.
StepResult next_step(const RealPoly& T, const std::optional<Real>& xi_prev,
                     const PrecisionContext& ctx);

/// Canonical run through degree n >= 2, escalating precision on residual
/// failures. Invariant checks are attached in `checks`.
ExtremalSequence build_sequence(int n, const PrecisionContext& ctx);

struct GeneralSeed {
  RealPoly S1;
  bool rightmost_min_ok = false;
};

/// Validates a seed: positive leading coefficient, all roots real, negative
/// and simple, and the rightmost local minimum carrying the largest value of
/// all local minima. Throws SeedError otherwise.
GeneralSeed make_seed(const RealPoly& S1, const PrecisionContext& ctx);

/// Runs `steps` extremal steps from a validated seed.
ExtremalSequence build_from_seed(const GeneralSeed& seed, int steps, const PrecisionContext& ctx);

/// P~_i(x) = P_i(-zeta_i x) / P_i(0), with double root at -1 and constant term 1.
RealPoly scaled_reverted(const ExtremalSequence& seq, int i);

/// Lemma-level inequalities on a built sequence: xi ratio bounds, sign
/// alternation of S_k at earlier double roots, the coefficient decay estimate,
/// monotonicity and bounds of m, double-root residuals.
CheckReport verify_step_invariants(const ExtremalSequence& seq, const PrecisionContext& ctx);

/// (59 - sqrt(2777)) / 22, the absolute value of the root in (-1, 0) of
/// -1/x = 2/(x+1) + 11/16.
Real xi_ratio_lower_bound();

nlohmann::json to_json(const ExtremalSequence& seq);
/// Rebuilds a canonical sequence from a cache object; throws DomainError on a
/// malformed document or version mismatch.
ExtremalSequence sequence_from_json(const nlohmann::json& j);

}  // namespace petrovitch
