#pragma once

#include "petrovitch/precision.hpp"
#include "petrovitch/report.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace petrovitch {

/// G(lam) = 1/lam - 2/(1-lam) - sum_{j>=1} lam^j/(1-lam^(j+1)), i.e.
/// Phi(-lam) - psi(lam) with Phi(x) = -1/x - 2/(x+1).
struct GapValue {
  Real value;
  Real tail_bound;
  int terms = 0;
};

/// Throws DomainError unless 0 < lam < 1.
GapValue master_gap(const Real& lam, const PrecisionContext& ctx);

/// dG/dlam, same truncation.
Real master_gap_derivative(const Real& lam, const PrecisionContext& ctx);

struct MasterSolution {
  Real lambda;
  Real gap_residual;
  int bisection_steps = 0;
  int newton_steps = 0;
};

/// Root of G on [0.28, 1/3]: bisection, then a Newton polish kept inside the
/// final bracket. Throws BracketError if G does not change sign there.
MasterSolution solve_master(const PrecisionContext& ctx);

struct LowerBound {
  /// |x*| for the root x* in (-1, 0) of -1/x = 2/(x+1) + 11/16.
  Real l0;
  Real residual;
  /// sum 1/(3^j - 1) < 11/16, by the four-term bound and by partial sums.
  CheckReport checks;
};

LowerBound lower_bound_l0(const PrecisionContext& ctx);

/// phi(r, x) = sum_{j>=1} 1/(x + r^-j), truncated with a geometric tail bound.
Real nest_phi(const Real& r, const Real& x, const PrecisionContext& ctx);

struct IntervalNest {
  std::vector<Real> l;
  std::vector<Real> r;
  std::vector<Real> widths;
  CheckReport checks;

  Real midpoint() const { return (l.back() + r.back()) / 2; }
};

/// l_0 = lower_bound_l0, r_0 = 1/3; -l_{i+1} solves Phi(x) = phi(r_i, x) and
/// -r_{i+1} solves Phi(x) = phi(l_i, x) on (-1, 0). Stops early once the width
/// is below eps_root. Throws ContractError when the nest fails to shrink by
/// half or leaves its previous interval.
IntervalNest interval_nest(int i_max, const PrecisionContext& ctx);

nlohmann::json limits_report(const MasterSolution& master, const IntervalNest& nest,
                             const LowerBound& l0, int digits = 0);

}  // namespace petrovitch
