#pragma once

#include "petrovitch/poly.hpp"
#include "petrovitch/report.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace petrovitch {

/// 1 + x f(qx) / f(-q). Throws DegenerateError when |f(-q)| < eps_sign.
RealPoly iterate_step(const RealPoly& f, const Real& q, const PrecisionContext& ctx);

/// Degree-D truncation of F(x) = Psi(q, -u x), u the branch-th negative root of
/// Psi(q,.) in increasing |u|. D is the least index >= 3 past which
/// coefficient ratios stay <= 1/2 and the coefficient is <= eps_residual/2;
/// `truncation_bound` bounds the dropped tail on [-1, 0].
struct FixedPoint {
  RealPoly poly;
  Real u_hat;
  Real truncation_bound;
  int branch = 1;
};

/// Throws IncompleteEnumeration when the root enumeration is not certified
/// complete up to `branch`.
FixedPoint fixed_point(const Real& q, int branch, const PrecisionContext& ctx);

/// f1 = (x+1) Q(x) with Q real-rooted and every root of Q below -1.
bool in_hypothesis(const RealPoly& f1, const PrecisionContext& ctx);
bool in_hypothesis(const ExactPoly& f1, const PrecisionContext& ctx);

enum class Verdict { Converging, Diverging, Indeterminate };

std::string to_string(Verdict v);

struct IterationOptions {
  double divergence_threshold = 1e3;
  /// Trailing fraction of the run over which sup_dist must decrease.
  double window_fraction = 1.0 / 3.0;
  /// Final sup_dist below this sets `reached_tolerance`.
  double tolerance = 1e-8;
  int branch = 1;
};

struct IterationTrace {
  Real q;
  RealPoly f1;
  int steps = 0;
  std::vector<Real> grid;
  /// Entry j-1 belongs to f_j; f_1 is the seed.
  std::vector<Real> sup_dist;
  std::vector<Real> sup_norm;
  std::vector<RealPoly> iterates;
  Verdict verdict = Verdict::Indeterminate;
  bool reached_tolerance = false;
  bool in_hypothesis = false;
  /// Set when a DegenerateError stopped the run early.
  std::optional<std::string> halted;
  Real fixed_point_u;
  /// f_j(0) = 1, f_j(-1) = 0 and degree growth, per step.
  CheckReport checks;
};

/// Iterates f_1 = f1 through f_steps, measuring sup |f_j| and sup |f_j - F| on
/// a grid_size-point grid of [-1, 0]. Converging: sup_dist decreases strictly
/// over the trailing window (or sits at the fixed point's truncation floor)
/// and sup_norm never exceeds the threshold. Diverging: sup_norm exceeds it.
IterationTrace run(const Real& q, const RealPoly& f1, int steps, int grid_size,
                   const PrecisionContext& ctx, const IterationOptions& opts = {});

/// "step,sup_norm,sup_dist".
std::string trace_csv(const IterationTrace& t, int digits = 20);

/// Grid values of the selected iterates: header "x,f_<j>,...".
std::string snapshot_csv(const IterationTrace& t, const std::vector<int>& steps, int digits = 20);

nlohmann::json to_json(const IterationTrace& t, int digits = 20);

}  // namespace petrovitch
