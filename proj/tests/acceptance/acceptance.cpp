// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned here.
//
//   petrovitch_acceptance            run all twelve
//   petrovitch_acceptance --only 5   run one

#include "petrovitch/cones.hpp"
#include "petrovitch/extremal.hpp"
#include "petrovitch/iterate.hpp"
#include "petrovitch/limits.hpp"
#include "petrovitch/rootkit.hpp"
#include "petrovitch/theta.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace petrovitch;

namespace {

// Published values, m_i truncated to 10 places and q_hat_i rounded to 6.
const std::vector<std::string> kMinima = {
    "4.0000000000", "3.3750000000", "3.2639552867", "3.2403064116", "3.2351101647", "3.2339623707",
    "3.2337086596", "3.2336525783", "3.2336401824", "3.2336374426", "3.2336368370", "3.2336367032",
    "3.2336366736", "3.2336366671", "3.2336366656", "3.2336366653", "3.2336366652"};
const std::vector<std::string> kSpectrum = {
    "0.309249", "0.516959", "0.630628", "0.701265", "0.749269", "0.783984", "0.810251",
    "0.830816", "0.847353", "0.860942", "0.872305", "0.881949", "0.890237", "0.897435",
    "0.903747", "0.909325", "0.914291", "0.918741", "0.922751", "0.926384", "0.929689",
    "0.932711", "0.935482", "0.938035", "0.940393"};
const std::string kQTilde10 = "0.3092493386";
const std::string kUTilde10 = "-7.5032559833";
const std::string kL0 = "0.2864887043";

constexpr double kQAgreement = 1e-12;
constexpr double kClosedFormTol = 1e-20;
constexpr double kDoubleRootResidual = 1e-15;
constexpr double kLimitGap = 1e-9;
constexpr double kFunctionalResidual = 1e-20;
constexpr double kIterationTolerance = 1e-8;
constexpr double kDivergence = 1e3;
constexpr double kMinimaSeconds = 60, kRoutesSeconds = 30, kSpectrumSeconds = 600;

struct Outcome {
  bool pass = false;
  std::string detail;
  /// Digits this criterion reports, compared across precisions.
  std::vector<std::string> digits;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string sci(const Real& x) { return to_decimal(x, 4); }

std::string round6(const Real& x) { return truncate_decimal(Real(x + Real(5) / Real(10000000)), 6); }

/// Results shared between criteria at one precision, computed on first use.
class Workbench {
 public:
  explicit Workbench(unsigned bits) : ctx_(bits) {}

  const PrecisionContext& ctx() const { return ctx_; }

  const std::vector<CriticalPair>& spectrum25() {
    if (!spectrum_) {
      auto t0 = std::chrono::steady_clock::now();
      spectrum_ = spectrum(static_cast<int>(kSpectrum.size()), ctx_);
      spectrum_seconds_ = seconds_since(t0);
    }
    return *spectrum_;
  }
  double spectrum_seconds() const { return spectrum_seconds_; }

 private:
  PrecisionContext ctx_;
  std::optional<std::vector<CriticalPair>> spectrum_;
  double spectrum_seconds_ = 0;
};

Outcome ac1(Workbench& wb) {
  auto t0 = std::chrono::steady_clock::now();
  ExtremalSequence seq = build_sequence(static_cast<int>(kMinima.size()) + 1, wb.ctx());
  double secs = seconds_since(t0);
  Outcome o;
  int matched = 0;
  std::string first_miss;
  for (std::size_t i = 0; i < kMinima.size(); ++i) {
    std::string got = truncate_decimal(seq.m[i], 10);
    o.digits.push_back(got);
    if (got == kMinima[i]) {
      ++matched;
    } else if (first_miss.empty()) {
      first_miss = " first mismatch m_" + std::to_string(i + 1) + "=" + got;
    }
  }
  o.pass = matched == static_cast<int>(kMinima.size()) && secs < kMinimaSeconds;
  o.detail = std::to_string(matched) + "/17 match at 10 places, " + fmt(secs) + " s (limit " +
             fmt(kMinimaSeconds) + ")" + first_miss;
  return o;
}

Outcome ac2(Workbench& wb) {
  ExtremalSequence seq = build_sequence(5, wb.ctx());
  PrecisionScope scope(wb.ctx());
  Real r33 = sqrt(Real(33));
  Real dm = abs(seq.m[2] - 2 * (69 + 11 * r33) / 81);
  Real da = abs(seq.A[4] - (69 - 11 * r33) / 13824);
  Outcome o;
  o.pass = dm <= Real(kClosedFormTol) && da <= Real(kClosedFormTol);
  o.detail = "|m_3 - closed| = " + sci(dm) + ", |A_4 - closed| = " + sci(da) + " (tol 1e-20)";
  o.digits = {to_decimal(seq.m[2], 25), to_decimal(seq.A[4], 25)};
  return o;
}

Outcome ac3(Workbench& wb) {
  auto t0 = std::chrono::steady_clock::now();
  MasterSolution master = solve_master(wb.ctx());
  IntervalNest nest = interval_nest(20, wb.ctx());
  CriticalPair first = spectrum(1, wb.ctx()).front();
  double secs = seconds_since(t0);
  PrecisionScope scope(wb.ctx());
  Real mid = nest.midpoint();
  std::vector<std::pair<std::string, Real>> routes = {
      {"master", master.lambda}, {"nest", mid}, {"spectrum", first.q_hat}};
  Outcome o;
  bool digits_ok = true;
  std::ostringstream d;
  for (const auto& [name, v] : routes) {
    std::string t = truncate_decimal(v, 10);
    o.digits.push_back(t);
    digits_ok = digits_ok && t == kQTilde10;
    d << name << "=" << t << " ";
  }
  Real worst = 0;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    for (std::size_t j = i + 1; j < routes.size(); ++j) {
      Real g = abs(routes[i].second - routes[j].second);
      if (g > worst) worst = g;
    }
  }
  bool agree = worst <= Real(kQAgreement);
  o.pass = digits_ok && agree && secs < kRoutesSeconds;
  d << "(want " << kQTilde10 << "), max pairwise gap " << sci(worst) << " (tol 1e-12), " << fmt(secs)
    << " s";
  o.detail = d.str();
  return o;
}

Outcome ac4(Workbench& wb) {
  const CriticalPair& p = wb.spectrum25().front();
  PrecisionScope scope(wb.ctx());
  // Residuals re-evaluated here rather than taken from the solver.
  Real rpsi = abs(theta_eval(p.q_hat, p.u_hat, wb.ctx()).value);
  Real rdpsi = abs(theta_du(p.q_hat, p.u_hat, wb.ctx()).value);
  std::string got = truncate_decimal(p.u_hat, 10);
  Outcome o;
  bool small = rpsi <= Real(kDoubleRootResidual) && rdpsi <= Real(kDoubleRootResidual);
  o.pass = got == kUTilde10 && small;
  o.detail = "u_hat_1 = " + got + " (want " + kUTilde10 + "), |Psi| = " + sci(rpsi) +
             ", |dPsi/du| = " + sci(rdpsi) + " (tol 1e-15)";
  o.digits = {got, small ? "small" : "large"};
  return o;
}

Outcome ac5(Workbench& wb) {
  const auto& pairs = wb.spectrum25();
  Outcome o;
  int matched = 0;
  std::string first_miss;
  for (std::size_t i = 0; i < kSpectrum.size(); ++i) {
    std::string got = round6(pairs[i].q_hat);
    o.digits.push_back(got);
    if (got == kSpectrum[i]) {
      ++matched;
    } else if (first_miss.empty()) {
      first_miss = " first mismatch q_hat_" + std::to_string(i + 1) + "=" + got;
    }
  }
  o.pass = matched == static_cast<int>(kSpectrum.size()) && wb.spectrum_seconds() < kSpectrumSeconds;
  o.detail = std::to_string(matched) + "/25 match at 6 places, " + fmt(wb.spectrum_seconds()) +
             " s (limit " + fmt(kSpectrumSeconds) + ")" + first_miss;
  return o;
}

Outcome ac6(Workbench& wb) {
  LowerBound lb = lower_bound_l0(wb.ctx());
  std::string got = truncate_decimal(lb.l0, 10);
  Outcome o;
  o.pass = got == kL0 && lb.checks.all_pass();
  o.detail = "l0 = " + got + " (want " + kL0 + "), side checks " +
             (lb.checks.all_pass() ? "pass" : "fail");
  o.digits = {got};
  return o;
}

Outcome ac7(Workbench& wb) {
  ExtremalSequence seq = build_sequence(40, wb.ctx());
  const Real& qt = wb.spectrum25().front().q_hat;
  PrecisionScope scope(wb.ctx());
  bool decreasing = true, bounded = true;
  for (std::size_t i = 0; i < seq.m.size(); ++i) {
    bounded = bounded && seq.m[i] > 3 && seq.m[i] <= 4;
    if (i > 0) decreasing = decreasing && seq.m[i] < seq.m[i - 1];
  }
  Real gap = abs(seq.m[38] - 1 / qt);
  Outcome o;
  o.pass = decreasing && bounded && gap < Real(kLimitGap);
  o.detail = std::string("m_1..m_39 ") + (decreasing ? "strictly decreasing" : "NOT decreasing") + ", " +
             (bounded ? "inside (3,4]" : "outside (3,4]") + ", |m_39 - 1/q_hat_1| = " + sci(gap) +
             " (tol 1e-9)";
  return o;
}

/// T_k(x) = sum_{i<=k} A_i x^(k-i), evaluated by Horner straight from A.
Real reverted(const std::vector<Real>& A, int k, const Real& x) {
  Real acc = 0;
  for (int i = 0; i <= k; ++i) acc = acc * x + A[static_cast<std::size_t>(i)];
  return acc;
}

Outcome ac8(Workbench& wb) {
  const int n = 30;
  ExtremalSequence seq = build_sequence(n, wb.ctx());
  LowerBound lb = lower_bound_l0(wb.ctx());
  PrecisionScope scope(wb.ctx());
  const Real eps = wb.ctx().eps_sign();
  int ratio_bad = 0, ratio_total = 0;
  for (std::size_t k = 1; k < seq.xi.size(); ++k) {
    Real r = seq.xi[k] / seq.xi[k - 1];
    bool upper = k == 1 ? r <= Real(1) / 3 + eps : r < Real(1) / 3 - eps;
    ratio_bad += !(r > lb.l0 && upper);
    ++ratio_total;
  }
  int sign_bad = 0, sign_total = 0;
  for (int k = 3; k <= n; ++k) {
    for (int s = 1; s <= k - 2; ++s) {
      const Real& x = seq.xi[static_cast<std::size_t>(s - 1)];
      Real v = x * reverted(seq.A, k, x);
      int want = (k - s + 1) % 2 == 0 ? 1 : -1;
      int got = v > 0 ? 1 : (v < 0 ? -1 : 0);
      sign_bad += got != want;
      ++sign_total;
    }
  }
  int est_bad = 0, est_total = 0;
  for (int m = 2; m <= n; ++m) {
    for (int l = m + 1; l <= n; ++l) {
      int d = l - m;
      Real bound = seq.A[static_cast<std::size_t>(m)] *
                   pow(Real(4 * abs(seq.xi[static_cast<std::size_t>(m - 2)])), d) /
                   pow(Real(3), d * (d + 5) / 2);
      est_bad += !(seq.A[static_cast<std::size_t>(l)] <= bound);
      ++est_total;
    }
  }
  Outcome o;
  o.pass = ratio_bad == 0 && sign_bad == 0 && est_bad == 0;
  o.detail = "xi ratios " + std::to_string(ratio_total - ratio_bad) + "/" + std::to_string(ratio_total) +
             ", sign pattern " + std::to_string(sign_total - sign_bad) + "/" + std::to_string(sign_total) +
             ", coefficient estimate " + std::to_string(est_total - est_bad) + "/" + std::to_string(est_total);
  return o;
}

Outcome ac9(Workbench&) {
  PrecisionContext ctx(128);
  PrecisionScope scope(ctx);
  std::vector<Real> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(Real(-i) / 100);
  CriticalPair first = spectrum(1, ctx).front();
  Real r1 = functional_residual(first.q_hat, first.u_hat, grid, ctx);
  Real quarter = Real(1) / 4;
  Real u = real_roots(quarter, 1, ctx).roots.front();
  Real r2 = functional_residual(quarter, u, grid, ctx);
  Outcome o;
  o.pass = r1 < Real(kFunctionalResidual) && r2 < Real(kFunctionalResidual);
  o.detail = "sup residual at (q_hat_1, u_hat_1) = " + sci(r1) + ", at (1/4, first root) = " + sci(r2) +
             " (tol 1e-20, 101 points, 128 bits)";
  return o;
}

Outcome ac10(Workbench& wb) {
  RealPoly seed;
  {
    PrecisionScope scope(wb.ctx());
    seed = RealPoly{Real(1), Real(1)};
  }
  IterationOptions opts;
  opts.divergence_threshold = kDivergence;
  opts.tolerance = kIterationTolerance;
  IterationTrace a = run(Real(1) / 4, seed, 60, 101, wb.ctx(), opts);
  IterationTrace b = run(wb.spectrum25().front().q_hat, seed, 200, 101, wb.ctx(), opts);
  IterationTrace c = run(Real(1) / 2, seed, 50, 101, wb.ctx(), opts);
  PrecisionScope scope(wb.ctx());
  bool pa = a.verdict == Verdict::Converging && a.sup_dist.back() < Real(kIterationTolerance);
  bool pb = b.verdict == Verdict::Converging;
  Real peak = 0;
  for (const auto& s : c.sup_norm) peak = s > peak ? s : peak;
  bool pc = c.verdict == Verdict::Diverging;
  Outcome o;
  o.pass = pa && pb && pc;
  o.detail = "q=1/4: " + to_string(a.verdict) + " final sup_dist " + sci(a.sup_dist.back()) + (pa ? " ok" : " FAIL") +
             "; q=q_hat_1: " + to_string(b.verdict) + " final sup_dist " + sci(b.sup_dist.back()) +
             (pb ? " ok" : " FAIL") + "; q=1/2: " + to_string(c.verdict) + " peak sup_norm " + sci(peak) +
             " by step 50" + (pc ? " ok" : " FAIL");
  return o;
}

Outcome ac11(Workbench&) {
  PrecisionContext ctx(256);
  std::mt19937_64 rng(20240611);
  int hutch_bad = 0;
  {
    std::uniform_int_distribution<int> deg(2, 12), step(1, 64), first(1, 16);
    for (int trial = 0; trial < 1000; ++trial) {
      int d = deg(rng);
      std::vector<Rational> a{Rational(1), Rational(first(rng), 4)};
      for (int i = 1; i < d; ++i) a.push_back(a[i] * a[i] / (a[i - 1] * (4 + Rational(step(rng), 8))));
      RealPoly p = promote(ExactPoly(std::move(a)));
      hutch_bad += !all_sections_hyperbolic(is_section_hyperbolic(p, ctx));
    }
  }
  int newton_bad = 0;
  {
    std::uniform_int_distribution<int> deg(1, 10), num(1, 50), den(1, 7);
    for (int trial = 0; trial < 1000; ++trial) {
      int d = deg(rng);
      ExactPoly p{Rational(1)};
      for (int i = 0; i < d; ++i) p = p * ExactPoly{Rational(num(rng), den(rng)), Rational(1)};
      newton_bad += !cone_report(p, d, {}, ctx).newton_ok;
    }
  }
  int cex_bad = 0, cex_total = 0;
  for (int n = 2; n <= 10; ++n) {
    for (int k = 1; k < n; ++k) {
      Counterexample c = hutchinson_counterexample(n, k, Rational(1, 2), ctx);
      Rational b = cauchy_bound(c.poly) + 1;
      cex_bad += !(c.checks.all_pass() && count_with_multiplicity(c.poly, Rational(-b), b, ctx) < n);
      ++cex_total;
    }
  }
  Outcome o;
  o.pass = hutch_bad == 0 && newton_bad == 0 && cex_bad == 0;
  o.detail = "Hutchinson draws section-hyperbolic " + std::to_string(1000 - hutch_bad) +
             "/1000, Newton draws " + std::to_string(1000 - newton_bad) + "/1000, counterexamples " +
             std::to_string(cex_total - cex_bad) + "/" + std::to_string(cex_total) + " (seed 20240611)";
  return o;
}

using Criterion = std::function<Outcome(Workbench&)>;

const std::vector<std::pair<std::string, Criterion>>& criteria() {
  static const std::vector<std::pair<std::string, Criterion>> list = {
      {"m-table to 10 places", ac1},
      {"closed forms for m_3 and A_4", ac2},
      {"three routes to q~", ac3},
      {"double root u~", ac4},
      {"first 25 spectrum points", ac5},
      {"lower-bound constant", ac6},
      {"monotone bounded minima and limit", ac7},
      {"xi ratios, sign pattern, coefficient estimate", ac8},
      {"functional equation residual", ac9},
      {"iteration verdicts", ac10},
      {"cone properties", ac11},
  };
  return list;
}

Outcome ac12() {
  Workbench base(256), doubled(512);
  int compared = 0;
  std::string diff;
  for (std::size_t i = 0; i < 6; ++i) {
    Outcome a = criteria()[i].second(base);
    Outcome b = criteria()[i].second(doubled);
    for (std::size_t j = 0; j < a.digits.size(); ++j) {
      ++compared;
      if (j >= b.digits.size() || a.digits[j] != b.digits[j]) {
        if (diff.empty()) {
          diff = " first difference in criterion " + std::to_string(i + 1) + ": " + a.digits[j] + " vs " +
                 (j < b.digits.size() ? b.digits[j] : "missing");
        }
      }
    }
  }
  Outcome o;
  o.pass = diff.empty();
  o.detail = std::to_string(compared) + " reported values from criteria 1-6 compared at 256 vs 512 bits" +
             (diff.empty() ? ", all identical" : diff);
  return o;
}

void print(int id, const std::string& name, const Outcome& o) {
  std::printf("AC%02d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 12) {
    std::fprintf(stderr, "criterion must be 1..12\n");
    return 2;
  }
  Workbench wb(PrecisionContext::kDefaultBits);
  bool all = true;
  for (int id = 1; id <= 12; ++id) {
    if (only != 0 && only != id) continue;
    Outcome o;
    std::string name = id == 12 ? "precision stability of criteria 1-6" : criteria()[id - 1].first;
    try {
      o = id == 12 ? ac12() : criteria()[id - 1].second(wb);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    print(id, name, o);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
