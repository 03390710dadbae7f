#include "petrovitch/cli.hpp"

#include "petrovitch/cones.hpp"
#include "petrovitch/errors.hpp"
#include "petrovitch/extremal.hpp"
#include "petrovitch/iterate.hpp"
#include "petrovitch/limits.hpp"
#include "petrovitch/poly_io.hpp"
#include "petrovitch/rootkit.hpp"
#include "petrovitch/theta.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#ifndef PETROVITCH_TOOL_VERSION
#define PETROVITCH_TOOL_VERSION "0.0.0"
#endif

namespace petrovitch::cli {

using nlohmann::json;

std::string tool_version() { return PETROVITCH_TOOL_VERSION; }

namespace {

std::string to_string(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
  }
  return "json";
}

/// Fixed-point rendering rounded half away from zero.
std::string round_fixed(const Real& x, int places) {
  Real half = Real(5) / pow(Real(10), places + 1);
  return truncate_decimal(x < 0 ? Real(x - half) : Real(x + half), places);
}

/// Everything a command needs besides its own flags.
struct Env {
  PrecisionContext ctx;
  int digits;
  ResultCache cache;
  CheckReport checks;
  std::optional<std::string> csv;
  std::vector<SideFile> side_files;
  std::optional<std::string> csv_path;
};

std::string dec(const Env& env, const Real& x) { return to_decimal(x, env.digits); }

template <class Range>
json decimals(const Env& env, const Range& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(dec(env, x));
  return a;
}

ExtremalSequence truncated(ExtremalSequence seq, int degree) {
  auto n = static_cast<std::size_t>(degree);
  seq.degree = degree;
  seq.A.resize(n + 1);
  seq.xi.resize(n - 1);
  seq.m.resize(n - 1);
  seq.residuals.resize(n - 1);
  seq.checks = {};
  return seq;
}

/// Canonical sequence through `degree`, from the cache when it holds one at
/// least that long. Checks are recomputed on the truncation either way so a
/// warm cache never changes the report.
ExtremalSequence extremal(Env& env, int degree) {
  const std::string key = "extremal-" + std::to_string(env.ctx.bits());
  if (auto doc = env.cache.load(key)) {
    try {
      if (doc->value("degree", 0) >= degree) {
        ExtremalSequence seq = truncated(sequence_from_json(*doc), degree);
        seq.checks = verify_step_invariants(seq, env.ctx);
        return seq;
      }
    } catch (const Error&) {
      // Malformed cache: rebuild and overwrite.
    }
  }
  ExtremalSequence seq = build_sequence(degree, env.ctx);
  env.cache.store(key, to_json(seq));
  seq.checks = verify_step_invariants(seq, env.ctx);
  return seq;
}

std::vector<CriticalPair> spectrum_cached(Env& env, int count) {
  const std::string key = "spectrum-" + std::to_string(env.ctx.bits());
  if (auto doc = env.cache.load(key)) {
    try {
      if (doc->is_array() && static_cast<int>(doc->size()) >= count) {
        PrecisionScope scope(env.ctx);
        std::vector<CriticalPair> out;
        for (int k = 0; k < count; ++k) out.push_back(critical_pair_from_json((*doc)[static_cast<std::size_t>(k)]));
        return out;
      }
    } catch (const std::exception&) {
      // Malformed cache: recompute.
    }
  }
  auto pairs = spectrum(count, env.ctx);
  env.cache.store(key, to_json(pairs));
  return pairs;
}

/// "0.25", "1/4" or "qtilde" (the first spectrum point).
Real parse_q(Env& env, const std::string& text) {
  if (text == "qtilde") return spectrum_cached(env, 1).front().q_hat;
  PrecisionScope scope(env.ctx);
  if (text.find('/') != std::string::npos) return to_real(parse_rational(text));
  return parse_real(text);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands. Each fills env.checks and returns the payload.

json cmd_minima(Env& env, int count) {
  if (count < 1) throw DomainError("minima: --count must be at least 1");
  ExtremalSequence seq = extremal(env, count + 1);
  PrecisionScope scope(env.ctx);
  json rows = json::array();
  for (int i = 1; i <= count; ++i) {
    const Real& m = seq.m_at(i);
    rows.push_back({{"i", i}, {"m", dec(env, m)}, {"m_10", truncate_decimal(m, 10)}});
  }
  env.checks.append(seq.checks);
  return {{"count", count}, {"degree", seq.degree}, {"m", rows}};
}

json cmd_sequence(Env& env, int degree) {
  if (degree < 2) throw DomainError("sequence: --degree must be at least 2");
  ExtremalSequence seq = extremal(env, degree);
  PrecisionScope scope(env.ctx);
  env.checks.append(seq.checks);
  return {{"degree", seq.degree},
          {"A", decimals(env, seq.A)},
          {"xi", decimals(env, seq.xi)},
          {"m", decimals(env, seq.m)},
          {"residuals", decimals(env, seq.residuals)},
          {"T", decimals(env, seq.T_at(degree).coeffs())}};
}

json cmd_solve_lambda(Env& env) {
  MasterSolution master = solve_master(env.ctx);
  LowerBound l0 = lower_bound_l0(env.ctx);
  CriticalPair first = spectrum_cached(env, 1).front();
  PrecisionScope scope(env.ctx);
  Real gap = abs(master.lambda - first.q_hat);
  env.checks.add("gap_residual", abs(master.gap_residual) <= env.ctx.eps_residual(),
                 Real(env.ctx.eps_residual() - abs(master.gap_residual)));
  env.checks.add("lambda_in_bracket", master.lambda > l0.l0 && master.lambda <= Real(1) / 3,
                 Real(std::min(Real(master.lambda - l0.l0), Real(Real(1) / 3 - master.lambda))));
  env.checks.append(l0.checks);
  // Independent route: the first double-root parameter of Psi.
  Real tol = Real(1) / Real(1000000000000LL);
  env.checks.add("agrees_with_spectrum", gap <= tol, Real(tol - gap));
  return {{"lambda", dec(env, master.lambda)},
          {"lambda_10", truncate_decimal(master.lambda, 10)},
          {"gap_residual", dec(env, master.gap_residual)},
          {"bisection_steps", master.bisection_steps},
          {"newton_steps", master.newton_steps},
          {"l0", dec(env, l0.l0)},
          {"spectrum_q_hat_1", dec(env, first.q_hat)},
          {"route_difference", dec(env, gap)}};
}

json cmd_interval_nest(Env& env, int iters) {
  if (iters < 1) throw DomainError("interval-nest: --iters must be at least 1");
  MasterSolution master = solve_master(env.ctx);
  LowerBound l0 = lower_bound_l0(env.ctx);
  IntervalNest nest = interval_nest(iters, env.ctx);
  PrecisionScope scope(env.ctx);
  env.checks.append(nest.checks);
  env.checks.append(l0.checks);
  bool inside = nest.l.back() <= master.lambda + env.ctx.eps_root() &&
                master.lambda <= nest.r.back() + env.ctx.eps_root();
  Real margin = std::min(Real(master.lambda - nest.l.back()), Real(nest.r.back() - master.lambda));
  env.checks.add("master_root_inside_nest", inside, margin);
  json payload = limits_report(master, nest, l0, env.digits);
  payload["iterations"] = static_cast<int>(nest.widths.size());
  payload["midpoint"] = dec(env, nest.midpoint());
  payload["final_width"] = dec(env, nest.widths.back());
  return payload;
}

json cmd_spectrum(Env& env, int count) {
  if (count < 1) throw DomainError("spectrum: --count must be at least 1");
  auto pairs = spectrum_cached(env, count);
  PrecisionScope scope(env.ctx);
  json rows = json::array();
  for (const auto& p : pairs) {
    json row = to_json(p, env.digits);
    row["q_hat_6"] = round_fixed(p.q_hat, 6);
    rows.push_back(row);
    Real worst = std::max(Real(abs(p.residual_psi)), Real(abs(p.residual_dpsi)));
    env.checks.add("double_root_residual", worst <= env.ctx.eps_residual(),
                   Real(env.ctx.eps_residual() - worst), p.index);
  }
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    env.checks.add("increasing", pairs[i].q_hat > pairs[i - 1].q_hat,
                   Real(pairs[i].q_hat - pairs[i - 1].q_hat), pairs[i].index);
  }
  return {{"count", count}, {"pairs", rows}};
}

json cmd_theta_eval(Env& env, const std::string& q_text, const std::string& from_text,
                    const std::string& to_text, int samples) {
  if (samples < 1) throw DomainError("theta-eval: --samples must be at least 1");
  Real q = parse_q(env, q_text);
  PrecisionScope scope(env.ctx);
  Real from = parse_real(from_text);
  Real to = parse_real(to_text);
  auto rows = theta_samples(q, from, to, samples, env.ctx);
  Real worst_bound = 0;
  json pts = json::array();
  for (const auto& [u, psi] : rows) {
    SeriesValue v = theta_eval(q, u, env.ctx);
    Real rel = v.error_bound / std::max(Real(1), Real(abs(v.value)));
    if (rel > worst_bound) worst_bound = rel;
    pts.push_back({{"u", dec(env, u)}, {"psi", dec(env, psi)}});
  }
  env.checks.add("sample_count", static_cast<int>(rows.size()) == samples + 1, Real(0));
  env.checks.add("series_error_bound", worst_bound <= env.ctx.eps_residual(),
                 Real(env.ctx.eps_residual() - worst_bound));
  env.csv = samples_csv(rows, env.digits);
  if (env.csv_path) env.side_files.push_back({*env.csv_path, *env.csv});
  return {{"q", dec(env, q)}, {"from", dec(env, from)}, {"to", dec(env, to)},
          {"samples", samples}, {"points", pts}};
}

json cmd_theta_roots(Env& env, const std::string& q_text, int count) {
  if (count < 1) throw DomainError("theta-roots: --count must be at least 1");
  Real q = parse_q(env, q_text);
  RootEnumeration en = real_roots(q, count, env.ctx);
  SignCertificate cert = sign_certificate(q, std::max(2 * count + 4, 8), env.ctx);
  PrecisionScope scope(env.ctx);
  json roots = json::array();
  for (std::size_t i = 0; i < en.roots.size(); ++i) {
    const Real& u = en.roots[i];
    // Relative to sum |term|, which is Psi(q, |u|).
    Real value = theta_eval(q, u, env.ctx).value;
    Real scale = theta_eval(q, Real(-u), env.ctx).value;
    Real rel = abs(value) / scale;
    roots.push_back({{"u", dec(env, u)}, {"psi", dec(env, value)}});
    bool double_root = (i > 0 && en.roots[i - 1] == u) || (i + 1 < en.roots.size() && en.roots[i + 1] == u);
    Real tol = double_root ? env.ctx.eps_sign() : env.ctx.eps_residual();
    env.checks.add("root_residual", rel <= tol, Real(tol - rel), static_cast<int>(i) + 1);
  }
  env.checks.add("enumeration_complete", en.complete, Real(en.complete ? 0 : -1), -1, en.note);
  return {{"q", dec(env, q)},
          {"count", count},
          {"roots", roots},
          {"complete", en.complete},
          {"note", en.note},
          {"sign_certificate_m", cert.m}};
}

std::vector<int> parse_steps(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw DomainError("bad step list entry '" + item + "'");
    }
  }
  return out;
}

json cmd_iterate(Env& env, const std::string& q_text, int steps, const std::string& seed_file,
                 int grid, const std::string& snapshot, const std::string& snapshot_path) {
  if (steps < 1) throw DomainError("iterate: --steps must be at least 1");
  if (grid < 2) throw DomainError("iterate: --grid must be at least 2");
  Real q = parse_q(env, q_text);
  PrecisionScope scope(env.ctx);
  RealPoly f1 = seed_file.empty() ? RealPoly({Real(1), Real(1)})
                                  : as_real(poly_from_json(read_json_file(seed_file)));
  IterationTrace t = run(q, f1, steps, grid, env.ctx);
  env.checks.append(t.checks);
  env.checks.add("in_hypothesis", t.in_hypothesis, Real(t.in_hypothesis ? 0 : -1));
  env.checks.add("not_halted", !t.halted.has_value(), Real(t.halted ? -1 : 0), -1, t.halted.value_or(""));
  env.csv = trace_csv(t, env.digits);
  if (env.csv_path) env.side_files.push_back({*env.csv_path, *env.csv});
  if (!snapshot.empty()) {
    std::string csv = snapshot_csv(t, parse_steps(snapshot), env.digits);
    if (snapshot_path.empty()) throw DomainError("iterate: --snapshot needs --snapshot-file");
    env.side_files.push_back({snapshot_path, csv});
  }
  return to_json(t, env.digits);
}

template <class T>
json certify_poly(Env& env, const Polynomial<T>& p) {
  const int d = p.degree();
  if (d < 1) throw DomainError("certify: polynomial must have degree at least 1");
  std::vector<Real> m_table;
  if (d >= 2) {
    ExtremalSequence seq = extremal(env, std::max(d, 2));
    m_table = seq.m;
  }
  auto verdict = is_hyperbolic(p, env.ctx);
  auto sections = is_section_hyperbolic(p, env.ctx);
  ConeReport<T> cone = cone_report(p, d, m_table, env.ctx);
  PrecisionScope scope(env.ctx);
  json secs = json::array();
  for (const auto& s : sections) {
    secs.push_back({{"section", s.section}, {"status", to_string(s.status)}});
  }
  json payload = {{"degree", d},
                  {"hyperbolicity", to_string(verdict.status)},
                  {"real_roots", verdict.real_roots_with_multiplicity},
                  {"sections", secs},
                  {"section_hyperbolic", all_sections_hyperbolic(sections)},
                  {"cone", to_json(cone, env.digits)}};
  env.checks.add("hyperbolic", verdict.acceptable(), Real(verdict.acceptable() ? 0 : -1), -1,
                 to_string(verdict.status));
  env.checks.append(cone.checks);
  if (d >= 2) {
    DeltaReport delta = delta_inequality_check(p, env.ctx);
    payload["delta"] = to_json(delta, env.digits);
    env.checks.append(delta.checks);
  }
  return payload;
}

json cmd_certify(Env& env, const std::string& poly_file) {
  PrecisionScope scope(env.ctx);
  AnyPoly p = poly_from_json(read_json_file(poly_file));
  json payload = std::visit([&](const auto& poly) { return certify_poly(env, poly); }, p);
  payload["mode"] = std::holds_alternative<ExactPoly>(p) ? "exact" : "float";
  return payload;
}

json cmd_counterexample(Env& env, int n, int k, const std::string& eps_text) {
  Rational eps;
  try {
    eps = parse_rational(eps_text);
  } catch (const std::exception&) {
    throw DomainError("counterexample: bad --eps '" + eps_text + "'");
  }
  Counterexample c = hutchinson_counterexample(n, k, eps, env.ctx);
  PrecisionScope scope(env.ctx);
  env.checks.append(c.checks);
  json coeffs = json::array();
  for (const auto& a : c.poly.coeffs()) coeffs.push_back(to_fraction(a));
  return {{"n", n},
          {"k", k},
          {"poly", coeffs},
          {"eps", to_fraction(c.eps)},
          {"halvings", c.halvings},
          {"real_roots", c.real_roots}};
}

/// One entry per check name: pass if every instance passed, the smallest
/// margin and the index where it occurs.
json aggregate(const CheckReport& report, int digits) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Check*>> by_name;
  for (const auto& c : report.checks) {
    if (!by_name.count(c.name)) order.push_back(c.name);
    by_name[c.name].push_back(&c);
  }
  json out = json::array();
  for (const auto& name : order) {
    const auto& group = by_name[name];
    const Check* worst = group.front();
    bool pass = true;
    for (const Check* c : group) {
      pass = pass && c->pass;
      if (c->margin < worst->margin) worst = c;
    }
    json entry = {{"name", name},
                  {"pass", pass},
                  {"margin", to_decimal(worst->margin, digits)},
                  {"index", worst->index},
                  {"count", group.size()}};
    if (!worst->detail.empty()) entry["detail"] = worst->detail;
    out.push_back(entry);
  }
  return out;
}

json error_payload(const std::string& type, const std::string& message, json extra = json::object()) {
  json e = {{"type", type}, {"message", message}};
  for (auto& [k, v] : extra.items()) e[k] = v;
  return {{"error", e}};
}

}  // namespace

ReportEnvelope dispatch(const std::vector<std::string>& argv) {
  ReportEnvelope env_out;
  CLI::App app{"Extremal section-hyperbolic sequences, partial theta spectrum and related checks",
               "petrovitch"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  unsigned bits = PrecisionContext::kDefaultBits;
  std::string config_path, cache_dir, output, format = "json", csv_path;
  int digits = 0;
  auto* bits_opt = app.add_option("--precision-bits", bits, "Working precision in bits (>= 64)")
                       ->check(CLI::Range(PrecisionContext::kMinBits, 1u << 20));
  app.add_option("--config", config_path, "key = value file with defaults")->check(CLI::ExistingFile);
  auto* cache_opt = app.add_option("--cache-dir", cache_dir, "Directory for cached sequences and spectra");
  app.add_option("--output,-o", output, "Write the report here instead of stdout");
  app.add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--csv", csv_path, "Also write the CSV payload to this path");
  auto* digits_opt = app.add_option("--digits", digits, "Significant digits in decimal output")
                         ->check(CLI::Range(1, 100000));

  int count = 0, degree = 0, iters = 20, steps = 0, grid = 101, samples = 0, n = 0, k = 0;
  std::string q_text, from_text, to_text, seed_file, poly_file, eps_text, snapshot, snapshot_path;
  json args = json::object();
  std::function<json(Env&)> body;

  auto* minima = app.add_subcommand("minima", "Petrovitch minima m_1..m_N");
  minima->add_option("--count", count, "Number of minima")->required();
  minima->callback([&] {
    args = {{"count", count}};
    body = [&](Env& e) { return cmd_minima(e, count); };
  });

  auto* sequence = app.add_subcommand("sequence", "Extremal sequence through a degree");
  sequence->add_option("--degree", degree, "Final degree")->required();
  sequence->callback([&] {
    args = {{"degree", degree}};
    body = [&](Env& e) { return cmd_sequence(e, degree); };
  });

  auto* lambda = app.add_subcommand("solve-lambda", "Root of the master equation, cross-checked against the spectrum");
  lambda->callback([&] {
    args = json::object();
    body = [&](Env& e) { return cmd_solve_lambda(e); };
  });

  auto* nest = app.add_subcommand("interval-nest", "Nested intervals around the master root");
  nest->add_option("--iters", iters, "Maximum number of refinements")->capture_default_str();
  nest->callback([&] {
    args = {{"iters", iters}};
    body = [&](Env& e) { return cmd_interval_nest(e, iters); };
  });

  auto* spec = app.add_subcommand("spectrum", "First K double-root parameters of Psi");
  spec->add_option("--count", count, "Number of spectrum points")->required();
  spec->callback([&] {
    args = {{"count", count}};
    body = [&](Env& e) { return cmd_spectrum(e, count); };
  });

  auto* teval = app.add_subcommand("theta-eval", "Samples of Psi(q, u) on an interval");
  teval->add_option("--q", q_text, "q as a decimal, p/q, or qtilde")->required();
  teval->add_option("--from", from_text, "Left end")->required();
  teval->add_option("--to", to_text, "Right end")->required();
  teval->add_option("--samples", samples, "Number of subintervals")->required();
  teval->callback([&] {
    args = {{"q", q_text}, {"from", from_text}, {"to", to_text}, {"samples", samples}};
    body = [&](Env& e) { return cmd_theta_eval(e, q_text, from_text, to_text, samples); };
  });

  auto* troots = app.add_subcommand("theta-roots", "First negative roots of Psi(q, .)");
  troots->add_option("--q", q_text, "q as a decimal, p/q, or qtilde")->required();
  troots->add_option("--count", count, "Number of roots")->required();
  troots->callback([&] {
    args = {{"q", q_text}, {"count", count}};
    body = [&](Env& e) { return cmd_theta_roots(e, q_text, count); };
  });

  auto* iter = app.add_subcommand("iterate", "Iterate f -> 1 + x f(qx)/f(-q)");
  iter->add_option("--q", q_text, "q as a decimal, p/q, or qtilde")->required();
  iter->add_option("--steps", steps, "Number of iterates including the seed")->required();
  iter->add_option("--seed-file", seed_file, "Seed polynomial JSON (default x + 1)")->check(CLI::ExistingFile);
  iter->add_option("--grid", grid, "Grid points on [-1, 0]")->capture_default_str();
  iter->add_option("--snapshot", snapshot, "Comma-separated iterate indices to sample");
  iter->add_option("--snapshot-file", snapshot_path, "CSV path for --snapshot");
  iter->callback([&] {
    args = {{"q", q_text}, {"steps", steps}, {"seed_file", seed_file}, {"grid", grid},
            {"snapshot", snapshot}, {"snapshot_file", snapshot_path}};
    body = [&](Env& e) { return cmd_iterate(e, q_text, steps, seed_file, grid, snapshot, snapshot_path); };
  });

  auto* cert = app.add_subcommand("certify", "Hyperbolicity and coefficient-cone report for a polynomial");
  cert->add_option("--poly-file", poly_file, "Polynomial JSON")->required()->check(CLI::ExistingFile);
  cert->callback([&] {
    args = {{"poly_file", poly_file}};
    body = [&](Env& e) { return cmd_certify(e, poly_file); };
  });

  auto* cex = app.add_subcommand("counterexample", "Positive polynomial with one Hutchinson violation and a conjugate pair");
  cex->add_option("--n", n, "Degree")->required();
  cex->add_option("--k", k, "Index of the violated inequality")->required();
  cex->add_option("--eps", eps_text, "Initial scale, p/q or decimal")->default_val("1/2");
  cex->callback([&] {
    args = {{"n", n}, {"k", k}, {"eps", eps_text}};
    body = [&](Env& e) { return cmd_counterexample(e, n, k, eps_text); };
  });

  // CLI11 wants argv[0] and reversed order for the vector overload.
  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    int code = app.exit(e, out, err);
    env_out.usage = out.str() + err.str();
    env_out.exit_code = code == 0 ? kOk : kUsage;
    return env_out;
  }

  CommandSpec& spec_out = env_out.spec;
  for (auto* sub : app.get_subcommands()) spec_out.name = sub->get_name();
  spec_out.format = format == "csv" ? Format::Csv : format == "text" ? Format::Text : Format::Json;
  if (!output.empty()) spec_out.output_path = output;

  Config cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const Error& e) {
      env_out.usage = std::string(e.what()) + "\n";
      env_out.exit_code = kUsage;
      return env_out;
    }
  }
  if (bits_opt->count() == 0 && cfg.precision_bits) bits = *cfg.precision_bits;
  if (bits < PrecisionContext::kMinBits) {
    env_out.usage = "precision_bits must be at least " + std::to_string(PrecisionContext::kMinBits) + "\n";
    env_out.exit_code = kUsage;
    return env_out;
  }
  spec_out.precision_bits = bits;

  std::optional<std::string> cache;
  if (cache_opt->count() > 0) {
    cache = cache_dir;
  } else if (const char* envdir = std::getenv("PETROVITCH_CACHE_DIR"); envdir && *envdir) {
    cache = std::string(envdir);
  } else if (cfg.cache_dir) {
    cache = cfg.cache_dir;
  }

  PrecisionContext ctx(bits);
  if (digits_opt->count() == 0) digits = cfg.digits.value_or(std::min(40, ctx.decimal_digits()));

  args["digits"] = digits;
  args["cache_dir"] = cache ? json(*cache) : json(nullptr);
  if (!csv_path.empty()) args["csv"] = csv_path;
  spec_out.args = args;

  Env env{ctx, digits, ResultCache(cache), {}, std::nullopt, {}, std::nullopt};
  if (!csv_path.empty()) env.csv_path = csv_path;

  json command = {{"name", spec_out.name},
                  {"args", spec_out.args},
                  {"precision_bits", bits},
                  {"output_path", output.empty() ? json(nullptr) : json(output)},
                  {"format", to_string(spec_out.format)}};

  auto start = std::chrono::steady_clock::now();
  json payload;
  int code = kOk;
  try {
    payload = body(env);
    code = env.checks.all_pass() ? kOk : kChecksFailed;
  } catch (const TrackingError& e) {
    payload = error_payload("TrackingError", e.what(), {{"last_good_q", e.last_good_q()}});
    code = kComputationError;
  } catch (const PrecisionError& e) {
    payload = error_payload("PrecisionError", e.what(), {{"suggested_bits", e.suggested_bits()}});
    code = kComputationError;
  } catch (const ContractError& e) {
    payload = error_payload("ContractError", e.what(), {{"iteration", e.iteration()}});
    code = kComputationError;
  } catch (const IndeterminateError& e) {
    payload = error_payload("IndeterminateError", e.what(), {{"index", e.index()}});
    code = kComputationError;
  } catch (const ConvergenceError& e) {
    payload = error_payload("ConvergenceError", e.what(), {{"last_lo", e.last_lo()}, {"last_hi", e.last_hi()}});
    code = kComputationError;
  } catch (const Error& e) {
    payload = error_payload("Error", e.what());
    code = kComputationError;
  }
  auto elapsed = std::chrono::steady_clock::now() - start;

  env_out.json = {{"tool_version", tool_version()},
                  {"command", command},
                  {"wall_time_ms", std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()},
                  {"payload", payload},
                  {"checks", aggregate(env.checks, 6)}};
  env_out.exit_code = code;
  if (code != kComputationError) {
    env_out.csv = env.csv;
    env_out.side_files = env.side_files;
  }
  return env_out;
}

namespace {

std::string render_text(const json& j) {
  std::ostringstream os;
  os << j["command"]["name"].get<std::string>() << " (" << j["wall_time_ms"] << " ms, "
     << j["command"]["precision_bits"] << " bits)\n";
  os << j["payload"].dump(2) << '\n';
  for (const auto& c : j["checks"]) {
    os << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
       << " x" << c["count"] << " margin " << c["margin"].get<std::string>() << '\n';
  }
  return os.str();
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path);
  if (f) f << content;
  if (!f) {
    err << "petrovitch: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

}  // namespace

int emit(const ReportEnvelope& env, std::ostream& out, std::ostream& err) {
  if (env.json.is_null()) {
    (env.exit_code == kOk ? out : err) << env.usage;
    return env.exit_code;
  }
  std::string body;
  switch (env.spec.format) {
    case Format::Json: body = env.json.dump(2) + "\n"; break;
    case Format::Text: body = render_text(env.json); break;
    case Format::Csv:
      if (env.csv) {
        body = *env.csv;
      } else {
        // No tabular payload: fall back to the envelope so nothing is lost.
        body = env.json.dump(2) + "\n";
      }
      break;
  }
  int code = env.exit_code;
  if (env.spec.output_path) {
    if (!write_file(*env.spec.output_path, body, err)) code = kComputationError;
  } else {
    out << body;
  }
  for (const auto& f : env.side_files) {
    if (!write_file(f.path, f.content, err)) code = kComputationError;
  }
  if (env.exit_code == kComputationError) {
    err << "petrovitch: " << env.json["payload"]["error"]["message"].get<std::string>() << '\n';
  }
  return code;
}

}  // namespace petrovitch::cli
