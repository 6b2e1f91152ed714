#include "snumbers/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "snumbers/bounds.hpp"
#include "snumbers/extremal.hpp"
#include "snumbers/operators.hpp"
#include "snumbers/report.hpp"
#include "snumbers/version.hpp"

namespace snumbers {

namespace {

using Json = nlohmann::ordered_json;

/// Precondition violated by the flags; maps to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A tabular result plus metadata, rendered as CSV or JSON.
struct Report {
  Json meta = Json::object();
  std::string rows_key;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json extra = Json::object();
  ExitCode code = ExitCode::Success;
};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + csv_cell(x);
    return s;
  }
  return v.dump();
}

std::string render_csv(const Report& r) {
  std::ostringstream o;
  for (const auto& [k, v] : r.meta.items()) o << "# " << k << '=' << csv_cell(v) << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) o << (i ? "," : "") << r.columns[i];
  o << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << csv_cell(row[i]);
    o << '\n';
  }
  return o.str();
}

std::string render_json(const Report& r) {
  Json doc = r.meta;
  if (!r.rows_key.empty()) {
    Json arr = Json::array();
    for (const auto& row : r.rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    doc[r.rows_key] = std::move(arr);
  }
  for (const auto& [k, v] : r.extra.items()) doc[k] = v;
  return doc.dump(2) + "\n";
}

Json opt_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

TargetOperator bracket_target(const std::string& t) {
  if (t == "e") return TargetOperator::E_full;
  if (t == "ea") return TargetOperator::E_a;
  if (t == "t2") return TargetOperator::T2;
  throw UsageError("target must be one of e, ea, t2 (got '" + t + "')");
}

std::size_t density(const RunConfig& c) { return c.nodes_per_unit ? c.nodes_per_unit : default_nodes_per_unit(); }

void require_solver_exponent(double p) {
  if (!(p >= kMinSolverExponent && p <= kMaxSolverExponent)) {
    std::ostringstream o;
    o << "p must lie in [" << kMinSolverExponent << ", " << kMaxSolverExponent << "] (got " << p << ")";
    throw UsageError(o.str());
  }
}

void require_hilbert(double p) {
  if (p != 2.0)
    throw UsageError("refusing: the SVD oracle gives s-numbers only at p = 2; use table or certify for p != 2");
}

Json common_meta(const RunConfig& c) {
  Json m = Json::object();
  m["command"] = c.command;
  m["version"] = std::string(kVersion);
  return m;
}

Json interval_json(const Interval& I) { return Json::array({I.a(), I.b()}); }

// Oracle grid: the configured density, refined if needed so that `count`
// stays in the trusted range m / 10.
Grid oracle_grid(const RunConfig& c, int count) {
  Grid g = Grid::with_density(c.interval, density(c));
  std::size_t need = 10 * static_cast<std::size_t>(count) + 1;
  if (need % 2 == 0) ++need;
  return g.size() >= need ? g : Grid(c.interval, need);
}

SingularSpectrum oracle_spectrum(const std::string& target, const Grid& grid, int count) {
  const auto n = static_cast<std::size_t>(count);
  if (target == "t1") return svd_snumbers(volterra_matrix(VolterraOrder::T1, grid, 2.0), n);
  const auto t2 = volterra_matrix(VolterraOrder::T2, grid, 2.0);
  if (target == "e") return clamped_snumbers(t2, n);
  if (target == "ea" || target == "t2") return svd_snumbers(t2, n);
  throw UsageError("target must be one of t1, t2, e, ea (got '" + target + "')");
}

Report cmd_constant(const RunConfig& c) {
  require_solver_exponent(c.p);
  const double tol = c.tol > 0 ? c.tol : 1e-8;
  const Grid grid = Grid::with_density(c.interval, density(c));
  Report r;
  r.meta = common_meta(c);
  r.meta["p"] = c.p;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["grid_nodes"] = grid.size();
  r.meta["tolerance"] = tol;
  r.rows_key = "constants";
  r.columns = {"name", "value", "eigenvalue", "residual", "iterations", "converged"};
  bool all = true;
  for (auto kind : {ExtremalKind::J0, ExtremalKind::Ja, ExtremalKind::Jb, ExtremalKind::Aplus, ExtremalKind::Aminus,
                    ExtremalKind::Bconst}) {
    ExtremalSolution s = [&] {
      try {
        return solve(kind, c.p, grid, {tol, 10000});
      } catch (const ConvergenceError& e) {
        return e.partial();
      }
    }();
    all = all && s.converged;
    r.rows.push_back({std::string(to_string(kind)), s.value, s.eigenvalue, s.residual, s.iterations, s.converged});
  }
  r.meta["converged"] = all;
  if (!all) r.code = ExitCode::Failure;
  return r;
}

PlotSpec bracket_plot(const std::string& title, const std::vector<double>& n, const std::vector<double>& lower,
                      const std::vector<double>& upper, const std::vector<double>& oracle, double limit) {
  PlotSpec spec;
  spec.title = title;
  spec.x_label = "n";
  spec.y_label = "n^2 s_n";
  if (!lower.empty()) spec.series.push_back({"n^2 lower", n, lower, "#1f77b4"});
  if (!upper.empty()) spec.series.push_back({"n^2 upper", n, upper, "#d62728"});
  if (!oracle.empty()) spec.series.push_back({"n^2 oracle", n, oracle, "black"});
  spec.reference = limit;
  spec.reference_label = "|I|^2 B(0,1)";
  return spec;
}

Report cmd_table(const RunConfig& c) {
  require_solver_exponent(c.p);
  const TargetOperator target = bracket_target(c.target.empty() ? "t2" : c.target);
  if (c.n_lo < 2) throw UsageError("n-range must start at 2 or above");
  const bool with_oracle = c.oracle == "svd";
  if (!with_oracle && c.oracle != "none") throw UsageError("oracle must be svd or none");
  if (with_oracle) require_hilbert(c.p);

  const std::size_t npu = density(c);
  const double b01 = unit_b_constant(c.p, npu);
  std::vector<double> oracle;
  std::size_t oracle_nodes = 0;
  if (with_oracle) {
    const Grid g = oracle_grid(c, c.n_hi);
    oracle = oracle_spectrum(std::string(to_string(target)), g, c.n_hi).values;
    oracle_nodes = g.size();
  }
  const SNumberTable table = snumber_table(target, c.interval, c.p, c.n_lo, c.n_hi, b01, oracle);

  Report r;
  r.meta = common_meta(c);
  r.meta["target"] = std::string(to_string(target));
  r.meta["p"] = c.p;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["nodes_per_unit"] = npu;
  r.meta["b01"] = b01;
  r.meta["b01_tolerance"] = 1e-10;
  r.meta["oracle"] = c.oracle;
  if (with_oracle) r.meta["oracle_grid_nodes"] = oracle_nodes;
  r.rows_key = "rows";
  r.columns = {"n", "lower", "upper", "oracle", "n2_oracle"};
  bool inside = true;
  std::vector<double> ns, lo, hi, orc;
  for (const auto& row : table.rows) {
    r.rows.push_back({row.n, row.lower, row.upper, opt_number(row.oracle), opt_number(row.n2_oracle)});
    const double n2 = static_cast<double>(row.n) * row.n;
    ns.push_back(row.n);
    lo.push_back(n2 * row.lower);
    hi.push_back(n2 * row.upper);
    if (row.oracle) {
      orc.push_back(n2 * *row.oracle);
      inside = inside && *row.oracle >= row.lower && *row.oracle <= row.upper;
    }
  }
  if (with_oracle) {
    r.meta["oracle_inside_bracket"] = inside;
    if (!inside) r.code = ExitCode::Failure;
  }
  if (c.plot) {
    const double limit = c.interval.length() * c.interval.length() * b01;
    write_atomic(*c.plot, render_svg(bracket_plot("s-number bracket, target " + std::string(to_string(target)), ns,
                                                  lo, hi, orc, limit)));
  }
  return r;
}

Report cmd_certify(const RunConfig& c) {
  require_solver_exponent(c.p);
  const TargetOperator target = bracket_target(c.target.empty() ? "e" : c.target);
  if (c.n_lo != c.n_hi) throw UsageError("certify takes a single n");
  if (c.trials < 1) throw UsageError("trials must be at least 1");
  const int n = c.n_lo;
  const double tol = c.tol > 0 ? c.tol : 1e-3;
  const std::size_t npu = density(c);
  CertifyOptions opts;
  opts.tolerance = tol;
  opts.nodes_per_unit = npu;
  opts.b01 = unit_b_constant(c.p, npu);

  const auto upper = certify_upper(target, c.interval, n, c.p, c.trials, c.seed, opts);
  const auto lower = certify_lower(target, c.interval, n, c.p, c.trials, c.seed, opts);
  const double tight = upper_tightness_witness(target, c.interval, n, c.p, npu) / upper.bound_value;
  const auto sub = bernstein_subspace(target, c.interval, n, c.p, npu);
  double equality = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    alpha[static_cast<std::size_t>(i)] = 1.0;
    equality = std::min(equality, sub.reduced_ratio(alpha) / lower.bound_value);
  }
  const bool tight_ok = tight >= 0.99;
  const bool equality_ok = equality >= 1.0 - tol && equality <= 1.01;

  Report r;
  r.meta = common_meta(c);
  r.meta["target"] = std::string(to_string(target));
  r.meta["p"] = c.p;
  r.meta["n"] = n;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["nodes_per_unit"] = npu;
  r.meta["b01"] = *opts.b01;
  r.meta["tolerance"] = tol;
  r.meta["trials"] = c.trials;
  r.meta["seed"] = c.seed;
  r.rows_key = "certificates";
  r.columns = {"target", "side", "n", "p", "bound_value", "trials", "seed", "worst_ratio", "margin", "tolerance",
               "passed"};
  for (const auto* cert : {&upper, &lower}) {
    r.rows.push_back({std::string(to_string(cert->target)), cert->side == BoundSide::Upper ? "upper" : "lower",
                      cert->n, cert->p, cert->bound_value, cert->trials, cert->seed, cert->worst_ratio, cert->margin,
                      cert->tolerance, cert->passed});
  }
  Json w = Json::object();
  w["upper_tightness_ratio"] = tight;
  w["upper_tightness_passed"] = tight_ok;
  w["lower_equality_ratio"] = equality;
  w["lower_equality_passed"] = equality_ok;
  const bool all = upper.passed && lower.passed && tight_ok && equality_ok;
  r.extra["witnesses"] = std::move(w);
  r.extra["passed"] = all;
  if (!all) r.code = ExitCode::Failure;
  return r;
}

Report cmd_oracle(const RunConfig& c) {
  require_hilbert(c.p);
  const std::string target = c.target.empty() ? "t1" : c.target;
  if (c.count < 1) throw UsageError("count must be at least 1");
  const int count = static_cast<int>(c.count);
  const Grid grid = oracle_grid(c, count);
  const auto spec = oracle_spectrum(target, grid, count);

  Report r;
  r.meta = common_meta(c);
  r.meta["target"] = target;
  r.meta["p"] = c.p;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["grid_nodes"] = spec.grid_size;
  r.meta["trusted"] = spec.trusted;
  r.rows_key = "spectrum";
  r.columns = {"n", "s_n", "n2_s_n", "reference", "ratio"};
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double s = spec.values[i];
    Json ref = nullptr, ratio = nullptr;
    if (target == "t1") {
      const double v = t1_reference(2.0, c.interval, n);
      ref = v;
      ratio = s / v;
    }
    r.rows.push_back({n, s, static_cast<double>(n) * n * s, ref, ratio});
  }
  return r;
}

Report cmd_asymptote(const RunConfig& c) {
  require_hilbert(c.p);
  const std::string target = c.target.empty() ? "t2" : c.target;
  if (target != "t2" && target != "ea" && target != "e") throw UsageError("target must be one of t2, ea, e");
  int lo = c.n_given ? c.n_lo : 1, hi = c.n_given ? c.n_hi : 40;
  if (lo == hi) lo = 1;
  if (lo < 1) throw UsageError("n must be positive");
  const std::size_t npu = density(c);
  const Grid grid = oracle_grid(c, hi);
  const auto spec = oracle_spectrum(target, grid, hi);
  const double b01 = unit_b_constant(2.0, npu);
  const double limit = c.interval.length() * c.interval.length() * b01;

  Report r;
  r.meta = common_meta(c);
  r.meta["target"] = target;
  r.meta["p"] = c.p;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["grid_nodes"] = grid.size();
  r.meta["b01"] = b01;
  r.meta["limit"] = limit;
  r.rows_key = "sequence";
  r.columns = {"n", "s_n", "n2_s_n", "deviation"};
  std::vector<double> ns, seq;
  double last = 0.0;
  for (int n = lo; n <= hi; ++n) {
    const double s = spec.values[static_cast<std::size_t>(n - 1)];
    const double n2s = static_cast<double>(n) * n * s;
    last = n2s / limit - 1.0;
    r.rows.push_back({n, s, n2s, last});
    ns.push_back(n);
    seq.push_back(n2s);
  }
  r.meta["final_deviation"] = last;
  if (c.plot)
    write_atomic(*c.plot, render_svg(bracket_plot("n^2 s_n against the limit, target " + target, ns, {}, {}, seq,
                                                  limit)));
  return r;
}

Report cmd_factor_check(const RunConfig& c) {
  if (c.trials < 1) throw UsageError("trials must be at least 1");
  std::vector<double> exponents{1.5, 2.0, 3.0};
  if (c.p_given) {
    if (!(c.p > 1.0) || !std::isfinite(c.p)) throw UsageError("p must exceed 1");
    exponents = {c.p};
  }
  const Grid grid = Grid::with_density(c.interval, density(c));
  const auto rep = check_factorization(grid, c.trials, c.seed, exponents);

  Report r;
  r.meta = common_meta(c);
  r.meta["exponents"] = rep.exponents;
  r.meta["interval"] = interval_json(c.interval);
  r.meta["grid_nodes"] = grid.size();
  r.meta["trials"] = rep.trials;
  r.meta["seed"] = rep.seed;
  r.rows_key = "checks";
  r.columns = {"check", "value", "passed"};
  r.rows.push_back({"curvature_error_ratio", rep.max_curvature_error, rep.curvature_ok});
  r.rows.push_back({"boundary_value", rep.max_boundary_value, rep.boundary_ok});
  r.rows.push_back({"boundary_slope", rep.max_boundary_slope, rep.boundary_ok});
  r.rows.push_back({"isometry_defect", rep.max_isometry_defect, rep.isometry_ok});
  r.extra["passed"] = rep.passed();
  if (!rep.passed()) r.code = ExitCode::Failure;
  return r;
}

}  // namespace

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("interval must be written a,b");
  try {
    std::size_t ea = 0, eb = 0;
    const std::string sa = text.substr(0, comma), sb = text.substr(comma + 1);
    const double a = std::stod(sa, &ea), b = std::stod(sb, &eb);
    if (ea != sa.size() || eb != sb.size()) throw UsageError("interval must be written a,b");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw UsageError("interval needs finite a < b");
    return Interval(a, b);
  } catch (const std::logic_error&) {
    throw UsageError("interval must be written a,b with decimal reals (got '" + text + "')");
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t end = 0;
    int v = 0;
    try {
      v = std::stoi(s, &end);
    } catch (const std::logic_error&) {
      end = 0;
    }
    if (s.empty() || end != s.size()) throw UsageError("n-range must be lo..hi or a single integer (got '" + text + "')");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int n = to_int(text);
    return {n, n};
  }
  const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
  if (lo > hi) throw UsageError("n-range lo..hi needs lo <= hi");
  return {lo, hi};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"s-numbers of second-order Sobolev embeddings and Volterra operators", "snumbers"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig c;
  std::string interval = "0,1", nrange, format;
  std::vector<CLI::Option*> p_opts, n_opts, trials_opts;
  auto add_common = [&](CLI::App* sub) {
    p_opts.push_back(sub->add_option("--p", c.p, "Lebesgue exponent"));
    sub->add_option("--interval", interval, "interval a,b")->capture_default_str();
    sub->add_option("--m", c.nodes_per_unit, "grid nodes per unit length (default 2049 or $SNUMBERS_GRID_NODES)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", c.output, "write the report here (atomically) instead of stdout");
  };

  auto* constant = app.add_subcommand("constant", "the extremal constants J0, Ja, Jb, A+, A-, B");
  add_common(constant);
  constant->add_option("--tol", c.tol, "solver tolerance (default 1e-8)");

  auto* table = app.add_subcommand("table", "two-sided s-number bracket over an n-range");
  add_common(table);
  table->add_option("--target", c.target, "e, ea or t2 (default t2)");
  n_opts.push_back(table->add_option("--n", nrange, "n-range lo..hi (default 2..20)"));
  table->add_option("--oracle", c.oracle, "svd or none (svd needs p = 2)");
  table->add_option("--plot", c.plot, "SVG plot of n^2 times the bracket");

  auto* certify = app.add_subcommand("certify", "randomized upper and lower certificates at one n");
  add_common(certify);
  certify->add_option("--target", c.target, "e, ea or t2 (default e)");
  n_opts.push_back(certify->add_option("--n", nrange, "n")->required());
  trials_opts.push_back(certify->add_option("--trials", c.trials, "trials per side (default 500)"));
  certify->add_option("--seed", c.seed, "RNG seed (default 0)");
  certify->add_option("--tol", c.tol, "relative tolerance (default 1e-3)");

  auto* oracle = app.add_subcommand("oracle", "leading singular values at p = 2");
  add_common(oracle);
  oracle->add_option("--target", c.target, "t1, t2, e or ea (default t1)");
  oracle->add_option("--count", c.count, "number of singular values (default 20)");

  auto* asymptote = app.add_subcommand("asymptote", "n^2 s_n against |I|^2 B(0,1) at p = 2");
  add_common(asymptote);
  asymptote->add_option("--target", c.target, "t2, ea or e (default t2)");
  n_opts.push_back(asymptote->add_option("--n", nrange, "largest n, or lo..hi (default 40)"));
  asymptote->add_option("--plot", c.plot, "SVG plot of n^2 s_n");

  auto* factor = app.add_subcommand("factor-check", "identities of the factorization T2 = E_a S");
  add_common(factor);
  trials_opts.push_back(factor->add_option("--trials", c.trials, "random trials (default 20)"));
  factor->add_option("--seed", c.seed, "RNG seed (default 0)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    for (auto* o : p_opts) c.p_given = c.p_given || o->count() > 0;
    bool trials_given = false;
    for (auto* o : trials_opts) trials_given = trials_given || o->count() > 0;
    if (!trials_given) c.trials = c.command == "factor-check" ? 20 : 500;
    c.interval = parse_interval(interval);
    if (!nrange.empty()) {
      std::tie(c.n_lo, c.n_hi) = parse_range(nrange);
      c.n_given = true;
    }
    if (c.nodes_per_unit != 0 && c.nodes_per_unit < 5) throw UsageError("--m must be at least 5");
    if (!format.empty()) c.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    const bool tabular = c.command == "table" || c.command == "oracle" || c.command == "asymptote";
    const OutputFormat fmt = c.format.value_or(tabular ? OutputFormat::Csv : OutputFormat::Json);

    Report r;
    if (c.command == "constant") r = cmd_constant(c);
    else if (c.command == "table") r = cmd_table(c);
    else if (c.command == "certify") r = cmd_certify(c);
    else if (c.command == "oracle") r = cmd_oracle(c);
    else if (c.command == "asymptote") r = cmd_asymptote(c);
    else r = cmd_factor_check(c);

    const std::string text = fmt == OutputFormat::Csv ? render_csv(r) : render_json(r);
    if (c.output) write_atomic(*c.output, text);
    else out << text;

    if (r.code != ExitCode::Success && c.command == "certify") {
      for (const auto& row : r.rows)
        if (!row.back().get<bool>())
          err << row[1].get<std::string>() << " certificate failed: worst ratio "
              << format_number(row[7].get<double>()) << " against bound " << format_number(row[4].get<double>())
              << '\n';
      err << "witnesses: " << r.extra["witnesses"].dump() << '\n';
    } else if (r.code != ExitCode::Success) {
      err << c.command << ": check failed\n";
    }
    return static_cast<int>(r.code);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Failure);
  }
}

}  // namespace snumbers
