#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlgeo/tables.hpp"
#include "table.hpp"

namespace nlgeo::cli {

namespace {

// The four measures plotted against each family (Bures duplicates Hellinger).
constexpr std::array<DistanceKind, 4> kFigureKinds = {DistanceKind::HilbertSchmidt, DistanceKind::Hellinger,
                                                      DistanceKind::Trace, DistanceKind::RelativeEntropy};

constexpr double kOracleTolerance = 1e-6;
constexpr double kGridTolerance = 1e-6;
constexpr double kSeedTolerance = 1e-6;
constexpr double kIsoWernerTolerance = 1e-9;

struct RunConfig {
  std::vector<std::string> kinds;
  int d = 2;
  std::optional<double> omega, omega_min, omega_max;
  std::optional<double> w, w_min, w_max;
  int n = 21;
  int grid_n = 50;
  std::string family = "two-bell";
  std::vector<double> a, e;
  std::string out;
  std::string format = "csv";
  OptimizerConfig opt;
};

Error arg_error(const std::string& msg) { return Error(ErrorCode::ArgumentError, msg); }

std::vector<DistanceKind> resolve_kinds(const RunConfig& rc, std::span<const DistanceKind> defaults) {
  if (rc.kinds.empty()) return {defaults.begin(), defaults.end()};
  std::vector<DistanceKind> kinds;
  for (const auto& tag : rc.kinds) {
    const auto k = parse_distance_kind(tag);
    if (!k) throw arg_error("unknown --kind '" + tag + "' (expected hs|he|bu|tr|re)");
    if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
  }
  return kinds;
}

std::string kinds_label(const std::vector<DistanceKind>& kinds) {
  std::string s;
  for (auto k : kinds) s += (s.empty() ? "" : ",") + std::string(short_name(k));
  return s;
}

nlohmann::ordered_json base_meta(const std::string& command, const RunConfig& rc) {
  nlohmann::ordered_json m;
  m["tool"] = "nlgeo";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["hellinger"] = "squared";
  m["bures"] = "squared";
  m["log_base"] = 2;
  m["param_tol"] = rc.opt.param_tol;
  m["value_tol"] = rc.opt.value_tol;
  m["max_iters"] = rc.opt.max_iters;
  m["seeds"] = rc.opt.seeds;
  m["penalty_growth"] = rc.opt.penalty_growth;
  m["seed"] = rc.opt.rng_seed;
  return m;
}

int cmd_werner_sweep(const RunConfig& rc, Table& table) {
  const auto kinds = resolve_kinds(rc, kFigureKinds);
  const double t = werner_threshold();
  std::vector<double> ws;
  if (rc.w) {
    ws = {*rc.w};
  } else {
    const double lo = rc.w_min.value_or(t);
    const double hi = rc.w_max.value_or(1.0);
    if (lo < t - 1e-12 || hi > 1.0 || !(lo < hi)) throw arg_error("need 1/sqrt(2) <= w-min < w-max <= 1");
    ws = linspace(std::max(lo, t), hi, rc.n);
  }
  table.meta["kinds"] = kinds_label(kinds);
  table.meta["normalization"] = "werner_maximum";
  table.columns = {"w"};
  for (auto k : kinds) table.columns.emplace_back(short_name(k));
  for (double w : ws) {
    std::vector<Cell> row{w};
    for (auto k : kinds) row.emplace_back(werner_measure(k, w).value / werner_maximum(k));
    table.rows.push_back(std::move(row));
  }
  return kExitOk;
}

int cmd_bd_sweep(const RunConfig& rc, Table& table) {
  const auto kinds = resolve_kinds(rc, kFigureKinds);
  const SweepFamily family = parse_sweep_family(rc.family);
  table.meta["family"] = std::string(to_string(family));
  table.meta["kinds"] = kinds_label(kinds);
  table.meta["normalization"] = "werner_maximum";
  table.columns = {family == SweepFamily::TwoBellMix ? "p" : "w"};
  std::vector<std::vector<TableCell>> per_kind;
  for (auto k : kinds) {
    table.columns.emplace_back(short_name(k));
    per_kind.push_back(bd_sweep(k, family, rc.n, rc.opt));
  }
  for (std::size_t i = 0; i < per_kind.front().size(); ++i) {
    std::vector<Cell> row{per_kind.front()[i].parameter};
    for (const auto& cells : per_kind) row.emplace_back(cells[i].normalized);
    table.rows.push_back(std::move(row));
  }
  return kExitOk;
}

int cmd_bd_grid(const RunConfig& rc, Table& table) {
  const std::array<DistanceKind, 1> hs = {DistanceKind::HilbertSchmidt};
  const auto kinds = resolve_kinds(rc, hs);
  if (kinds.size() != 1) throw arg_error("bd-grid takes exactly one --kind");
  table.meta["kind"] = std::string(short_name(kinds.front()));
  table.meta["grid_n"] = rc.grid_n;
  table.meta["e4"] = 0;
  table.meta["normalization"] = "werner_maximum";
  table.columns = {"e1", "e2", "value"};
  for (const auto& c : bd_grid(kinds.front(), rc.grid_n, rc.opt)) table.rows.push_back({c.e1, c.e2, c.normalized});
  return kExitOk;
}

int cmd_bd_measure(const RunConfig& rc, Table& table, std::ostream& err) {
  if (rc.a.empty() == rc.e.empty()) throw arg_error("bd-measure needs exactly one of --a or --e");
  Eigen::Vector3d a;
  if (!rc.a.empty()) {
    if (rc.a.size() != 3) throw arg_error("--a takes three comma-separated correlators");
    a = BellDiagonal::from_correlators(Eigen::Vector3d(rc.a[0], rc.a[1], rc.a[2])).correlators();
  } else {
    if (rc.e.size() != 4) throw arg_error("--e takes four comma-separated Bell weights");
    a = BellDiagonal::from_probabilities(Eigen::Vector4d(rc.e[0], rc.e[1], rc.e[2], rc.e[3])).correlators();
  }
  const auto kinds = resolve_kinds(rc, kAllDistanceKinds);
  table.meta["a1"] = a(0);
  table.meta["a2"] = a(1);
  table.meta["a3"] = a(2);
  table.meta["chsh_local"] = bd_is_chsh_local(a);
  table.columns = {"kind",      "value",      "normalized", "method",   "surface",  "closest_a1",
                   "closest_a2", "closest_a3", "iterations", "converged", "residual", "seed_spread"};
  int status = kExitOk;
  for (auto k : kinds) {
    MeasureResult r;
    try {
      r = bd_measure(k, a, rc.opt);
    } catch (const NotConvergedError& ex) {
      err << "nlgeo: " << short_name(k) << ": " << ex.what() << '\n';
      r = ex.partial();
      status = kExitNotConverged;
    }
    const Eigen::Vector3d c = closest_correlators(r);
    table.rows.push_back({std::string(short_name(k)), r.value, r.value / werner_maximum(k),
                          std::string(to_string(r.method)), r.surface ? Cell{(long long)*r.surface} : Cell{}, c(0),
                          c(1), c(2), (long long)r.iterations, r.converged, r.residual, r.seed_spread});
  }
  return status;
}

int cmd_iso(const RunConfig& rc, Table& table) {
  if (rc.d < 2) throw arg_error("--d must be at least 2");
  const auto kinds = resolve_kinds(rc, kFigureKinds);
  const CglmpThreshold thr = cglmp_threshold(rc.d);
  std::vector<double> omegas;
  if (rc.omega) {
    omegas = {*rc.omega};
  } else {
    omegas = linspace(rc.omega_min.value_or(thr.omega_threshold), rc.omega_max.value_or(1.0), rc.n);
  }
  table.meta["d"] = rc.d;
  table.meta["I_d"] = thr.i_d_qm;
  table.meta["threshold"] = thr.omega_threshold;
  table.meta["kinds"] = kinds_label(kinds);
  table.columns = {"omega", "kind", "value_definition", "value_printed", "consistent"};
  for (double omega : omegas) {
    for (auto k : kinds) {
      const MeasureResult r = isotropic_measure(k, rc.d, omega);
      table.rows.push_back({omega, std::string(short_name(k)), r.value,
                            r.printed ? Cell{r.printed->printed_value} : Cell{},
                            r.printed ? Cell{r.printed->consistent} : Cell{}});
    }
  }
  return kExitOk;
}

// ---- validate ---------------------------------------------------------------

struct Check {
  Check(std::string check_name, std::string case_label) : check(std::move(check_name)), label(std::move(case_label)) {}

  std::string check, label;
  double value = 0.0, reference = 0.0, tolerance = 0.0, residual = 0.0;
  long long iterations = 0;
  std::string status;
  double elapsed_ms = 0.0;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return std::round(ms * 1000.0) / 1000.0;
}

void settle(Check& c, bool extra_ok = true) {
  if (c.status.empty()) {
    const double err = std::abs(c.value - c.reference);
    c.status = (err <= c.tolerance && extra_ok) ? "pass" : "fail";
  }
}

void werner_oracle_checks(const std::vector<DistanceKind>& kinds, const OptimizerConfig& cfg,
                          std::vector<Check>& out) {
  const double t = werner_threshold();
  for (auto k : kinds) {
    for (int i = 1; i <= 20; ++i) {
      const double w = t + (1.0 - t) * double(i) / 20.0;
      Check c{"werner_oracle", std::string(short_name(k)) + " w=" + format_double(w)};
      c.tolerance = kOracleTolerance;
      c.reference = werner_measure(k, w).value;
      const auto t0 = Clock::now();
      try {
        const MeasureResult r = bd_measure_numeric(k, w * bell_corner(3), cfg);
        c.value = r.value;
        c.residual = r.residual;
        c.iterations = r.iterations;
      } catch (const NotConvergedError& ex) {
        c.value = ex.partial().value;
        c.residual = ex.partial().residual;
        c.iterations = ex.partial().iterations;
        c.status = "not_converged";
      }
      c.elapsed_ms = ms_since(t0);
      settle(c);
      out.push_back(std::move(c));
    }
  }
}

void grid_checks(const std::vector<DistanceKind>& kinds, const OptimizerConfig& cfg, std::vector<Check>& out) {
  constexpr std::array<int, 3> sizes = {10, 20, 50};
  for (auto k : kinds) {
    std::map<int, std::map<std::pair<double, double>, double>> grids;
    Check failed{"grid_convergence", std::string(short_name(k))};
    const auto t0 = Clock::now();
    long long iters = 0;
    try {
      for (int n : sizes) {
        for (const auto& cell : bd_grid(k, n, cfg)) {
          grids[n][{cell.e1, cell.e2}] = cell.normalized;
          iters += cell.result.iterations;
        }
      }
    } catch (const NotConvergedError& ex) {
      failed.status = "not_converged";
      failed.value = ex.partial().value;
      failed.residual = ex.partial().residual;
      failed.iterations = ex.partial().iterations;
      failed.tolerance = kGridTolerance;
      failed.elapsed_ms = ms_since(t0);
      out.push_back(std::move(failed));
      continue;
    }
    const double elapsed = ms_since(t0);
    for (std::size_t p = 0; p < sizes.size(); ++p) {
      for (std::size_t q = p + 1; q < sizes.size(); ++q) {
        Check c{"grid_convergence",
                std::string(short_name(k)) + " n=" + std::to_string(sizes[p]) + "->" + std::to_string(sizes[q])};
        c.tolerance = kGridTolerance;
        double worst = -1.0;
        long long shared = 0;
        for (const auto& [node, coarse] : grids[sizes[p]]) {
          const auto it = grids[sizes[q]].find(node);
          if (it == grids[sizes[q]].end()) continue;
          ++shared;
          if (std::abs(coarse - it->second) > worst) {
            worst = std::abs(coarse - it->second);
            c.value = coarse;
            c.reference = it->second;
          }
        }
        c.residual = double(shared);  // coincident nodes compared
        c.iterations = iters;
        c.elapsed_ms = elapsed;
        settle(c, shared > 0);
        out.push_back(std::move(c));
      }
    }
  }
}

void seed_checks(const std::vector<DistanceKind>& kinds, const OptimizerConfig& cfg, std::vector<Check>& out) {
  const std::array<Eigen::Vector3d, 4> points = {Eigen::Vector3d(0.75, -0.75, 0.6), Eigen::Vector3d(0.85, 0.6, -0.5),
                                                 Eigen::Vector3d(0.95, -0.5, 0.5), Eigen::Vector3d(0.9, 0.9, -0.9)};
  OptimizerConfig other = cfg;
  other.seeds = 2 * cfg.seeds;
  other.rng_seed = ~cfg.rng_seed;
  for (auto k : kinds) {
    for (const auto& a : points) {
      Check c{"multi_seed", std::string(short_name(k)) + " a=(" + format_double(a(0)) + ";" + format_double(a(1)) +
                                ";" + format_double(a(2)) + ")"};
      c.tolerance = kSeedTolerance;
      const auto t0 = Clock::now();
      try {
        const MeasureResult r1 = bd_measure_numeric(k, a, cfg);
        const MeasureResult r2 = bd_measure_numeric(k, a, other);
        c.value = r1.value;
        c.reference = r2.value;
        c.residual = std::max(r1.seed_spread, r2.seed_spread);
        c.iterations = r1.iterations + r2.iterations;
      } catch (const NotConvergedError& ex) {
        c.value = ex.partial().value;
        c.residual = ex.partial().residual;
        c.iterations = ex.partial().iterations;
        c.status = "not_converged";
      }
      c.elapsed_ms = ms_since(t0);
      settle(c, c.residual <= kSeedTolerance);
      out.push_back(std::move(c));
    }
  }
}

void iso_checks(const std::vector<DistanceKind>& kinds, std::vector<Check>& out) {
  for (auto k : kinds) {
    for (double omega : {0.75, 0.85, 0.95, 1.0}) {
      Check c{"isotropic_d2_vs_werner", std::string(short_name(k)) + " omega=" + format_double(omega)};
      c.tolerance = kIsoWernerTolerance;
      const auto t0 = Clock::now();
      c.value = isotropic_measure(k, 2, omega).value;
      c.reference = werner_measure(k, omega).value;
      c.elapsed_ms = ms_since(t0);
      settle(c);
      out.push_back(std::move(c));
    }
  }
}

int cmd_validate(const RunConfig& rc, Table& table, std::ostream& err) {
  const auto kinds = resolve_kinds(rc, kAllDistanceKinds);
  rc.opt.validate();
  std::vector<Check> checks;
  werner_oracle_checks(kinds, rc.opt, checks);
  grid_checks(kinds, rc.opt, checks);
  seed_checks(kinds, rc.opt, checks);
  iso_checks(kinds, checks);

  table.meta["kinds"] = kinds_label(kinds);
  table.columns = {"check",     "case",      "value",      "reference", "abs_error",
                   "tolerance", "residual",  "iterations", "status",    "elapsed_ms"};
  long long failures = 0;
  for (const auto& c : checks) {
    if (c.status != "pass") {
      ++failures;
      err << "nlgeo: validate: " << c.check << " [" << c.label << "] " << c.status << '\n';
    }
    table.rows.push_back({c.check, c.label, c.value, c.reference, std::abs(c.value - c.reference), c.tolerance,
                          c.residual, c.iterations, c.status, c.elapsed_ms});
  }
  table.meta["checks"] = (long long)checks.size();
  table.meta["failures"] = failures;
  return failures == 0 ? kExitOk : kExitValidation;
}

// ---- option wiring ----------------------------------------------------------

void add_common(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--kind", rc.kinds, "distance kind: hs|he|bu|tr|re (repeatable)")->delimiter(',');
  sub->add_option("--seed", rc.opt.rng_seed, "seed for the random starting points");
  sub->add_option("--out", rc.out, "output file (default: stdout)");
  sub->add_option("--format", rc.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--param-tol", rc.opt.param_tol, "optimizer step tolerance");
  sub->add_option("--value-tol", rc.opt.value_tol, "optimizer objective-gap tolerance");
  sub->add_option("--max-iters", rc.opt.max_iters, "Newton iteration cap per start");
  sub->add_option("--seeds", rc.opt.seeds, "starting points per minimization");
  sub->add_option("--penalty-growth", rc.opt.penalty_growth, "barrier weight growth per stage");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPhysical:
    case ErrorCode::InvalidProbability:
      return kExitNonPhysical;
    case ErrorCode::NotConverged:
      return kExitNotConverged;
    default:
      return kExitArgument;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distance-based Bell nonlocality measures", "nlgeo"};
  app.require_subcommand(1, 1);
  RunConfig rc;

  auto* werner = app.add_subcommand("werner-sweep", "normalized closed-form measures along the Werner family");
  add_common(werner, rc);
  werner->add_option("--w", rc.w, "single Werner parameter");
  werner->add_option("--w-min", rc.w_min, "sweep start (default 1/sqrt(2))");
  werner->add_option("--w-max", rc.w_max, "sweep end (default 1)");
  werner->add_option("--n", rc.n, "number of points");

  auto* sweep = app.add_subcommand("bd-sweep", "normalized numeric measures along a Bell-diagonal family");
  add_common(sweep, rc);
  sweep->add_option("--family", rc.family, "two-bell|werner")
      ->check(CLI::IsMember({"two-bell", "two_bell_mix", "werner", "werner_line"}));
  sweep->add_option("--n", rc.n, "number of points");

  auto* grid = app.add_subcommand("bd-grid", "normalized measure on the e4 = 0 slice, long form");
  add_common(grid, rc);
  grid->add_option("--grid-n", rc.grid_n, "intervals per axis");

  auto* measure = app.add_subcommand("bd-measure", "every measure of one Bell-diagonal state");
  add_common(measure, rc);
  measure->add_option("--a", rc.a, "correlators A1,A2,A3")->delimiter(',');
  measure->add_option("--e", rc.e, "Bell weights E1,E2,E3,E4")->delimiter(',');

  auto* iso = app.add_subcommand("iso", "isotropic measures, definition vs printed closed form");
  add_common(iso, rc);
  iso->add_option("--d", rc.d, "local dimension");
  iso->add_option("--omega", rc.omega, "single isotropic parameter");
  iso->add_option("--omega-min", rc.omega_min, "sweep start (default: CGLMP threshold)");
  iso->add_option("--omega-max", rc.omega_max, "sweep end (default 1)");
  iso->add_option("--n", rc.n, "number of points");

  auto* validate = app.add_subcommand("validate", "numeric minimizer against the closed forms");
  add_common(validate, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitArgument;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Table table;
  table.meta = base_meta(command, rc);
  int status = kExitOk;
  try {
    rc.opt.validate();
    if (command == "werner-sweep") status = cmd_werner_sweep(rc, table);
    else if (command == "bd-sweep") status = cmd_bd_sweep(rc, table);
    else if (command == "bd-grid") status = cmd_bd_grid(rc, table);
    else if (command == "bd-measure") status = cmd_bd_measure(rc, table, err);
    else if (command == "iso") status = cmd_iso(rc, table);
    else status = cmd_validate(rc, table, err);
  } catch (const NotConvergedError& ex) {
    err << "nlgeo: " << ex.what() << '\n';
    return kExitNotConverged;
  } catch (const Error& ex) {
    err << "nlgeo: " << ex.what() << '\n';
    return exit_code_for(ex.code());
  }

  // Single writer, after every cell is done.
  std::ofstream file;
  if (!rc.out.empty()) {
    file.open(rc.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "nlgeo: cannot open '" << rc.out << "' for writing\n";
      return kExitArgument;
    }
  }
  std::ostream& sink = rc.out.empty() ? out : file;
  if (rc.format == "json") {
    write_json(table, sink);
  } else {
    write_csv(table, sink);
  }
  return status;
}

}  // namespace nlgeo::cli
