#include "nlgeo/tables.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <string>

namespace nlgeo {

namespace {

struct Job {
  DistanceKind kind;
  OptimizerConfig cfg;
  double scale;  // Werner maximum of `kind`
};

void evaluate(const Job& job, TableCell& cell) {
  cell.result = bd_measure(job.kind, cell.a, job.cfg);
  cell.normalized = cell.result.value / job.scale;
}

void run_parallel(const Job& job, std::vector<TableCell>& cells) {
  std::vector<std::exception_ptr> failures(cells.size());
  const long count = long(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long n = 0; n < count; ++n) {
    try {
      evaluate(job, cells[std::size_t(n)]);
    } catch (...) {
      failures[std::size_t(n)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

void run_serial(const Job& job, std::vector<TableCell>& cells) {
  for (auto& cell : cells) evaluate(job, cell);
}

Job make_job(DistanceKind kind, const OptimizerConfig& cfg) {
  cfg.validate();
  return Job{kind, cfg, werner_maximum(kind)};
}

std::vector<TableCell> sweep_cells(SweepFamily family, int n_points) {
  const auto [lo, hi] = sweep_range(family);
  std::vector<TableCell> cells;
  for (double p : linspace(lo, hi, n_points)) {
    TableCell c;
    c.parameter = p;
    c.a = sweep_point(family, p);
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<TableCell> grid_cells(int grid_n) {
  if (grid_n < 2) throw Error(ErrorCode::ArgumentError, "grid_n must be at least 2");
  std::vector<TableCell> cells;
  cells.reserve(std::size_t(grid_n + 1) * std::size_t(grid_n + 2) / 2);
  for (int i = 0; i <= grid_n; ++i) {
    for (int j = 0; i + j <= grid_n; ++j) {
      TableCell c;
      c.e1 = grid_coordinate(i, grid_n);
      c.e2 = grid_coordinate(j, grid_n);
      const Eigen::Vector4d e(c.e1, c.e2, grid_coordinate(grid_n - i - j, grid_n), 0.0);
      c.a = bd_probs_to_corr(e);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

}  // namespace

std::string_view to_string(SweepFamily family) noexcept {
  return family == SweepFamily::TwoBellMix ? "two_bell_mix" : "werner_line";
}

SweepFamily parse_sweep_family(std::string_view text) {
  if (text == "two-bell" || text == "two_bell_mix") return SweepFamily::TwoBellMix;
  if (text == "werner" || text == "werner_line") return SweepFamily::WernerLine;
  throw Error(ErrorCode::ArgumentError, "unknown sweep family '" + std::string(text) + "'");
}

Eigen::Vector3d sweep_point(SweepFamily family, double parameter) {
  if (family == SweepFamily::TwoBellMix) {
    const double c = 2.0 * parameter - 1.0;
    return Eigen::Vector3d(c, -c, 1.0);
  }
  return parameter * bell_corner(3);
}

std::pair<double, double> sweep_range(SweepFamily family) {
  if (family == SweepFamily::TwoBellMix) return {0.5, 1.0};
  return {werner_threshold(), 1.0};
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw Error(ErrorCode::ArgumentError, "need at least 2 points, got " + std::to_string(n));
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[std::size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  xs.back() = hi;
  return xs;
}

double grid_coordinate(int num, int den) {
  const int g = std::gcd(num, den);
  return g == 0 ? 0.0 : double(num / g) / double(den / g);
}

std::vector<TableCell> bd_sweep(DistanceKind kind, SweepFamily family, int n_points, const OptimizerConfig& cfg) {
  const Job job = make_job(kind, cfg);
  auto cells = sweep_cells(family, n_points);
  run_parallel(job, cells);
  return cells;
}

std::vector<TableCell> bd_sweep_serial(DistanceKind kind, SweepFamily family, int n_points,
                                       const OptimizerConfig& cfg) {
  const Job job = make_job(kind, cfg);
  auto cells = sweep_cells(family, n_points);
  run_serial(job, cells);
  return cells;
}

std::vector<TableCell> bd_grid(DistanceKind kind, int grid_n, const OptimizerConfig& cfg) {
  const Job job = make_job(kind, cfg);
  auto cells = grid_cells(grid_n);
  run_parallel(job, cells);
  return cells;
}

std::vector<TableCell> bd_grid_serial(DistanceKind kind, int grid_n, const OptimizerConfig& cfg) {
  const Job job = make_job(kind, cfg);
  auto cells = grid_cells(grid_n);
  run_serial(job, cells);
  return cells;
}

}  // namespace nlgeo
