#include "nlgeo/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace nlgeo {

namespace {

constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeding depends only on the configured seed and the input point, so a node
// shared by two grids gets the same starts.
std::uint64_t point_seed(std::uint64_t seed, const Eigen::Vector3d& a) {
  std::uint64_t h = splitmix64(seed);
  for (int i = 0; i < 3; ++i) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(a(i) + 0.0));
  return h;
}

void require_physical(const Eigen::Vector3d& a) {
  if (!in_tetrahedron(a)) {
    throw Error(ErrorCode::NonPhysical, "correlators outside the Bell-diagonal tetrahedron");
  }
}

MeasureResult zero_measure(DistanceKind kind, const Eigen::Vector3d& a) {
  MeasureResult r;
  r.kind = kind;
  r.value = 0.0;
  r.closest_local = BellDiagonal::from_correlators(a);
  r.method = Method::ClosedForm;
  return r;
}

std::vector<int> active_at(const Eigen::Vector3d& a) {
  std::vector<int> ids;
  for (int c = 0; c < kSurfaceCount; ++c)
    if (surface_slack(c, a) <= kActiveTolerance) ids.push_back(c);
  return ids;
}

double xlog2x_ratio(double p, double q) { return p > 0.0 ? p * std::log2(p / q) : 0.0; }

bool agrees(double printed, double reference) {
  return std::isfinite(printed) && std::isfinite(reference) &&
         std::abs(printed - reference) <= 1e-9 * std::max(1.0, std::abs(reference));
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::ClosedForm: return "closed_form";
    case Method::LagrangeCase: return "lagrange_case";
    case Method::Numeric: return "numeric";
  }
  return "?";
}

NotConvergedError::NotConvergedError(MeasureResult partial)
    : Error(ErrorCode::NotConverged, "optimizer stopped after " + std::to_string(partial.iterations) +
                                         " iterations (residual " + std::to_string(partial.residual) + ")"),
      partial_(std::move(partial)) {}

double werner_threshold() { return 1.0 / std::numbers::sqrt2; }

MeasureResult werner_measure(DistanceKind kind, double w) {
  if (!(w > -1.0 / 3.0 && w <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "Werner parameter must lie in (-1/3, 1], got " + std::to_string(w));
  }
  MeasureResult r;
  r.kind = kind;
  r.method = Method::ClosedForm;
  const double t = werner_threshold();
  if (w <= t) {
    r.closest_local = WernerParam{w};
    return r;
  }
  r.closest_local = WernerParam{t};
  switch (kind) {
    case DistanceKind::HilbertSchmidt:
      r.value = std::sqrt(3.0) / 2.0 * (w - t);
      break;
    case DistanceKind::Hellinger:
    case DistanceKind::Bures:
      r.value = 2.0 - 0.5 * (3.0 * std::sqrt((1.0 - w) * (1.0 - t)) + std::sqrt((1.0 + 3.0 * w) * (1.0 + 3.0 * t)));
      break;
    case DistanceKind::Trace:
      r.value = 0.75 * (w - t);
      break;
    case DistanceKind::RelativeEntropy:
      // Singlet weight (1+3w)/4 and three weights (1-w)/4, against the same at w = t.
      r.value = xlog2x_ratio((1.0 + 3.0 * w) / 4.0, (1.0 + 3.0 * t) / 4.0) +
                3.0 * xlog2x_ratio((1.0 - w) / 4.0, (1.0 - t) / 4.0);
      break;
  }
  return r;
}

double werner_maximum(DistanceKind kind) { return werner_measure(kind, 1.0).value; }

double isotropic_printed_formula(DistanceKind kind, int d, double omega) {
  const double d2 = double(d) * d;
  const double thr = cglmp_threshold(d).omega_threshold;
  switch (kind) {
    case DistanceKind::HilbertSchmidt:
      return std::sqrt(1.0 - 1.0 / d2) * (omega - thr);
    case DistanceKind::Trace:
      return 2.0 * (d2 - 1.0) / d2 * (omega - thr);
    case DistanceKind::Hellinger:
    case DistanceKind::Bures:
      return 2.0 - 2.0 / d *
                       ((d2 - 1.0) * std::sqrt((1.0 - omega) * (1.0 - thr)) +
                        std::sqrt(((d2 - 1.0) * omega + 1.0) * ((d2 - 1.0) * thr + 1.0)));
    case DistanceKind::RelativeEntropy: {
      const double top = ((d2 - 1.0) * omega + 1.0) / d2;
      const double top_loc = ((d2 - 1.0) * thr + 1.0) / d2;
      const double rest = (d2 - 1.0) / d2;
      return top * std::log2(top) + rest * std::log2((1.0 - omega) / d2) + top_loc * std::log2(top_loc) +
             rest * std::log2((1.0 - thr) / d2);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

MeasureResult isotropic_measure(DistanceKind kind, int d, double omega) {
  const DensityMatrix rho = make_isotropic(d, omega);
  const double thr = cglmp_threshold(d).omega_threshold;
  MeasureResult r;
  r.kind = kind;
  r.method = Method::ClosedForm;
  if (omega <= thr) {
    r.closest_local = IsotropicParam{d, omega};
    return r;
  }
  r.closest_local = IsotropicParam{d, thr};
  r.value = measure_functional(kind, rho, make_isotropic(d, thr));
  const double printed = isotropic_printed_formula(kind, d, omega);
  r.printed = PrintedFormulaCheck{printed, agrees(printed, r.value)};
  return r;
}

MeasureResult bd_measure_hs(const Eigen::Vector3d& a, const OptimizerConfig& cfg) {
  require_physical(a);
  if (max_pair_sum(a) <= 1.0 + kLocalityTolerance) return zero_measure(DistanceKind::HilbertSchmidt, a);

  std::optional<int> best_case;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_point;
  for (int id = 0; id < 3; ++id) {
    const auto [i, j] = kPairs[id];
    const int k = 3 - i - j;
    const double radius = std::hypot(a(i), a(j));
    if (radius <= 1.0) continue;
    Eigen::Vector3d cand = a;
    cand(i) /= radius;
    cand(j) /= radius;
    const bool ordered = std::abs(cand(i)) >= std::abs(cand(k)) && std::abs(cand(j)) >= std::abs(cand(k));
    if (!ordered || !in_tetrahedron(cand)) continue;
    const double value = 0.5 * (radius - 1.0);
    if (value < best_value) {
      best_value = value;
      best_case = id;
      best_point = cand;
    }
  }
  if (!best_case) return bd_measure_numeric(DistanceKind::HilbertSchmidt, a, cfg);

  MeasureResult r;
  r.kind = DistanceKind::HilbertSchmidt;
  r.value = best_value;
  r.closest_local = BellDiagonal::from_correlators(best_point);
  r.method = Method::LagrangeCase;
  r.active_surfaces = active_at(best_point);
  r.surface = *best_case;
  // Stationarity of 1/4 |a - a'|^2 against the single active cylinder.
  const BdObjective hs(DistanceKind::HilbertSchmidt, a);
  const Eigen::Vector3d grad_s = surface_slack_gradient(*best_case, best_point);
  const Eigen::Vector3d grad_f = hs.gradient(best_point);
  const double lambda = grad_f.dot(grad_s) / grad_s.squaredNorm();
  r.residual = (grad_f - lambda * grad_s).lpNorm<Eigen::Infinity>();
  return r;
}

std::vector<Eigen::Vector3d> numeric_seeds(const Eigen::Vector3d& a, const OptimizerConfig& cfg) {
  std::vector<Eigen::Vector3d> seeds;
  seeds.reserve(std::size_t(std::max(cfg.seeds, 5)));
  const Eigen::Vector3d radial = pull_inside(a);
  seeds.push_back(radial);

  int corner = 0;
  for (int k = 1; k < 4; ++k)
    if (bell_corner(k).dot(a) > bell_corner(corner).dot(a)) corner = k;
  seeds.push_back(pull_inside(werner_threshold() * bell_corner(corner)));

  for (const auto& [i, j] : kPairs) {
    Eigen::Vector3d cand = a;
    const double radius = std::hypot(a(i), a(j));
    if (radius > 0.0) {
      cand(i) /= radius;
      cand(j) /= radius;
    }
    seeds.push_back(pull_inside(cand));
  }

  std::mt19937_64 rng(point_seed(cfg.rng_seed, a));
  std::normal_distribution<double> noise(0.0, 0.15);
  while (int(seeds.size()) < cfg.seeds) {
    const Eigen::Vector3d jitter(noise(rng), noise(rng), noise(rng));
    seeds.push_back(pull_inside(radial + jitter));
  }
  seeds.resize(std::size_t(cfg.seeds));
  return seeds;
}

MeasureResult bd_measure_numeric(DistanceKind kind, const Eigen::Vector3d& a, const OptimizerConfig& cfg) {
  cfg.validate();
  require_physical(a);
  if (max_pair_sum(a) <= 1.0 + kLocalityTolerance) return zero_measure(kind, a);

  const BdObjective objective(kind, a);
  std::optional<SolveReport> best;
  double best_value = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  auto surface_of = [](const SolveReport& rep) { return rep.active.empty() ? kSurfaceCount : rep.active.front(); };

  for (const Eigen::Vector3d& start : numeric_seeds(a, cfg)) {
    SolveReport rep = minimize_over_local_set(objective, start, cfg);
    const double value = objective.measure(rep.point);
    if (rep.converged) {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    const bool better = !best || (rep.converged && !best->converged) ||
                        (rep.converged == best->converged &&
                         (value < best_value - 1e-12 ||
                          (std::abs(value - best_value) <= 1e-12 && surface_of(rep) < surface_of(*best))));
    if (better) {
      best_value = value;
      best = std::move(rep);
    }
  }

  MeasureResult r;
  r.kind = kind;
  r.value = best_value;
  r.closest_local = BellDiagonal::from_correlators(best->point);
  r.method = Method::Numeric;
  r.active_surfaces = best->active;
  if (!best->active.empty()) r.surface = best->active.front();
  r.iterations = best->iterations;
  r.converged = best->converged;
  r.residual = best->residual;
  r.seed_spread = hi >= lo ? hi - lo : 0.0;
  if (!r.converged) throw NotConvergedError(std::move(r));
  return r;
}

MeasureResult bd_measure(DistanceKind kind, const Eigen::Vector3d& a, const OptimizerConfig& cfg) {
  if (kind == DistanceKind::HilbertSchmidt) return bd_measure_hs(a, cfg);
  return bd_measure_numeric(kind, a, cfg);
}

Eigen::Vector3d closest_correlators(const MeasureResult& result) {
  if (const auto* bd = std::get_if<BellDiagonal>(&result.closest_local)) return bd->correlators();
  if (const auto* wp = std::get_if<WernerParam>(&result.closest_local)) return wp->w * bell_corner(3);
  throw Error(ErrorCode::DimensionMismatch, "isotropic closest state has no Bell-diagonal correlators");
}

}  // namespace nlgeo
