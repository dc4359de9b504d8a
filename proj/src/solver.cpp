#include "nlgeo/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlgeo/error.hpp"
#include "nlgeo/locality.hpp"

namespace nlgeo {

namespace {

constexpr int kConstraints = kSurfaceCount;
constexpr double kCenteringTol = 1e-12;
constexpr double kMinSmoothing = 1e-14;
constexpr double kPolishCandidate = 1e-6;
constexpr double kSubgradientTol = 1e-7;

std::array<double, kConstraints> slacks(const Eigen::Vector3d& x) {
  std::array<double, kConstraints> s{};
  for (int c = 0; c < kConstraints; ++c) s[c] = surface_slack(c, x);
  return s;
}

bool strictly_feasible(const std::array<double, kConstraints>& s) {
  return std::all_of(s.begin(), s.end(), [](double v) { return v > 0.0; });
}

struct Barrier {
  BdObjective& objective;
  double t = 1.0;

  // t (f(y) - f(x)) - sum log(s(y) / s(x)); +inf when y leaves the domain.
  double difference(double fx, const std::array<double, kConstraints>& sx,
                    const Eigen::Vector3d& y) const {
    const auto sy = slacks(y);
    if (!strictly_feasible(sy)) return std::numeric_limits<double>::infinity();
    const double fy = objective.value(y);
    if (!std::isfinite(fy)) return std::numeric_limits<double>::infinity();
    double d = t * (fy - fx);
    for (int c = 0; c < kConstraints; ++c) d -= std::log(sy[c] / sx[c]);
    return d;
  }
};

// Smallest stationarity violation |grad f - sum_c lambda_c grad s_c|_inf over
// lambda_c >= 0 on the near-active surfaces. For Trace the weights that match
// the target contribute any subgradient in [-1/2, 1/2] instead of a fixed sign.
// Box-constrained least squares, solved by accelerated projected gradient.
double kkt_residual(const BdObjective& objective, const Eigen::Vector3d& x) {
  constexpr double kUnbounded = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector3d> cols;
  std::vector<double> lo, hi;
  Eigen::Vector3d g0;
  if (objective.kind() == DistanceKind::Trace) {
    const auto& jac = probs_jacobian();
    const Eigen::Vector4d diff = bd_corr_to_probs(x) - objective.target_probabilities();
    Eigen::Vector4d fixed = Eigen::Vector4d::Zero();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(diff(i)) > kSubgradientTol) {
        fixed(i) = diff(i) > 0.0 ? 0.5 : -0.5;
      } else {
        cols.push_back(jac.row(i).transpose());
        lo.push_back(-0.5);
        hi.push_back(0.5);
      }
    }
    g0 = jac.transpose() * fixed;
  } else {
    g0 = objective.gradient(x);
  }
  for (int c = 0; c < kConstraints; ++c) {
    if (surface_slack(c, x) <= kPolishCandidate) {
      cols.push_back(-surface_slack_gradient(c, x));
      lo.push_back(0.0);
      hi.push_back(kUnbounded);
    }
  }
  if (cols.empty()) return g0.lpNorm<Eigen::Infinity>();

  const Eigen::Index m = Eigen::Index(cols.size());
  Eigen::MatrixXd b(3, m);
  for (Eigen::Index k = 0; k < m; ++k) b.col(k) = cols[std::size_t(k)];
  const double lipschitz = std::max(b.squaredNorm(), 1e-300);
  auto project = [&](Eigen::VectorXd z) {
    for (Eigen::Index k = 0; k < m; ++k) z(k) = std::clamp(z(k), lo[std::size_t(k)], hi[std::size_t(k)]);
    return z;
  };
  Eigen::VectorXd z = project(Eigen::VectorXd::Zero(m));
  Eigen::VectorXd y = z;
  double momentum = 1.0;
  double best = (g0 + b * z).lpNorm<Eigen::Infinity>();
  int stalled = 0;
  for (int iter = 0; iter < 5000 && best > 1e-15 && stalled < 200; ++iter) {
    const Eigen::VectorXd next = project(y - b.transpose() * (g0 + b * y) / lipschitz);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - z);
    z = next;
    momentum = next_momentum;
    const double r = (g0 + b * z).lpNorm<Eigen::Infinity>();
    stalled = r < best * (1.0 - 1e-6) ? 0 : stalled + 1;
    best = std::min(best, r);
  }
  return best;
}

struct Polish {
  Eigen::Vector3d point;
  Eigen::VectorXd lambda;
  double residual = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Newton on grad f = sum_A lambda_c grad s_c, s_A = 0.
Polish kkt_polish(const BdObjective& objective, Eigen::Vector3d x, const std::vector<int>& active,
                  Eigen::VectorXd lambda) {
  const int na = int(active.size());
  const int n = 3 + na;
  Polish out;
  for (int iter = 0; iter < 40; ++iter) {
    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    Eigen::Matrix3d hl = objective.hessian(x);
    Eigen::Vector3d rx = objective.gradient(x);
    for (int k = 0; k < na; ++k) {
      const Eigen::Vector3d g = surface_slack_gradient(active[k], x);
      rx -= lambda(k) * g;
      hl -= lambda(k) * surface_slack_hessian(active[k]);
      jac.block(0, 3 + k, 3, 1) = -g;
      jac.block(3 + k, 0, 1, 3) = g.transpose();
      r(3 + k) = surface_slack(active[k], x);
    }
    r.head<3>() = rx;
    jac.topLeftCorner<3, 3>() = hl;
    if (!r.allFinite()) return out;
    const double norm = r.lpNorm<Eigen::Infinity>();
    if (norm < out.residual) {
      out.residual = norm;
      out.point = x;
      out.lambda = lambda;
    }
    if (norm <= 1e-15) break;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) return out;
    const Eigen::VectorXd dz = lu.solve(-r);
    x += dz.head<3>();
    lambda += dz.tail(na);
  }
  out.ok = std::isfinite(out.residual) && out.residual <= 1e-10;
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(param_tol > 0.0) || !(value_tol > 0.0) || max_iters <= 0 || seeds <= 0 || !(penalty_growth > 1.0)) {
    throw Error(ErrorCode::ArgumentError,
                "optimizer tolerances, iteration cap and seed count must be positive; growth must exceed 1");
  }
}

Eigen::Vector3d pull_inside(const Eigen::Vector3d& x, double margin) {
  double scale = 1.0;
  for (int c = 0; c < 3; ++c) {
    const double pair = 1.0 - surface_slack(c, x);  // a_i^2 + a_j^2
    if (pair > 0.0) scale = std::min(scale, 1.0 / std::sqrt(pair));
  }
  for (int k = 0; k < 4; ++k) {
    const double proj = bell_corner(k).dot(x);
    if (proj < 0.0) scale = std::min(scale, -1.0 / proj);
  }
  return (1.0 - margin) * scale * x;
}

SolveReport minimize_over_local_set(BdObjective objective, const Eigen::Vector3d& start,
                                    const OptimizerConfig& cfg) {
  cfg.validate();
  SolveReport report;
  Eigen::Vector3d x = start;
  if (!strictly_feasible(slacks(x))) x = pull_inside(x);

  const bool smooth = objective.smooth();
  Barrier barrier{objective, 1.0};
  const double smoothing_scale = 1e-2;
  bool converged = false;

  while (true) {
    if (!smooth) objective.set_smoothing(std::max(kMinSmoothing, smoothing_scale / barrier.t));

    for (;;) {
      const auto s = slacks(x);
      const double fx = objective.value(x);
      Eigen::Vector3d g = barrier.t * objective.gradient(x);
      Eigen::Matrix3d h = barrier.t * objective.hessian(x);
      for (int c = 0; c < kConstraints; ++c) {
        const Eigen::Vector3d gs = surface_slack_gradient(c, x);
        g -= gs / s[c];
        h += gs * gs.transpose() / (s[c] * s[c]) - surface_slack_hessian(c) / s[c];
      }
      const Eigen::Vector3d dx = h.ldlt().solve(-g);
      const double decrement = -g.dot(dx);
      if (!std::isfinite(decrement) || decrement <= 2.0 * kCenteringTol) break;

      double step = 1.0;
      double diff = barrier.difference(fx, s, x + dx);
      while (!(diff <= -0.25 * step * decrement) && step > 1e-16) {
        step *= 0.5;
        diff = barrier.difference(fx, s, x + step * dx);
      }
      if (step <= 1e-16) break;  // round-off floor of the centering problem
      x += step * dx;
      if (++report.iterations >= cfg.max_iters) break;
      if (step * dx.norm() <= cfg.param_tol * (1.0 + x.norm())) break;
    }
    if (report.iterations >= cfg.max_iters) break;
    if (kConstraints / barrier.t <= cfg.value_tol) {
      converged = true;
      break;
    }
    barrier.t *= cfg.penalty_growth;
  }

  // Barrier multiplier estimates lambda_c = 1 / (t s_c) seed the polish.
  const auto s = slacks(x);
  Eigen::VectorXd lambda(kConstraints);
  for (int c = 0; c < kConstraints; ++c) lambda(c) = 1.0 / (barrier.t * s[c]);
  report.point = x;

  if (smooth && converged) {
    std::vector<int> candidates;
    Eigen::VectorXd lambda0(kConstraints);
    for (int c = 0; c < kConstraints; ++c) {
      if (s[c] <= kPolishCandidate) {
        lambda0(Eigen::Index(candidates.size())) = lambda(c);
        candidates.push_back(c);
      }
    }
    if (!candidates.empty() && candidates.size() <= 3) {
      const Polish p = kkt_polish(objective, x, candidates, lambda0.head(Eigen::Index(candidates.size())));
      bool accept = p.ok && (p.lambda.array() >= -1e-9).all();
      if (accept) {
        const auto sp = slacks(p.point);
        for (int c = 0; c < kConstraints; ++c) {
          const bool is_active = std::find(candidates.begin(), candidates.end(), c) != candidates.end();
          if (is_active ? sp[c] < -1e-14 : sp[c] <= 0.0) accept = false;
        }
        const double fp = objective.value(p.point);
        accept = accept && std::isfinite(fp) && fp <= objective.value(x) + 1e-13;
      }
      if (accept) {
        report.point = p.point;
        report.polished = true;
      }
    }
  }

  objective.set_smoothing(0.0);
  report.value = objective.value(report.point);
  report.residual = kkt_residual(objective, report.point);
  report.converged = converged;
  for (int c = 0; c < kConstraints; ++c) {
    if (surface_slack(c, report.point) <= kActiveTolerance) report.active.push_back(c);
  }
  return report;
}

}  // namespace nlgeo
