#pragma once

#include <cstdint>
#include <vector>

#include "nlgeo/objective.hpp"

namespace nlgeo {

struct OptimizerConfig {
  double param_tol = 1e-9;
  double value_tol = 1e-10;
  int max_iters = 500;
  int seeds = 8;
  double penalty_growth = 10.0;
  std::uint64_t rng_seed = 0x6e6c67656fULL;

  /// Throws ArgumentError unless every field is positive (growth > 1).
  void validate() const;
};

/// A surface counts as active at the optimum when its slack is at most this.
inline constexpr double kActiveTolerance = 1e-8;

struct SolveReport {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  double value = 0.0;  // unsmoothed objective at `point`
  int iterations = 0;
  bool converged = false;
  bool polished = false;
  /// min over lambda >= 0 (near-active surfaces) of |grad f - sum_c lambda_c grad s_c|_inf;
  /// Trace takes any subgradient on weights that match the target.
  double residual = 0.0;
  std::vector<int> active;  // ascending surface ids
};

/// Largest radial shrink of x that lies in the closed local Bell-diagonal set,
/// pulled a further fraction `margin` towards the maximally mixed point.
Eigen::Vector3d pull_inside(const Eigen::Vector3d& x, double margin = 1e-3);

/// Minimizes `objective` over the local Bell-diagonal set (tetrahedron and the
/// three CHSH cylinders).
///
/// Log-barrier continuation: the centering problems t f - sum log s_c are
/// solved by damped Newton for t = 1, g, g^2, ... until 7 / t <= value_tol.
/// Trace is smoothed with delta proportional to 1 / t. Iterates stay strictly
/// feasible. For smooth objectives the barrier point is then polished by
/// Newton's method on the KKT system of the near-active surfaces; the polished
/// point is kept only if it is feasible with nonnegative multipliers.
///
/// `start` is pulled inside when it is not strictly feasible.
SolveReport minimize_over_local_set(BdObjective objective, const Eigen::Vector3d& start,
                                    const OptimizerConfig& cfg);

}  // namespace nlgeo
