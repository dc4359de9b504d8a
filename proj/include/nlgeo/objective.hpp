#pragma once

#include "nlgeo/metrics.hpp"

namespace nlgeo {

/// Distance from a fixed Bell-diagonal state to a candidate Bell-diagonal
/// state, as a function of the candidate's correlators a'.
///
/// Both states are diagonal in the Bell basis, so every functional reduces to
/// its eigenvalue form in e' = e(a'), which is affine in a'. Hilbert-Schmidt is
/// the exception: it is evaluated as 1/4 |a - a'|^2 directly in correlator
/// coordinates, and `measure` takes the square root.
///
/// `value`, `gradient` and `hessian` describe the function the solver
/// minimizes. For Trace that function is the smoothed
///   1/2 sum_i sqrt((e_i - e'_i)^2 + delta^2)
/// with delta = `smoothing()`; at delta = 0 the gradient is the exact one
/// wherever no e_i - e'_i vanishes.
class BdObjective {
 public:
  BdObjective(DistanceKind kind, const Eigen::Vector3d& target);

  DistanceKind kind() const noexcept { return kind_; }
  const Eigen::Vector3d& target() const noexcept { return target_; }
  const Eigen::Vector4d& target_probabilities() const noexcept { return target_e_; }

  void set_smoothing(double delta) noexcept { delta_ = delta; }
  double smoothing() const noexcept { return delta_; }
  bool smooth() const noexcept { return kind_ != DistanceKind::Trace; }

  /// +infinity outside the domain (e'_i <= 0 where the functional needs e'_i > 0).
  double value(const Eigen::Vector3d& a) const;
  Eigen::Vector3d gradient(const Eigen::Vector3d& a) const;
  Eigen::Matrix3d hessian(const Eigen::Vector3d& a) const;

  /// Nonlocality-measure value at the candidate (unsmoothed).
  double measure(const Eigen::Vector3d& a) const;

 private:
  DistanceKind kind_;
  Eigen::Vector3d target_;
  Eigen::Vector4d target_e_;
  double delta_ = 0.0;
};

/// d e'_i / d a'_j: constant, equal to the corner vectors over four.
const Eigen::Matrix<double, 4, 3>& probs_jacobian();

}  // namespace nlgeo
