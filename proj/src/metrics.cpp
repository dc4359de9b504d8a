#include "nlgeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlgeo/error.hpp"

namespace nlgeo {

namespace {

void require_same_shape(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.dim() != r2.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "states have local dimensions " + std::to_string(r1.dim()) + " and " + std::to_string(r2.dim()));
  }
}

void require_states(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_shape(r1, r2);
  r1.require_positive();
  r2.require_positive();
}

}  // namespace

std::string_view short_name(DistanceKind kind) noexcept {
  switch (kind) {
    case DistanceKind::HilbertSchmidt: return "hs";
    case DistanceKind::Hellinger: return "he";
    case DistanceKind::Bures: return "bu";
    case DistanceKind::Trace: return "tr";
    case DistanceKind::RelativeEntropy: return "re";
  }
  return "?";
}

std::string_view long_name(DistanceKind kind) noexcept {
  switch (kind) {
    case DistanceKind::HilbertSchmidt: return "hilbert-schmidt";
    case DistanceKind::Hellinger: return "hellinger";
    case DistanceKind::Bures: return "bures";
    case DistanceKind::Trace: return "trace";
    case DistanceKind::RelativeEntropy: return "relative-entropy";
  }
  return "?";
}

std::optional<DistanceKind> parse_distance_kind(std::string_view tag) noexcept {
  for (DistanceKind kind : kAllDistanceKinds) {
    if (tag == short_name(kind) || tag == long_name(kind)) return kind;
  }
  return std::nullopt;
}

double dist_hs(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_shape(r1, r2);
  // Frobenius norm equals sqrt(Tr[(r1 - r2)^2]) for Hermitian differences.
  return (r1.entries() - r2.entries()).norm();
}

double dist_hellinger_sq(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_states(r1, r2);
  return (matrix_sqrt_psd(r1.entries()) - matrix_sqrt_psd(r2.entries())).squaredNorm();
}

double dist_hellinger(const DensityMatrix& r1, const DensityMatrix& r2) {
  return std::sqrt(dist_hellinger_sq(r1, r2));
}

double fidelity(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_states(r1, r2);
  const Eigen::MatrixXcd s = matrix_sqrt_psd(r1.entries());
  Eigen::MatrixXcd inner = s * r2.entries() * s;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(inner, Eigen::EigenvaluesOnly);
  const double floor = spectral_floor(solver.eigenvalues());
  double root_sum = 0.0;
  for (double lambda : solver.eigenvalues()) root_sum += lambda <= floor ? 0.0 : std::sqrt(lambda);
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double dist_bures(const DensityMatrix& r1, const DensityMatrix& r2) {
  const double f = fidelity(r1, r2);
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(f))));
}

double dist_trace(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_shape(r1, r2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r1.entries() - r2.entries(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double rel_entropy(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_states(r1, r2);
  const EigenDecomposition e1 = eig_hermitian(r1.entries());
  const EigenDecomposition e2 = eig_hermitian(r2.entries());

  double entropy_term = 0.0;
  for (double lambda : e1.values) {
    if (lambda > kSupportThreshold) entropy_term += lambda * std::log2(lambda);
  }
  double cross_term = 0.0;
  for (Eigen::Index j = 0; j < e2.values.size(); ++j) {
    const Eigen::VectorXcd w = e2.vectors.col(j);
    const double weight = w.dot(r1.entries() * w).real();
    const double mu = e2.values(j);
    if (mu < kSupportThreshold) {
      if (weight > kSupportThreshold) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross_term += weight * std::log2(mu);
  }
  return std::max(0.0, entropy_term - cross_term);
}

double measure_functional(DistanceKind kind, const DensityMatrix& r1, const DensityMatrix& r2) {
  switch (kind) {
    case DistanceKind::HilbertSchmidt: return dist_hs(r1, r2);
    case DistanceKind::Hellinger: return dist_hellinger_sq(r1, r2);
    case DistanceKind::Bures: {
      const double b = dist_bures(r1, r2);
      return b * b;
    }
    case DistanceKind::Trace: return dist_trace(r1, r2);
    case DistanceKind::RelativeEntropy: return rel_entropy(r1, r2);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace nlgeo
