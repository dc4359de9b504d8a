#include "nlgeo/objective.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nlgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const Eigen::Matrix<double, 4, 3>& probs_jacobian() {
  static const Eigen::Matrix<double, 4, 3> jac = [] {
    Eigen::Matrix<double, 4, 3> j;
    for (int k = 0; k < 4; ++k) j.row(k) = 0.25 * bell_corner(k).transpose();
    return j;
  }();
  return jac;
}

BdObjective::BdObjective(DistanceKind kind, const Eigen::Vector3d& target)
    : kind_(kind), target_(target), target_e_(bd_corr_to_probs(target).cwiseMax(0.0)) {}

double BdObjective::value(const Eigen::Vector3d& a) const {
  if (kind_ == DistanceKind::HilbertSchmidt) return 0.25 * (a - target_).squaredNorm();

  const Eigen::Vector4d e = bd_corr_to_probs(a);
  switch (kind_) {
    case DistanceKind::Hellinger:
    case DistanceKind::Bures: {
      double overlap = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (e(i) < 0.0) return kInf;
        overlap += std::sqrt(target_e_(i) * e(i));
      }
      if (kind_ == DistanceKind::Hellinger) return 2.0 - 2.0 * overlap;
      const double fid = overlap * overlap;
      return 2.0 * (1.0 - std::sqrt(fid));
    }
    case DistanceKind::Trace: {
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double diff = e(i) - target_e_(i);
        sum += delta_ > 0.0 ? std::hypot(diff, delta_) : std::abs(diff);
      }
      return 0.5 * sum;
    }
    case DistanceKind::RelativeEntropy: {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (target_e_(i) <= 0.0) continue;
        if (e(i) <= 0.0) return kInf;
        s += target_e_(i) * std::log2(target_e_(i) / e(i));
      }
      return s;
    }
    case DistanceKind::HilbertSchmidt: break;
  }
  return kInf;
}

Eigen::Vector3d BdObjective::gradient(const Eigen::Vector3d& a) const {
  if (kind_ == DistanceKind::HilbertSchmidt) return 0.5 * (a - target_);

  const Eigen::Vector4d e = bd_corr_to_probs(a);
  Eigen::Vector4d de = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    const double p = target_e_(i);
    switch (kind_) {
      case DistanceKind::Hellinger:
      case DistanceKind::Bures:
        if (p > 0.0) de(i) = -std::sqrt(p / e(i));
        break;
      case DistanceKind::Trace: {
        const double diff = e(i) - p;
        if (delta_ > 0.0) {
          de(i) = 0.5 * diff / std::hypot(diff, delta_);
        } else {
          de(i) = diff > 0.0 ? 0.5 : (diff < 0.0 ? -0.5 : 0.0);
        }
        break;
      }
      case DistanceKind::RelativeEntropy:
        if (p > 0.0) de(i) = -p / (e(i) * std::numbers::ln2);
        break;
      case DistanceKind::HilbertSchmidt: break;
    }
  }
  return probs_jacobian().transpose() * de;
}

Eigen::Matrix3d BdObjective::hessian(const Eigen::Vector3d& a) const {
  if (kind_ == DistanceKind::HilbertSchmidt) return 0.5 * Eigen::Matrix3d::Identity();

  const Eigen::Vector4d e = bd_corr_to_probs(a);
  Eigen::Vector4d curv = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    const double p = target_e_(i);
    switch (kind_) {
      case DistanceKind::Hellinger:
      case DistanceKind::Bures:
        if (p > 0.0) curv(i) = 0.5 * std::sqrt(p) * std::pow(e(i), -1.5);
        break;
      case DistanceKind::Trace:
        if (delta_ > 0.0) {
          const double r = std::hypot(e(i) - p, delta_);
          curv(i) = 0.5 * delta_ * delta_ / (r * r * r);
        }
        break;
      case DistanceKind::RelativeEntropy:
        if (p > 0.0) curv(i) = p / (e(i) * e(i) * std::numbers::ln2);
        break;
      case DistanceKind::HilbertSchmidt: break;
    }
  }
  const auto& jac = probs_jacobian();
  return jac.transpose() * curv.asDiagonal() * jac;
}

double BdObjective::measure(const Eigen::Vector3d& a) const {
  if (kind_ == DistanceKind::HilbertSchmidt) return 0.5 * (a - target_).norm();
  if (kind_ == DistanceKind::Trace) {
    return 0.5 * (bd_corr_to_probs(a) - target_e_).cwiseAbs().sum();
  }
  return value(a);
}

}  // namespace nlgeo
