#include "nlgeo/locality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlgeo/error.hpp"

namespace nlgeo {

namespace {

constexpr std::array<std::array<int, 2>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};

int third_axis(int i, int j) { return 3 - i - j; }

}  // namespace

ChshVerdict chsh_verdict(const PauliRep& rep) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(rep.corr());
  ChshVerdict v;
  v.singulars = svd.singularValues();  // already descending
  v.criterion_value = v.singulars(0) * v.singulars(0) + v.singulars(1) * v.singulars(1);
  v.is_local = v.criterion_value <= 1.0 + kLocalityTolerance;
  return v;
}

double cglmp_qk(int d, int k) {
  if (d < 2) throw Error(ErrorCode::OutOfRange, "CGLMP dimension must be >= 2");
  const double s = std::sin(std::numbers::pi * (k + 0.25) / d);
  return 1.0 / (2.0 * d * d * d * s * s);
}

CglmpThreshold cglmp_threshold(int d) {
  if (d < 2) throw Error(ErrorCode::OutOfRange, "CGLMP dimension must be >= 2");
  double sum = 0.0;
  for (int k = 0; k <= d / 2 - 1; ++k) {
    const double weight = (k == 0) ? 1.0 : 1.0 - 2.0 * k / (d - 1);
    sum += weight * (cglmp_qk(d, k) - cglmp_qk(d, -(k + 1)));
  }
  CglmpThreshold t;
  t.d = d;
  t.i_d_qm = 4.0 * d * sum;
  t.omega_threshold = 2.0 / t.i_d_qm;
  return t;
}

bool in_tetrahedron(const Eigen::Vector3d& a, double tol) {
  return bd_corr_to_probs(a).minCoeff() >= -tol;
}

double max_pair_sum(const Eigen::Vector3d& a) {
  const Eigen::Vector3d sq = a.cwiseAbs2();
  return sq.sum() - sq.minCoeff();
}

bool bd_is_chsh_local(const Eigen::Vector3d& a) {
  if (!in_tetrahedron(a)) {
    throw Error(ErrorCode::NonPhysical, "correlators outside the state tetrahedron");
  }
  return max_pair_sum(a) <= 1.0 + kLocalityTolerance;
}

double surface_slack(int id, const Eigen::Vector3d& a) {
  if (id < 3) {
    const auto [i, j] = kPairs[id];
    return 1.0 - a(i) * a(i) - a(j) * a(j);
  }
  return 0.25 * (1.0 + bell_corner(id - 3).dot(a));
}

Eigen::Vector3d surface_slack_gradient(int id, const Eigen::Vector3d& a) {
  if (id < 3) {
    const auto [i, j] = kPairs[id];
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    g(i) = -2.0 * a(i);
    g(j) = -2.0 * a(j);
    return g;
  }
  return 0.25 * bell_corner(id - 3);
}

Eigen::Matrix3d surface_slack_hessian(int id) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  if (id < 3) {
    const auto [i, j] = kPairs[id];
    h(i, i) = -2.0;
    h(j, j) = -2.0;
  }
  return h;
}

std::vector<BoundarySurface> bd_local_boundary_surfaces() {
  std::vector<BoundarySurface> out;
  out.reserve(kSurfaceCount);
  for (int id = 0; id < 3; ++id) {
    const auto [i, j] = kPairs[id];
    const int k = third_axis(i, j);
    BoundarySurface s;
    s.id = id;
    s.kind = SurfaceKind::Quadratic;
    s.name = "a" + std::to_string(i + 1) + "^2+a" + std::to_string(j + 1) + "^2=1";
    s.indices = {i, j};
    s.slack = [id](const Eigen::Vector3d& a) { return surface_slack(id, a); };
    s.valid = [i, j, k](const Eigen::Vector3d& a) {
      return std::abs(a(i)) >= std::abs(a(k)) && std::abs(a(j)) >= std::abs(a(k));
    };
    s.parametrize = [i, j, k](double angle, double free) {
      Eigen::Vector3d a;
      a(i) = std::cos(angle);
      a(j) = std::sin(angle);
      a(k) = free;
      return a;
    };
    out.push_back(std::move(s));
  }
  for (int facet = 0; facet < 4; ++facet) {
    BoundarySurface s;
    s.id = 3 + facet;
    s.kind = SurfaceKind::Facet;
    s.name = "e" + std::to_string(facet + 1) + "=0";
    s.indices = {facet, facet};
    s.slack = [id = s.id](const Eigen::Vector3d& a) { return surface_slack(id, a); };
    s.valid = [facet](const Eigen::Vector3d& a) {
      return std::abs(bd_corr_to_probs(a)(facet)) <= kProbabilityTolerance && in_tetrahedron(a);
    };
    std::array<int, 3> others{};
    for (int c = 0, n = 0; c < 4; ++c)
      if (c != facet) others[n++] = c;
    s.parametrize = [others](double u, double v) {
      return Eigen::Vector3d(u * bell_corner(others[0]) + v * bell_corner(others[1]) +
                             (1.0 - u - v) * bell_corner(others[2]));
    };
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nlgeo
