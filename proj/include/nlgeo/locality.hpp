#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nlgeo/qstate.hpp"

namespace nlgeo {

/// Slack on the closed local-set criteria: boundary states count as local.
inline constexpr double kLocalityTolerance = 1e-12;

struct ChshVerdict {
  Eigen::Vector3d singulars;  // descending
  double criterion_value = 0.0;
  bool is_local = true;
};

/// Horodecki criterion on the correlation block: local iff d1^2 + d2^2 <= 1.
ChshVerdict chsh_verdict(const PauliRep& rep);

/// q_k = 1 / (2 d^3 sin^2(pi (k + 1/4) / d)). Throws OutOfRange for d < 2.
double cglmp_qk(int d, int k);

struct CglmpThreshold {
  int d = 2;
  double i_d_qm = 0.0;          // maximal quantum value of the CGLMP expression
  double omega_threshold = 0.0;  // isotropic states violate CGLMP iff omega > 2 / I_d
};

CglmpThreshold cglmp_threshold(int d);

bool in_tetrahedron(const Eigen::Vector3d& a, double tol = kProbabilityTolerance);
/// max over i != j of a_i^2 + a_j^2.
double max_pair_sum(const Eigen::Vector3d& a);
/// Throws NonPhysical outside the state tetrahedron.
bool bd_is_chsh_local(const Eigen::Vector3d& a);

// The closed local Bell-diagonal region is the tetrahedron intersected with
// three cylinders a_i^2 + a_j^2 <= 1. Its boundary is stitched together from
// the seven surfaces below; ids are stable and ordered:
//   0: (1,2) cylinder, 1: (1,3) cylinder, 2: (2,3) cylinder,
//   3..6: tetrahedron facets e_1 = 0 .. e_4 = 0.
inline constexpr int kSurfaceCount = 7;

enum class SurfaceKind { Quadratic, Facet };

struct BoundarySurface {
  int id = 0;
  SurfaceKind kind = SurfaceKind::Quadratic;
  std::string name;
  /// Cylinder axes (0-based) for quadratic surfaces; {k, k} for facet e_{k+1}.
  std::array<int, 2> indices{};
  /// Nonnegative exactly on the local side; zero on the surface.
  std::function<double(const Eigen::Vector3d&)> slack;
  /// Where the surface is the binding constraint (dominant pair / on-facet).
  std::function<bool(const Eigen::Vector3d&)> valid;
  /// Maps (u, v) onto the surface: angle and free coordinate for cylinders,
  /// barycentric weights of the facet's three corners otherwise.
  std::function<Eigen::Vector3d(double, double)> parametrize;
};

std::vector<BoundarySurface> bd_local_boundary_surfaces();

/// Constraint slack of surface `id` and its derivatives (used by the solver).
double surface_slack(int id, const Eigen::Vector3d& a);
Eigen::Vector3d surface_slack_gradient(int id, const Eigen::Vector3d& a);
Eigen::Matrix3d surface_slack_hessian(int id);

}  // namespace nlgeo
