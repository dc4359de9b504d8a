#pragma once

// Random generators and independent reference computations for the test
// suites. Nothing here calls into the library's numerics: Bell-basis weights
// come from explicit Bell vectors, distances between commuting states from
// their eigenvalue formulas, the HS projection from Dykstra's alternating
// projections, and other minima from a derivative-free pattern search.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "nlgeo/qstate.hpp"

namespace oracle {

using Rng = std::mt19937_64;
using cd = std::complex<double>;

inline Eigen::MatrixXcd ginibre(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

/// Full-rank state on C^d (x) C^d from the Ginibre ensemble.
inline nlgeo::DensityMatrix random_density(Rng& rng, int d = 2) {
  const Eigen::MatrixXcd g = ginibre(rng, d * d);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return nlgeo::DensityMatrix(d, rho);
}

inline Eigen::MatrixXcd haar_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre(rng, n));
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

inline Eigen::Matrix2cd sigma(int i) {
  Eigen::Matrix2cd s;
  switch (i) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cd(0, -1), cd(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

/// Bell vectors in the order of the tetrahedron corners:
/// Psi+ (1,1,-1), Phi+ (1,-1,1), Phi- (-1,1,1), Psi- (-1,-1,-1).
inline std::array<Eigen::Vector4cd, 4> bell_vectors() {
  const double h = 1.0 / std::numbers::sqrt2;
  std::array<Eigen::Vector4cd, 4> b;
  b[0] << 0, h, h, 0;
  b[1] << h, 0, 0, h;
  b[2] << h, 0, 0, -h;
  b[3] << 0, h, -h, 0;
  return b;
}

inline Eigen::Vector4d bell_weights(const Eigen::MatrixXcd& rho) {
  const auto b = bell_vectors();
  Eigen::Vector4d e;
  for (int k = 0; k < 4; ++k) e(k) = (b[k].adjoint() * rho * b[k])(0, 0).real();
  return e;
}

/// a_i = Tr[rho s_i (x) s_i].
inline Eigen::Vector3d correlators(const Eigen::MatrixXcd& rho) {
  Eigen::Vector3d a;
  for (int i = 1; i <= 3; ++i) a(i - 1) = (rho * kron(sigma(i), sigma(i))).trace().real();
  return a;
}

/// sum_k e_k |B_k><B_k|.
inline Eigen::Matrix4cd bell_mixture(const Eigen::Vector4d& e) {
  const auto b = bell_vectors();
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) m += e(k) * b[k] * b[k].adjoint();
  return m;
}

// ---- random points of the tetrahedron ------------------------------------

inline Eigen::Vector4d random_simplex(Rng& rng) {
  std::exponential_distribution<double> ex(1.0);
  Eigen::Vector4d e(ex(rng), ex(rng), ex(rng), ex(rng));
  return e / e.sum();
}

/// a = (e1 + e2 - e3 - e4, e1 - e2 + e3 - e4, -e1 + e2 + e3 - e4): each
/// correlator is the expectation of s_i (x) s_i on the Bell mixture.
inline Eigen::Vector3d corr_from_weights(const Eigen::Vector4d& e) {
  return Eigen::Vector3d(e(0) + e(1) - e(2) - e(3), e(0) - e(1) + e(2) - e(3), -e(0) + e(1) + e(2) - e(3));
}

inline Eigen::Vector4d weights_from_corr(const Eigen::Vector3d& a) {
  return 0.25 * Eigen::Vector4d(1 + a(0) + a(1) - a(2), 1 + a(0) - a(1) + a(2), 1 - a(0) + a(1) + a(2),
                                1 - a(0) - a(1) - a(2));
}

inline double max_pair(const Eigen::Vector3d& a) {
  const Eigen::Vector3d s = a.cwiseAbs2();
  return std::max({s(0) + s(1), s(0) + s(2), s(1) + s(2)});
}

inline Eigen::Vector3d random_tetra(Rng& rng) { return corr_from_weights(random_simplex(rng)); }

inline Eigen::Vector3d random_local_bd(Rng& rng) {
  for (;;) {
    const Eigen::Vector3d a = random_tetra(rng);
    if (max_pair(a) <= 1.0) return a;
  }
}

/// Nonlocal by at least `margin` in the pair sum.
inline Eigen::Vector3d random_nonlocal_bd(Rng& rng, double margin = 1e-3) {
  for (;;) {
    const Eigen::Vector3d a = random_tetra(rng);
    if (max_pair(a) > 1.0 + margin) return a;
  }
}

// ---- commuting-state distances --------------------------------------------

inline double hs(const Eigen::Vector4d& p, const Eigen::Vector4d& q) { return (p - q).norm(); }
inline double trace(const Eigen::Vector4d& p, const Eigen::Vector4d& q) { return 0.5 * (p - q).cwiseAbs().sum(); }
inline double hellinger_sq(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return (p.cwiseMax(0).cwiseSqrt() - q.cwiseMax(0).cwiseSqrt()).squaredNorm();
}
inline double fidelity(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  const double s = p.cwiseMax(0).cwiseProduct(q.cwiseMax(0)).cwiseSqrt().sum();
  return s * s;
}
inline double bures_sq(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return 2.0 * (1.0 - std::sqrt(fidelity(p, q)));
}
inline double rel_entropy(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (p(i) <= 0.0) continue;
    if (q(i) <= 0.0) return std::numeric_limits<double>::infinity();
    s += p(i) * std::log2(p(i) / q(i));
  }
  return s;
}

// ---- Werner closed forms written out from the Bell weights ----------------

inline Eigen::Vector4d werner_weights(double w) {
  return Eigen::Vector4d((1 - w) / 4, (1 - w) / 4, (1 - w) / 4, (1 + 3 * w) / 4);
}

// ---- local set ------------------------------------------------------------

inline bool locally_feasible(const Eigen::Vector3d& a, double tol = 1e-12) {
  return (weights_from_corr(a).array() >= -tol).all() && max_pair(a) <= 1.0 + tol;
}

/// Euclidean projection onto the local Bell-diagonal set by Dykstra's method
/// over the four facet half-spaces and the three cylinders.
inline Eigen::Vector3d dykstra_projection(const Eigen::Vector3d& a, int sweeps = 20000) {
  const std::array<Eigen::Vector3d, 4> normals = {Eigen::Vector3d(1, 1, -1), Eigen::Vector3d(1, -1, 1),
                                                  Eigen::Vector3d(-1, 1, 1), Eigen::Vector3d(-1, -1, -1)};
  auto project = [&](int set, const Eigen::Vector3d& x) -> Eigen::Vector3d {
    if (set < 4) {  // 1 + n.x >= 0
      const Eigen::Vector3d& n = normals[set];
      const double v = 1.0 + n.dot(x);
      return v >= 0.0 ? x : Eigen::Vector3d(x - v * n / n.squaredNorm());
    }
    static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    const int i = pairs[set - 4][0], j = pairs[set - 4][1];
    const double r = std::hypot(x(i), x(j));
    Eigen::Vector3d y = x;
    if (r > 1.0) {
      y(i) /= r;
      y(j) /= r;
    }
    return y;
  };
  Eigen::Vector3d x = a;
  std::array<Eigen::Vector3d, 7> inc;
  for (auto& v : inc) v.setZero();
  for (int s = 0; s < sweeps; ++s) {
    const Eigen::Vector3d before = x;
    for (int set = 0; set < 7; ++set) {
      const Eigen::Vector3d y = project(set, x + inc[set]);
      inc[set] = x + inc[set] - y;
      x = y;
    }
    if ((x - before).norm() < 1e-16) break;
  }
  return x;
}

/// Pattern search with a rich direction set (coordinate axes, cube diagonals
/// and random unit vectors) on f restricted to the local set.
inline Eigen::Vector3d pattern_search(const std::function<double(const Eigen::Vector3d&)>& f,
                                      Eigen::Vector3d x, Rng& rng, double step = 0.05, double min_step = 1e-11) {
  std::vector<Eigen::Vector3d> dirs;
  for (int i = 0; i < 3; ++i) {
    dirs.push_back(Eigen::Vector3d::Unit(i));
    dirs.push_back(-Eigen::Vector3d::Unit(i));
  }
  for (int m = 0; m < 8; ++m) {
    dirs.push_back(Eigen::Vector3d(m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1).normalized());
  }
  std::normal_distribution<double> g;
  auto value = [&](const Eigen::Vector3d& y) {
    return locally_feasible(y, 0.0) ? f(y) : std::numeric_limits<double>::infinity();
  };
  double fx = value(x);
  while (step > min_step) {
    bool moved = false;
    std::vector<Eigen::Vector3d> trial = dirs;
    for (int m = 0; m < 24; ++m) trial.push_back(Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
    for (const auto& d : trial) {
      const Eigen::Vector3d y = x + step * d;
      const double fy = value(y);
      if (fy < fx) {
        x = y;
        fx = fy;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

/// Projected gradient descent with central-difference gradients and the
/// Dykstra projection.  The divergences are convex in the second argument and
/// the local set is convex, so this converges to the global minimum.
inline Eigen::Vector3d projected_descent(const std::function<double(const Eigen::Vector3d&)>& f,
                                         Eigen::Vector3d x, int iterations = 400) {
  auto value = [&](const Eigen::Vector3d& y) {
    const double v = f(y);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  double fx = value(x);
  double eta = 0.5;
  for (int it = 0; it < iterations; ++it) {
    Eigen::Vector3d g;
    const double h = 1e-7;
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(j);
      const double up = value(x + e), down = value(x - e);
      // One-sided near a face where the divergence blows up.
      g(j) = std::isfinite(up) && std::isfinite(down) ? (up - down) / (2 * h)
             : std::isfinite(up)                      ? (up - fx) / h
                                                      : (fx - down) / h;
    }
    if (!g.allFinite()) break;
    bool moved = false;
    for (double step = std::min(1.0, 4 * eta); step > 1e-14; step *= 0.5) {
      const Eigen::Vector3d y = dykstra_projection(x - step * g, 2000);
      const double fy = value(y);
      if (fy < fx) {
        moved = (x - y).norm() > 1e-15;
        x = y;
        fx = fy;
        eta = step;
        break;
      }
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace oracle
