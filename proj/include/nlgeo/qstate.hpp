#pragma once

// State representations for bipartite systems: density matrices, the two-qubit
// Pauli coefficient matrix, Bell-diagonal states, and the Werner / isotropic
// families, together with the symmetrization maps used to reduce a state to
// one of those families.

#include <complex>

#include <Eigen/Dense>

namespace nlgeo {

using Complex = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kProbabilityTolerance = 1e-12;

/// Hermitian unit-trace operator on C^d (x) C^d.
///
/// Construction enforces Hermiticity and unit trace. Positivity is a separate
/// check (`is_positive` / `require_positive`) so that linear maps such as
/// `pauli_to_density` stay total on their inputs; every factory that claims to
/// build a state (`make_*`) validates positivity before returning.
class DensityMatrix {
 public:
  DensityMatrix(int dim, Eigen::MatrixXcd entries);

  int dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

  double min_eigenvalue() const;
  bool is_positive(double tol = kPsdTolerance) const;
  /// Throws NotPSD when the smallest eigenvalue is below -kPsdTolerance.
  void require_positive() const;

 private:
  int dim_;
  Eigen::MatrixXcd entries_;
};

/// Real 4x4 coefficient matrix alpha of rho = 1/4 sum_ij alpha_ij s_i (x) s_j.
struct PauliRep {
  Eigen::Matrix4d alpha = Eigen::Matrix4d::Identity();

  static PauliRep from_blocks(const Eigen::RowVector3d& row, const Eigen::Vector3d& col,
                              const Eigen::Matrix3d& corr);

  /// alpha_{0i}: Bloch vector of the second qubit.
  Eigen::RowVector3d row() const { return alpha.block<1, 3>(0, 1); }
  /// alpha_{i0}: Bloch vector of the first qubit.
  Eigen::Vector3d col() const { return alpha.block<3, 1>(1, 0); }
  Eigen::Matrix3d corr() const { return alpha.block<3, 3>(1, 1); }
};

/// Two-qubit Bell-diagonal state. Correlators a and Bell-basis weights e are
/// kept together; they are related by the +-1 matrices of `bd_probs_to_corr`
/// and `bd_corr_to_probs`.
class BellDiagonal {
 public:
  /// Throws NonPhysical if some weight is below -kProbabilityTolerance.
  static BellDiagonal from_correlators(const Eigen::Vector3d& a);
  /// Throws InvalidProbability on a non-probability vector.
  static BellDiagonal from_probabilities(const Eigen::Vector4d& e);

  const Eigen::Vector3d& correlators() const noexcept { return a_; }
  const Eigen::Vector4d& probabilities() const noexcept { return e_; }

 private:
  BellDiagonal(Eigen::Vector3d a, Eigen::Vector4d e) : a_(std::move(a)), e_(std::move(e)) {}

  Eigen::Vector3d a_;
  Eigen::Vector4d e_;
};

struct WernerParam {
  double w = 0.0;
};

struct IsotropicParam {
  int d = 2;
  double omega = 0.0;
};

struct EigenDecomposition {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // columns match `values`
};

/// Pauli matrix s_i, i in {0,1,2,3}, with s_0 the identity.
Eigen::Matrix2cd pauli(int i);

/// (|00> + |11> + ... + |d-1 d-1>) / sqrt(d).
Eigen::VectorXcd maximally_entangled(int d);

DensityMatrix pauli_to_density(const PauliRep& rep);
/// Throws DimensionMismatch unless rho.dim() == 2.
PauliRep density_to_pauli(const DensityMatrix& rho);

Eigen::Vector3d bd_probs_to_corr(const Eigen::Vector4d& e);
Eigen::Vector4d bd_corr_to_probs(const Eigen::Vector3d& a);

/// Correlator vector of the tetrahedron corner carrying all weight on e_{k+1}.
Eigen::Vector3d bell_corner(int k);

/// Throws NotHermitian when m deviates from m^dagger by more than 1e-10.
EigenDecomposition eig_hermitian(const Eigen::MatrixXcd& m);

/// Eigenvalues at or below this are numerically zero: n * eps * max |lambda|.
double spectral_floor(const Eigen::VectorXd& eigenvalues);

/// Eigenvalues in [-kPsdTolerance, spectral_floor] map to zero; lower ones raise NotPSD.
Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m);

PauliRep sign_flip(const PauliRep& rep);
PauliRep reduce_to_maximally_mixed_marginals(const PauliRep& rep);

/// Average over the simultaneous local pi-rotations about x and y.
BellDiagonal bd_project(const DensityMatrix& rho);

/// Closed-form U (x) U* twirl: omega = (d^2 F - 1) / (d^2 - 1), F = <phi+|rho|phi+>.
IsotropicParam twirl_isotropic(const DensityMatrix& rho);

/// Werner state anchored at tetrahedron corner `corner` (default: singlet, a = -w(1,1,1)).
/// Throws OutOfRange unless -1/3 < w <= 1.
DensityMatrix make_werner(double w, int corner = 3);
/// Throws OutOfRange unless d >= 2 and -1/(d^2-1) <= omega <= 1.
DensityMatrix make_isotropic(int d, double omega);
DensityMatrix make_bell_diagonal(const BellDiagonal& bd);

}  // namespace nlgeo
