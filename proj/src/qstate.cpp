#include "nlgeo/qstate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nlgeo/error.hpp"

namespace nlgeo {

namespace {

// Rows 2-4 of the e -> (1, a) map; row 1 is all ones (normalization).
const Eigen::Matrix4d& probs_to_corr_matrix() {
  static const Eigen::Matrix4d m = (Eigen::Matrix4d() <<
       1,  1,  1,  1,
       1,  1, -1, -1,
       1, -1,  1, -1,
      -1,  1,  1, -1).finished();
  return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

void require_qubits(const DensityMatrix& rho, const char* op) {
  if (rho.dim() != 2) {
    std::ostringstream msg;
    msg << op << " requires a two-qubit state, got local dimension " << rho.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(int dim, Eigen::MatrixXcd entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1 || entries_.rows() != Eigen::Index(dim_) * dim_ || entries_.cols() != entries_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be d^2 x d^2");
  }
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    throw Error(ErrorCode::NotHermitian, "density matrix deviates from Hermitian by " + std::to_string(asym));
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTolerance) {
    throw Error(ErrorCode::OutOfRange, "density matrix trace differs from one");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_positive(double tol) const { return min_eigenvalue() >= -tol; }

void DensityMatrix::require_positive() const {
  const double lo = min_eigenvalue();
  if (lo < -kPsdTolerance) {
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(lo));
  }
}

PauliRep PauliRep::from_blocks(const Eigen::RowVector3d& row, const Eigen::Vector3d& col,
                               const Eigen::Matrix3d& corr) {
  PauliRep rep;
  rep.alpha.block<1, 3>(0, 1) = row;
  rep.alpha.block<3, 1>(1, 0) = col;
  rep.alpha.block<3, 3>(1, 1) = corr;
  return rep;
}

BellDiagonal BellDiagonal::from_correlators(const Eigen::Vector3d& a) {
  Eigen::Vector4d e = bd_corr_to_probs(a);
  if (e.minCoeff() < -kProbabilityTolerance) {
    std::ostringstream msg;
    msg << "correlators (" << a.transpose() << ") lie outside the state tetrahedron";
    throw Error(ErrorCode::NonPhysical, msg.str());
  }
  return BellDiagonal(a, e);
}

BellDiagonal BellDiagonal::from_probabilities(const Eigen::Vector4d& e) {
  Eigen::Vector3d a = bd_probs_to_corr(e);
  return BellDiagonal(a, e);
}

Eigen::Matrix2cd pauli(int i) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd s;
  switch (i) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -1i, 1i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::OutOfRange, "Pauli index must be 0..3");
  }
  return s;
}

Eigen::VectorXcd maximally_entangled(int d) {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(Eigen::Index(d) * d);
  const double amp = 1.0 / std::sqrt(double(d));
  for (int i = 0; i < d; ++i) phi(i * d + i) = amp;
  return phi;
}

DensityMatrix pauli_to_density(const PauliRep& rep) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (rep.alpha(i, j) != 0.0) rho += rep.alpha(i, j) * kron(pauli(i), pauli(j));
  rho /= 4.0;
  // Hermitize away the last-bit asymmetry of the complex sums.
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(2, std::move(herm));
}

PauliRep density_to_pauli(const DensityMatrix& rho) {
  require_qubits(rho, "density_to_pauli");
  PauliRep rep;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rep.alpha(i, j) = (rho.entries() * kron(pauli(i), pauli(j))).trace().real();
  rep.alpha(0, 0) = 1.0;
  return rep;
}

Eigen::Vector3d bd_probs_to_corr(const Eigen::Vector4d& e) {
  if (e.minCoeff() < -kProbabilityTolerance || std::abs(e.sum() - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "(" << e.transpose() << ") is not a probability vector";
    throw Error(ErrorCode::InvalidProbability, msg.str());
  }
  const Eigen::Vector4d full = probs_to_corr_matrix() * e;
  return full.tail<3>();
}

Eigen::Vector4d bd_corr_to_probs(const Eigen::Vector3d& a) {
  Eigen::Vector4d full;
  full << 1.0, a;
  // The +-1 matrix is orthogonal up to a factor 2, so its inverse is M^T / 4.
  return probs_to_corr_matrix().transpose() * full / 4.0;
}

Eigen::Vector3d bell_corner(int k) {
  if (k < 0 || k > 3) throw Error(ErrorCode::OutOfRange, "corner index must be 0..3");
  return probs_to_corr_matrix().col(k).tail<3>();
}

EigenDecomposition eig_hermitian(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::NotHermitian, "eig_hermitian input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  // Eigen sorts ascending; flip to descending.
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

double spectral_floor(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return double(eigenvalues.size()) * std::numeric_limits<double>::epsilon() * eigenvalues.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m) {
  EigenDecomposition eig = eig_hermitian(m);
  Eigen::VectorXd roots(eig.values.size());
  const double floor = spectral_floor(eig.values);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < -kPsdTolerance) {
      throw Error(ErrorCode::NotPSD, "matrix_sqrt_psd: eigenvalue " + std::to_string(lambda));
    }
    // Eigenvalues within solver round-off of zero would otherwise contribute O(sqrt(eps)).
    roots(i) = lambda <= floor ? 0.0 : std::sqrt(lambda);
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

PauliRep sign_flip(const PauliRep& rep) {
  PauliRep out = rep;
  out.alpha.block<1, 3>(0, 1) *= -1.0;
  out.alpha.block<3, 1>(1, 0) *= -1.0;
  return out;
}

PauliRep reduce_to_maximally_mixed_marginals(const PauliRep& rep) {
  PauliRep out;
  out.alpha = 0.5 * (rep.alpha + sign_flip(rep).alpha);
  // Exact zeros rather than x - x rounding residue.
  out.alpha.block<1, 3>(0, 1).setZero();
  out.alpha.block<3, 1>(1, 0).setZero();
  out.alpha(0, 0) = 1.0;
  return out;
}

BellDiagonal bd_project(const DensityMatrix& rho) {
  require_qubits(rho, "bd_project");
  // pi-rotations about x and y act on both qubits; the global phase of
  // exp(-i pi/2 s) cancels under conjugation, leaving s (x) s.
  const Eigen::Matrix4cd r1 = kron(pauli(1), pauli(1));
  const Eigen::Matrix4cd r2 = kron(pauli(2), pauli(2));
  const Eigen::Matrix4cd m = rho.entries();
  const Eigen::Matrix4cd half = 0.5 * (m + r1 * m * r1.adjoint());
  const Eigen::Matrix4cd avg = 0.5 * (half + r2 * half * r2.adjoint());
  Eigen::Vector3d a;
  for (int i = 1; i <= 3; ++i) a(i - 1) = (avg * kron(pauli(i), pauli(i))).trace().real();
  return BellDiagonal::from_correlators(a);
}

IsotropicParam twirl_isotropic(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Eigen::VectorXcd phi = maximally_entangled(d);
  const double fid = phi.dot(rho.entries() * phi).real();
  const double d2 = double(d) * d;
  return {d, (d2 * fid - 1.0) / (d2 - 1.0)};
}

DensityMatrix make_werner(double w, int corner) {
  if (!(w > -1.0 / 3.0 && w <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "Werner parameter must lie in (-1/3, 1], got " + std::to_string(w));
  }
  return make_bell_diagonal(BellDiagonal::from_correlators(w * bell_corner(corner)));
}

DensityMatrix make_isotropic(int d, double omega) {
  if (d < 2) throw Error(ErrorCode::OutOfRange, "isotropic dimension must be >= 2");
  const double d2 = double(d) * d;
  if (omega < -1.0 / (d2 - 1.0) - 1e-15 || omega > 1.0) {
    throw Error(ErrorCode::OutOfRange, "isotropic parameter outside [-1/(d^2-1), 1]: " + std::to_string(omega));
  }
  const Eigen::VectorXcd phi = maximally_entangled(d);
  Eigen::MatrixXcd rho = omega * (phi * phi.adjoint());
  rho.diagonal().array() += (1.0 - omega) / d2;
  DensityMatrix out(d, std::move(rho));
  out.require_positive();
  return out;
}

DensityMatrix make_bell_diagonal(const BellDiagonal& bd) {
  PauliRep rep;
  rep.alpha.block<3, 3>(1, 1) = bd.correlators().asDiagonal();
  DensityMatrix out = pauli_to_density(rep);
  out.require_positive();
  return out;
}

}  // namespace nlgeo
