#pragma once

// Distance-based nonlocality measures M(rho) = min over local states of
// D(rho, rho_loc).
//
// Conventions: Hellinger and Bures measures are squared distances (the two
// coincide on every pair handled here because the pairs commute); relative
// entropy is in bits. Werner and isotropic inputs use the fact that the
// closest local state stays in the family; Bell-diagonal inputs are minimized
// over local Bell-diagonal states.

#include <optional>
#include <variant>
#include <vector>

#include "nlgeo/error.hpp"
#include "nlgeo/locality.hpp"
#include "nlgeo/metrics.hpp"
#include "nlgeo/solver.hpp"

namespace nlgeo {

enum class Method { ClosedForm, LagrangeCase, Numeric };

std::string_view to_string(Method method) noexcept;

using ClosestLocal = std::variant<BellDiagonal, IsotropicParam, WernerParam>;

/// Printed isotropic closed form evaluated next to the definition-based value.
struct PrintedFormulaCheck {
  double printed_value = 0.0;
  bool consistent = false;
};

struct MeasureResult {
  DistanceKind kind = DistanceKind::HilbertSchmidt;
  double value = 0.0;
  ClosestLocal closest_local = WernerParam{};
  Method method = Method::ClosedForm;
  std::optional<int> surface;  // smallest active boundary surface id
  std::vector<int> active_surfaces;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
  /// max - min of the per-seed optimal values (numeric path only).
  double seed_spread = 0.0;
  std::optional<PrintedFormulaCheck> printed;
};

/// Raised by the numeric path; carries the best partial result.
class NotConvergedError : public Error {
 public:
  explicit NotConvergedError(MeasureResult partial);
  const MeasureResult& partial() const noexcept { return partial_; }

 private:
  MeasureResult partial_;
};

/// Werner local threshold 1/sqrt(2).
double werner_threshold();

/// Closed forms for the Werner family; zero with closest_local = input for
/// w <= 1/sqrt(2). Throws OutOfRange outside (-1/3, 1].
MeasureResult werner_measure(DistanceKind kind, double w);
/// werner_measure(kind, 1).value: the normalization constant of every sweep.
double werner_maximum(DistanceKind kind);

/// Definition-based isotropic measure; the printed closed form rides along in
/// `printed` for omega above the CGLMP threshold.
MeasureResult isotropic_measure(DistanceKind kind, int d, double omega);
/// The isotropic closed forms exactly as printed (log base 2).
double isotropic_printed_formula(DistanceKind kind, int d, double omega);

/// Hilbert-Schmidt measure of a Bell-diagonal state by enumerating the three
/// dominant-pair Lagrange cases; falls back to `bd_measure_numeric` when no case
/// yields a consistent candidate. Throws NonPhysical outside the tetrahedron.
MeasureResult bd_measure_hs(const Eigen::Vector3d& a, const OptimizerConfig& cfg = {});

/// Multi-start constrained minimization over local Bell-diagonal states.
/// Throws NonPhysical outside the tetrahedron and NotConvergedError when the
/// best seed fails to converge.
MeasureResult bd_measure_numeric(DistanceKind kind, const Eigen::Vector3d& a, const OptimizerConfig& cfg = {});

/// HS through `bd_measure_hs`, every other kind through `bd_measure_numeric`.
MeasureResult bd_measure(DistanceKind kind, const Eigen::Vector3d& a, const OptimizerConfig& cfg = {});

/// Starting points for the numeric path, in order: the radial projection of
/// `a`, the Werner-line point of its nearest corner, the three dominant-pair
/// Lagrange candidates, then random perturbations. All strictly feasible.
std::vector<Eigen::Vector3d> numeric_seeds(const Eigen::Vector3d& a, const OptimizerConfig& cfg);

/// Correlators of the local state a result points at.
Eigen::Vector3d closest_correlators(const MeasureResult& result);

}  // namespace nlgeo
