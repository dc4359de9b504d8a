#pragma once

// Normalized measure tables over one-parameter Bell-diagonal families and the
// e4 = 0 slice of the tetrahedron. Every value is divided by the Werner
// maximum of its kind.
//
// Cells are independent; bd_sweep / bd_grid spread them over OpenMP threads and
// return them in row-major order. The *_serial variants run the same per-cell
// code in one loop and are kept as the reference the parallel path must match
// bit for bit.

#include <string_view>
#include <vector>

#include "nlgeo/measures.hpp"

namespace nlgeo {

enum class SweepFamily { TwoBellMix, WernerLine };

std::string_view to_string(SweepFamily family) noexcept;
/// "two-bell" / "two_bell_mix" / "werner" / "werner_line". Throws ArgumentError.
SweepFamily parse_sweep_family(std::string_view text);

/// Correlators of the family member with parameter p:
/// two-Bell mixture a = (2p-1, -(2p-1), 1); Werner line a = w * corner of the singlet.
Eigen::Vector3d sweep_point(SweepFamily family, double parameter);
/// Parameter range of the nonlocal part of the family: p in [1/2, 1], w in [1/sqrt 2, 1].
std::pair<double, double> sweep_range(SweepFamily family);

/// n evenly spaced values from lo to hi, endpoints exact. Requires n >= 2.
std::vector<double> linspace(double lo, double hi, int n);

struct TableCell {
  double parameter = 0.0;  // sweeps only
  double e1 = 0.0, e2 = 0.0;  // grid only
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  double normalized = 0.0;
  MeasureResult result;
};

/// Throws ArgumentError for n_points < 2; NotConvergedError of the first
/// failing cell (in output order).
std::vector<TableCell> bd_sweep(DistanceKind kind, SweepFamily family, int n_points, const OptimizerConfig& cfg = {});
std::vector<TableCell> bd_sweep_serial(DistanceKind kind, SweepFamily family, int n_points,
                                       const OptimizerConfig& cfg = {});

/// Nodes e1 = i / grid_n, e2 = j / grid_n with i + j <= grid_n (e3 = 1 - e1 - e2,
/// e4 = 0), i outer. Fractions are reduced first, so a node shared by two
/// refinements is the same double in both. Throws ArgumentError for grid_n < 2.
std::vector<TableCell> bd_grid(DistanceKind kind, int grid_n, const OptimizerConfig& cfg = {});
std::vector<TableCell> bd_grid_serial(DistanceKind kind, int grid_n, const OptimizerConfig& cfg = {});

/// Reduced fraction num / den as a double.
double grid_coordinate(int num, int den);

}  // namespace nlgeo
