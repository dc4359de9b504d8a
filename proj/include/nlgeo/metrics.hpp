#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "nlgeo/qstate.hpp"

namespace nlgeo {

enum class DistanceKind { HilbertSchmidt, Hellinger, Bures, Trace, RelativeEntropy };

inline constexpr std::array<DistanceKind, 5> kAllDistanceKinds = {
    DistanceKind::HilbertSchmidt, DistanceKind::Hellinger, DistanceKind::Bures,
    DistanceKind::Trace, DistanceKind::RelativeEntropy};

/// CLI tag: hs, he, bu, tr, re.
std::string_view short_name(DistanceKind kind) noexcept;
std::string_view long_name(DistanceKind kind) noexcept;
std::optional<DistanceKind> parse_distance_kind(std::string_view tag) noexcept;

/// Relative entropy is the only asymmetric functional.
constexpr bool is_symmetric(DistanceKind kind) noexcept { return kind != DistanceKind::RelativeEntropy; }

/// Eigenvalues below this count as outside the support.
inline constexpr double kSupportThreshold = 1e-12;

double dist_hs(const DensityMatrix& r1, const DensityMatrix& r2);
/// ||sqrt(r1) - sqrt(r2)||_2^2.
double dist_hellinger_sq(const DensityMatrix& r1, const DensityMatrix& r2);
double dist_hellinger(const DensityMatrix& r1, const DensityMatrix& r2);
/// Uhlmann fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& r1, const DensityMatrix& r2);
double dist_bures(const DensityMatrix& r1, const DensityMatrix& r2);
double dist_trace(const DensityMatrix& r1, const DensityMatrix& r2);
/// S(r1 || r2) in bits; +infinity when supp(r1) is not inside supp(r2).
double rel_entropy(const DensityMatrix& r1, const DensityMatrix& r2);

/// The quantity minimized by the nonlocality measure of each kind. Hellinger
/// and Bures are reported squared (the two coincide on commuting pairs).
double measure_functional(DistanceKind kind, const DensityMatrix& r1, const DensityMatrix& r2);

}  // namespace nlgeo
