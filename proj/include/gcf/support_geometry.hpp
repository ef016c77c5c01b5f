/// @file support_geometry.hpp
/// @brief Curvature and shape diagnostics of a convex body given by its
///        support function on the sphere of outward normals.
///
/// The body with support function u is recovered through the Gauss-map
/// parametrization F = ∇_{S²}u + u·x.  Its principal radii of curvature are
/// the eigenvalues of the radii matrix
///
///     w_ij = ∇_ij u + u δ_ij        (orthonormal frame)
///
/// and every curvature quantity follows from them:
///     κ_i = 1/λ_i,  K = 1/(λ₁λ₂),  H = κ₁+κ₂,  |A|² = κ₁²+κ₂²,
///     pinch = K/H².
///
/// Because w_ij is linear in u and vanishes identically on degree-1
/// spherical harmonics (the grid stencils are exact on them), adding v·x to
/// u — translating the body by v — leaves every curvature field unchanged.

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "gcf/errors.hpp"
#include "gcf/grid.hpp"

namespace gcf {

/// Eigenvalues of the radii matrix below this are treated as loss of
/// convexity rather than round-off (length units of the run).
inline constexpr double kConvexityEps = 1e-10;

/// Nodal sampling of a support function over a shared grid.
struct SupportField {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;

    SupportField() = default;
    SupportField(std::shared_ptr<const Grid> g, std::vector<double> v)
        : grid(std::move(g)), values(std::move(v)) {}
};

/// Per-node curvature data derived from the radii matrix.
struct CurvatureField {
    std::vector<double> w11, w12, w22;      ///< radii matrix entries
    std::vector<double> lambda1, lambda2;   ///< principal radii, λ₁ ≤ λ₂
    std::vector<double> kappa1, kappa2;     ///< principal curvatures (1/λ)
    std::vector<double> K;                  ///< Gauss curvature
    std::vector<double> H;                  ///< mean curvature (unnormalized)
    std::vector<double> A2;                 ///< |A|² = κ₁² + κ₂²
    std::vector<double> pinch;              ///< K/H² ∈ (0, 1/4]
};

/// Per-node pinching deficits: g = 1/4 − K/H² and g_σ = H^σ·g.
struct DeficitField {
    double sigma = 0.0;
    std::vector<double> g;
    std::vector<double> g_sigma;
};

/// Radii matrix, principal radii, and curvatures at every node.
/// Throws ConvexityLostError (carrying the offending node) as soon as a
/// principal radius is ≤ kConvexityEps.
CurvatureField curvature_field(const SupportField& u);

/// Embedded surface points F = ∇u + u·x in ambient coordinates, one per
/// node (axisymmetric grids produce points on the φ = 0 meridian).
/// Propagates convexity failures from curvature_field.
std::vector<std::array<double, 3>> embed_surface(const SupportField& u);

/// Steiner point ζ = (3/4π)·∫ x·u dx, evaluated with the discrete moment
/// normalization ζ_i = ∫x_i·u / ∫x_i², which makes translation
/// equivariance exact: steiner(u + v·x) = steiner(u) + v to round-off.
std::array<double, 3> steiner_point(const SupportField& u);

/// Support extremes about a center: r_in = min(u − c·x), R_out = max(u − c·x).
/// Throws InvalidCenterError when the center is not strictly inside.
std::pair<double, double> radii_about(const SupportField& u,
                                      const std::array<double, 3>& center);

/// Deficits g, g_σ for one σ ≥ 0.
DeficitField deficits(const CurvatureField& cf, double sigma);

/// Outward normal at node i in ambient coordinates.
std::array<double, 3> node_normal(const Grid& grid, std::size_t i);

} // namespace gcf
