/// @file grid.hpp
/// @brief Cell-centered latitude-longitude discretization of S² with
///        orthonormal-frame derivative operators and area quadrature.
///
/// Two modes share one node layout convention:
///   - axisymmetric: N colatitude nodes θ_j = (j+½)·π/N, fields depend on θ only;
///   - full:         N colatitude rows × 2N longitude columns, φ_k = k·π/N.
///
/// Nodes never sit on the poles; pole closure is by even reflection
/// (axisymmetric) or reflection with a half-turn in φ (full mode), which is
/// exact for any single-valued function on the sphere.
///
/// Derivatives use five-point centered stencils whose denominators are
/// chosen trigonometrically so that the stencils are *exact* on the degree-1
/// spherical harmonics (cos θ and sin θ·{cos φ, sin φ}) while retaining
/// fourth-order accuracy on smooth fields:
///
///   D1 u = (−u_{+2} + 8u_{+1} − 8u_{−1} + u_{−2}) / (4·sin Δ·(4 − cos Δ))
///   D2 u = (−u_{+2} + 16u_{+1} − 30u_0 + 16u_{−1} − u_{−2}) / (8·sin²(Δ/2)·(7 − cos Δ))
///
/// Exactness on degree-1 harmonics makes the assembled radii matrix
/// w_ij = ∇_ij u + u δ_ij vanish identically for u = v·x, which is the
/// discrete ground for translation invariance of every curvature quantity
/// computed downstream.

#pragma once

#include <cstddef>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

enum class GridMode { axisymmetric, full };

/// Discrete sphere: node coordinates, per-node cell areas, and the
/// precomputed trigonometric tables the stencils need.
struct Grid {
    GridMode mode = GridMode::axisymmetric;
    int N = 0;        ///< nodes per angular direction (θ always has N rows)
    int n_theta = 0;  ///< = N
    int n_phi = 0;    ///< 1 (axisymmetric) or 2N (full)

    double dtheta = 0.0;  ///< π/N
    double dphi = 0.0;    ///< π/N in full mode (2N columns over 2π), 0 otherwise

    std::vector<double> theta;  ///< colatitudes, size n_theta
    std::vector<double> phi;    ///< longitudes, size n_phi (empty-ish for axisymmetric: {0})

    std::vector<double> sin_theta;  ///< per row
    std::vector<double> cos_theta;  ///< per row
    std::vector<double> cot_theta;  ///< per row

    /// Exact cell areas per node (steradians); rows share one value.
    /// Axisymmetric weights cover the whole latitude band.
    std::vector<double> weight;

    // Trig-exact stencil denominators (see file header).
    double q1_theta = 0.0, q2_theta = 0.0;
    double q1_phi = 0.0, q2_phi = 0.0;

    std::size_t node_count() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(j) * n_phi + k; }
};

/// Per-node covariant derivative data of a scalar field in the local
/// orthonormal frame (e_θ, e_φ): gradient components and the symmetric
/// Hessian ∇_ij u (h12 ≡ 0 on axisymmetric grids).
struct DerivativeBundle {
    std::vector<double> grad_theta;  ///< u_θ
    std::vector<double> grad_phi;    ///< u_φ / sin θ
    std::vector<double> h11;         ///< u_θθ
    std::vector<double> h12;         ///< (u_θφ − cot θ·u_φ) / sin θ
    std::vector<double> h22;         ///< u_φφ / sin²θ + cot θ·u_θ
};

/// Build a cell-centered grid.  Throws GridError for N < 8 (stencil support
/// plus pole reflection needs at least four interior rows per hemisphere).
Grid build_grid(GridMode mode, int N);

/// Covariant gradient and Hessian of a nodal field in the orthonormal frame.
/// `values` must have grid.node_count() entries; in axisymmetric mode the
/// field is a function of θ only.  Total on valid grids.
DerivativeBundle differentiate(const std::vector<double>& values, const Grid& grid);

/// Area-weighted quadrature Σ field·weight with compensated (Kahan)
/// summation: exact for constants to round-off, O(N⁻²) on smooth fields.
double integrate(const std::vector<double>& field, const Grid& grid);

} // namespace gcf
