/// @file support_geometry.cpp
/// @brief Radii matrix assembly, curvature fields, centers and radii.

#include "gcf/support_geometry.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace gcf {

namespace {

/// Eigenvalues of a symmetric 2×2 [[a, b], [b, c]], ascending.
/// Ties (b = 0, a = c) fall out as the repeated value.
std::pair<double, double> sym_eigenvalues(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double off = 0.5 * (a - c);
    const double disc = std::sqrt(off * off + b * b);
    return {mean - disc, mean + disc};
}

} // namespace

CurvatureField curvature_field(const SupportField& u) {
    const Grid& grid = *u.grid;
    const std::size_t n = grid.node_count();
    const DerivativeBundle d = differentiate(u.values, grid);

    CurvatureField cf;
    cf.w11.resize(n);
    cf.w12.resize(n);
    cf.w22.resize(n);
    cf.lambda1.resize(n);
    cf.lambda2.resize(n);
    cf.kappa1.resize(n);
    cf.kappa2.resize(n);
    cf.K.resize(n);
    cf.H.resize(n);
    cf.A2.resize(n);
    cf.pinch.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double w11 = d.h11[i] + u.values[i];
        const double w12 = d.h12[i];
        const double w22 = d.h22[i] + u.values[i];
        cf.w11[i] = w11;
        cf.w12[i] = w12;
        cf.w22[i] = w22;

        double l1, l2;
        if (grid.mode == GridMode::axisymmetric) {
            // w is diagonal on axisymmetric fields; keep the eigenvalues as
            // the raw diagonal entries so sphere states stay bitwise exact.
            l1 = std::min(w11, w22);
            l2 = std::max(w11, w22);
        } else {
            std::tie(l1, l2) = sym_eigenvalues(w11, w12, w22);
        }
        if (!(l1 > kConvexityEps)) {
            throw ConvexityLostError(i, l1,
                "convexity lost: principal radius " + std::to_string(l1) +
                " at node " + std::to_string(i));
        }
        cf.lambda1[i] = l1;
        cf.lambda2[i] = l2;
        const double k1 = 1.0 / l2;  // κ sorted ascending: 1/λ₂ ≤ 1/λ₁
        const double k2 = 1.0 / l1;
        cf.kappa1[i] = k1;
        cf.kappa2[i] = k2;
        const double det = w11 * w22 - w12 * w12;
        const double tr = w11 + w22;
        cf.K[i] = 1.0 / det;
        cf.H[i] = tr / det;
        cf.A2[i] = k1 * k1 + k2 * k2;
        cf.pinch[i] = cf.K[i] / (cf.H[i] * cf.H[i]);
    }
    return cf;
}

std::array<double, 3> node_normal(const Grid& grid, std::size_t i) {
    const int j = static_cast<int>(i) / grid.n_phi;
    const int k = static_cast<int>(i) % grid.n_phi;
    const double s = grid.sin_theta[j];
    const double ph = grid.phi.empty() ? 0.0 : grid.phi[k];
    return {s * std::cos(ph), s * std::sin(ph), grid.cos_theta[j]};
}

std::vector<std::array<double, 3>> embed_surface(const SupportField& u) {
    curvature_field(u);  // convexity gate; result intentionally discarded
    const Grid& grid = *u.grid;
    const DerivativeBundle d = differentiate(u.values, grid);
    const std::size_t n = grid.node_count();

    std::vector<std::array<double, 3>> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int j = static_cast<int>(i) / grid.n_phi;
        const int k = static_cast<int>(i) % grid.n_phi;
        const double ph = grid.phi.empty() ? 0.0 : grid.phi[k];
        const double cph = std::cos(ph), sph = std::sin(ph);
        const double st = grid.sin_theta[j], ct = grid.cos_theta[j];
        // Orthonormal frame on S²: e_θ = (cθcφ, cθsφ, −sθ), e_φ = (−sφ, cφ, 0).
        const double gt = d.grad_theta[i];
        const double gp = d.grad_phi[i];
        const double uv = u.values[i];
        pts[i] = {uv * st * cph + gt * ct * cph - gp * sph,
                  uv * st * sph + gt * ct * sph + gp * cph,
                  uv * ct - gt * st};
    }
    return pts;
}

std::array<double, 3> steiner_point(const SupportField& u) {
    const Grid& grid = *u.grid;
    const std::size_t n = grid.node_count();
    // ζ_i = ∫ x_i u / ∫ x_i² — the discrete second moment replaces the
    // continuum 4π/3 so that adding v·x to u shifts ζ by exactly v.
    std::vector<double> num(n), den(n);
    std::array<double, 3> zeta{0.0, 0.0, 0.0};
    // An axisymmetric field describes the full surface of revolution; the
    // φ-average of x₁ and x₂ vanishes identically, so only ζ₃ survives.
    const int first_axis = (grid.mode == GridMode::axisymmetric) ? 2 : 0;
    for (int axis = first_axis; axis < 3; ++axis) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = node_normal(grid, i);
            num[i] = x[axis] * u.values[i];
            den[i] = x[axis] * x[axis];
        }
        zeta[axis] = integrate(num, grid) / integrate(den, grid);
    }
    return zeta;
}

std::pair<double, double> radii_about(const SupportField& u,
                                      const std::array<double, 3>& center) {
    const Grid& grid = *u.grid;
    const std::size_t n = grid.node_count();
    double r_in = std::numeric_limits<double>::infinity();
    double r_out = -std::numeric_limits<double>::infinity();
    if (grid.mode == GridMode::axisymmetric) {
        // The field is the whole surface of revolution: over a latitude ring
        // the centered support u − c·x ranges over u − c₃cosθ ∓ |c_⊥|sinθ.
        const double c_perp = std::hypot(center[0], center[1]);
        for (std::size_t i = 0; i < n; ++i) {
            const int j = static_cast<int>(i);
            const double axial = u.values[i] - center[2] * grid.cos_theta[j];
            const double swing = c_perp * grid.sin_theta[j];
            r_in = std::min(r_in, axial - swing);
            r_out = std::max(r_out, axial + swing);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = node_normal(grid, i);
            const double s =
                u.values[i] - (center[0] * x[0] + center[1] * x[1] + center[2] * x[2]);
            r_in = std::min(r_in, s);
            r_out = std::max(r_out, s);
        }
    }
    if (!(r_in > 0.0)) {
        throw InvalidCenterError("center lies outside the body: min support " +
                                 std::to_string(r_in));
    }
    return {r_in, r_out};
}

DeficitField deficits(const CurvatureField& cf, double sigma) {
    DeficitField df;
    df.sigma = sigma;
    const std::size_t n = cf.pinch.size();
    df.g.resize(n);
    df.g_sigma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        df.g[i] = 0.25 - cf.pinch[i];
        df.g_sigma[i] = (sigma == 0.0) ? df.g[i] : std::pow(cf.H[i], sigma) * df.g[i];
    }
    return df;
}

} // namespace gcf
