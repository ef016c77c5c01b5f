/// @file grid.cpp
/// @brief Grid construction, trig-exact five-point stencils, quadrature.

#include "gcf/grid.hpp"

#include <cmath>
#include <string>

namespace gcf {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Denominator of the trig-exact five-point first derivative:
/// 16 sin Δ − 2 sin 2Δ = 4 sin Δ (4 − cos Δ) = 12Δ + O(Δ⁵).
double q1_of(double d) { return 4.0 * std::sin(d) * (4.0 - std::cos(d)); }

/// Denominator of the trig-exact five-point second derivative:
/// 30 − 32 cos Δ + 2 cos 2Δ = 8 sin²(Δ/2)(7 − cos Δ) = 12Δ² + O(Δ⁶).
/// The factored form avoids the catastrophic cancellation of the raw sum.
double q2_of(double d) {
    const double s = std::sin(0.5 * d);
    return 8.0 * s * s * (7.0 - std::cos(d));
}

/// Extend one meridian (or one axisymmetric profile) by two ghost rows on
/// each side.  `mirror(j)` supplies the value reflected across the pole;
/// the caller encodes the half-turn in φ where required.
struct GhostProfile {
    // layout: [g_{-2}, g_{-1}, u_0 .. u_{N-1}, g_N, g_{N+1}]
    std::vector<double> v;
    explicit GhostProfile(int N) : v(static_cast<std::size_t>(N) + 4) {}
    double& at(int j) { return v[static_cast<std::size_t>(j) + 2]; }
    double at(int j) const { return v[static_cast<std::size_t>(j) + 2]; }
};

} // namespace

Grid build_grid(GridMode mode, int N) {
    if (N < 8) {
        throw GridError("grid resolution too coarse: N = " + std::to_string(N) +
                        " (minimum is 8)");
    }
    Grid g;
    g.mode = mode;
    g.N = N;
    g.n_theta = N;
    g.n_phi = (mode == GridMode::full) ? 2 * N : 1;
    g.dtheta = kPi / N;
    g.dphi = (mode == GridMode::full) ? kPi / N : 0.0;

    g.theta.resize(g.n_theta);
    g.sin_theta.resize(g.n_theta);
    g.cos_theta.resize(g.n_theta);
    g.cot_theta.resize(g.n_theta);
    for (int j = 0; j < g.n_theta; ++j) {
        const double th = (j + 0.5) * g.dtheta;
        g.theta[j] = th;
        g.sin_theta[j] = std::sin(th);
        g.cos_theta[j] = std::cos(th);
        g.cot_theta[j] = g.cos_theta[j] / g.sin_theta[j];
    }

    g.phi.resize(g.n_phi);
    for (int k = 0; k < g.n_phi; ++k) g.phi[k] = k * g.dphi;

    // Exact band area between the cell edges θ ± Δ/2:
    //   2π (cos θ_lo − cos θ_hi) = 4π sin(Δ/2) sin θ      (axisymmetric)
    // divided evenly among the 2N longitude cells in full mode.
    g.weight.resize(g.node_count());
    const double half = std::sin(0.5 * g.dtheta);
    for (int j = 0; j < g.n_theta; ++j) {
        const double band = 4.0 * kPi * half * g.sin_theta[j];
        const double cell = (mode == GridMode::full) ? band / g.n_phi : band;
        for (int k = 0; k < g.n_phi; ++k) g.weight[g.index(j, k)] = cell;
    }

    g.q1_theta = q1_of(g.dtheta);
    g.q2_theta = q2_of(g.dtheta);
    if (mode == GridMode::full) {
        g.q1_phi = q1_of(g.dphi);
        g.q2_phi = q2_of(g.dphi);
    }
    return g;
}

namespace {

/// Apply the five-point stencils along an extended profile.  Both stencils
/// annihilate constants, so the profile is deflated by a reference tap
/// first: exact for bitwise-constant profiles (and under power-of-two
/// scalings), and it drops the round-off floor from ε·|u| to ε·(profile
/// range).  Without it, the large constant component of a support function
/// leaks ~ε·|u| into the derivatives, which the 1/sin²θ factor in the
/// φ-second-derivative amplifies past tolerance near the poles.
void stencils_1d(const GhostProfile& p, int N, double q1, double q2,
                 double* d1, double* d2) {
    const double ref = p.at(0);
    for (int j = 0; j < N; ++j) {
        const double um2 = p.at(j - 2) - ref, um1 = p.at(j - 1) - ref;
        const double u0 = p.at(j) - ref;
        const double up1 = p.at(j + 1) - ref, up2 = p.at(j + 2) - ref;
        d1[j] = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / q1;
        d2[j] = (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / q2;
    }
}

/// θ-profile of column k with pole ghosts.  Reflection across a pole lands
/// on the antipodal meridian (φ → φ + π), which in full mode is column
/// k + N mod 2N; axisymmetric fields are their own antipodal meridian.
GhostProfile theta_profile(const std::vector<double>& v, const Grid& g, int k) {
    GhostProfile p(g.n_theta);
    const int kk = (g.mode == GridMode::full) ? (k + g.N) % g.n_phi : k;
    for (int j = 0; j < g.n_theta; ++j) p.at(j) = v[g.index(j, k)];
    p.at(-1) = v[g.index(0, kk)];
    p.at(-2) = v[g.index(1, kk)];
    p.at(g.n_theta) = v[g.index(g.n_theta - 1, kk)];
    p.at(g.n_theta + 1) = v[g.index(g.n_theta - 2, kk)];
    return p;
}

/// Periodic φ-profile of row j.
GhostProfile phi_profile(const std::vector<double>& v, const Grid& g, int j) {
    GhostProfile p(g.n_phi);
    for (int k = 0; k < g.n_phi; ++k) p.at(k) = v[g.index(j, k)];
    p.at(-1) = v[g.index(j, g.n_phi - 1)];
    p.at(-2) = v[g.index(j, g.n_phi - 2)];
    p.at(g.n_phi) = v[g.index(j, 0)];
    p.at(g.n_phi + 1) = v[g.index(j, 1)];
    return p;
}

} // namespace

DerivativeBundle differentiate(const std::vector<double>& values, const Grid& grid) {
    const std::size_t n = grid.node_count();
    DerivativeBundle b;
    b.grad_theta.assign(n, 0.0);
    b.grad_phi.assign(n, 0.0);
    b.h11.assign(n, 0.0);
    b.h12.assign(n, 0.0);
    b.h22.assign(n, 0.0);

    if (grid.mode == GridMode::axisymmetric) {
        GhostProfile p = theta_profile(values, grid, 0);
        std::vector<double> d1(grid.n_theta), d2(grid.n_theta);
        stencils_1d(p, grid.n_theta, grid.q1_theta, grid.q2_theta, d1.data(), d2.data());
        for (int j = 0; j < grid.n_theta; ++j) {
            b.grad_theta[j] = d1[j];
            b.h11[j] = d2[j];
            b.h22[j] = d1[j] * grid.cot_theta[j];
        }
        return b;
    }

    // Full mode: θ-derivatives per column, φ-derivatives per row, then the
    // mixed derivative as the θ-derivative of the φ-derivative.
    std::vector<double> u_th(n), u_thth(n), u_ph(n), u_phph(n), u_thph(n);
    {
        std::vector<double> d1(grid.n_theta), d2(grid.n_theta);
        for (int k = 0; k < grid.n_phi; ++k) {
            GhostProfile p = theta_profile(values, grid, k);
            stencils_1d(p, grid.n_theta, grid.q1_theta, grid.q2_theta, d1.data(), d2.data());
            for (int j = 0; j < grid.n_theta; ++j) {
                u_th[grid.index(j, k)] = d1[j];
                u_thth[grid.index(j, k)] = d2[j];
            }
        }
    }
    {
        std::vector<double> d1(grid.n_phi), d2(grid.n_phi);
        for (int j = 0; j < grid.n_theta; ++j) {
            GhostProfile p = phi_profile(values, grid, j);
            stencils_1d(p, grid.n_phi, grid.q1_phi, grid.q2_phi, d1.data(), d2.data());
            for (int k = 0; k < grid.n_phi; ++k) {
                u_ph[grid.index(j, k)] = d1[k];
                u_phph[grid.index(j, k)] = d2[k];
            }
        }
    }
    {
        std::vector<double> d1(grid.n_theta), d2(grid.n_theta);
        for (int k = 0; k < grid.n_phi; ++k) {
            // u_φ continues across the pole by the same antipodal rule as u
            // itself (the chart extension ũ(−θ,φ) = u(θ,φ+π) differentiates
            // in φ to u_φ(θ,φ+π)), so theta_profile applies unchanged.
            GhostProfile p = theta_profile(u_ph, grid, k);
            stencils_1d(p, grid.n_theta, grid.q1_theta, grid.q2_theta, d1.data(), d2.data());
            for (int j = 0; j < grid.n_theta; ++j) u_thph[grid.index(j, k)] = d1[j];
        }
    }

    for (int j = 0; j < grid.n_theta; ++j) {
        const double s = grid.sin_theta[j];
        const double cot = grid.cot_theta[j];
        for (int k = 0; k < grid.n_phi; ++k) {
            const std::size_t i = grid.index(j, k);
            b.grad_theta[i] = u_th[i];
            b.grad_phi[i] = u_ph[i] / s;
            b.h11[i] = u_thth[i];
            b.h12[i] = (u_thph[i] - cot * u_ph[i]) / s;
            b.h22[i] = u_phph[i] / (s * s) + cot * u_th[i];
        }
    }
    return b;
}

double integrate(const std::vector<double>& field, const Grid& grid) {
    // Kahan summation keeps the 4π closure of the weights at round-off even
    // on large full grids.
    double sum = 0.0, c = 0.0;
    const std::size_t n = grid.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double term = field[i] * grid.weight[i] - c;
        const double next = sum + term;
        c = (next - sum) - term;
        sum = next;
    }
    return sum;
}

} // namespace gcf
