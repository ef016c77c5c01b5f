/// @file test_support_geometry.cpp
/// @brief Curvature reconstruction, embedding, Steiner point, radii, deficits.

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "gcf/errors.hpp"
#include "gcf/grid.hpp"
#include "gcf/support_geometry.hpp"
#include "oracles.hpp"

using gcf::build_grid;
using gcf::CurvatureField;
using gcf::curvature_field;
using gcf::Grid;
using gcf::GridMode;
using gcf::SupportField;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<const Grid> make_grid(GridMode mode, int N) {
    return std::make_shared<const Grid>(build_grid(mode, N));
}

template <typename F>
SupportField make_field(const std::shared_ptr<const Grid>& g, F&& f) {
    std::vector<double> v(g->node_count());
    for (int j = 0; j < g->n_theta; ++j)
        for (int k = 0; k < g->n_phi; ++k)
            v[g->index(j, k)] = f(g->theta[static_cast<std::size_t>(j)],
                                  g->phi.empty() ? 0.0 : g->phi[static_cast<std::size_t>(k)]);
    return SupportField(g, std::move(v));
}

bool interior_theta(double th) { return th >= kPi / 8.0 && th <= 7.0 * kPi / 8.0; }
} // namespace

TEST_CASE("curvature_field: round sphere is reproduced exactly") {
    for (const GridMode mode : {GridMode::axisymmetric, GridMode::full}) {
        const auto g = make_grid(mode, 16);
        const auto u = make_field(g, [](double, double) { return 2.0; });
        const CurvatureField cf = curvature_field(u);
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            CHECK(cf.lambda1[i] == 2.0);
            CHECK(cf.lambda2[i] == 2.0);
            CHECK(cf.w12[i] == 0.0);
            CHECK(cf.K[i] == 0.25);
            CHECK(cf.H[i] == 1.0);
            CHECK(cf.A2[i] == 0.5);
            CHECK(cf.pinch[i] == 0.25);
        }
    }
}

TEST_CASE("curvature_field: translation leaves curvature untouched") {
    // u = r + v·x is the same sphere seen from a shifted origin.
    const auto g = make_grid(GridMode::full, 32);
    const auto u = make_field(g, [](double th, double ph) {
        return 2.0 + 0.1 * std::sin(th) * std::cos(ph) - 0.2 * std::sin(th) * std::sin(ph) +
               0.3 * std::cos(th);
    });
    const CurvatureField cf = curvature_field(u);
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        CHECK(std::abs(cf.lambda1[i] - 2.0) < 1e-10);
        CHECK(std::abs(cf.lambda2[i] - 2.0) < 1e-10);
        CHECK(std::abs(cf.pinch[i] - 0.25) < 1e-10);
    }
}

TEST_CASE("curvature_field: spheroid against the closed-form oracle") {
    const oracle::Spheroid sph{1.0, 2.0};
    const auto g = make_grid(GridMode::axisymmetric, 128);
    const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
    const CurvatureField cf = curvature_field(u);
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const double th = g->theta[i];
        const double lam_lo = std::min(sph.lambda_meridional(th), sph.lambda_azimuthal(th));
        const double lam_hi = std::max(sph.lambda_meridional(th), sph.lambda_azimuthal(th));
        const double tol = interior_theta(th) ? 1e-5 : 1e-4;
        CHECK(std::abs(cf.lambda1[i] - lam_lo) / lam_lo < tol);
        CHECK(std::abs(cf.lambda2[i] - lam_hi) / lam_hi < tol);
        CHECK(std::abs(cf.K[i] - sph.K(th)) / sph.K(th) < tol);
        CHECK(std::abs(cf.H[i] - sph.H(th)) / sph.H(th) < tol);
        CHECK(std::abs(cf.pinch[i] - sph.pinch(th)) < tol);
    }
}

TEST_CASE("oracle self-check: spheroid limits at pole and equator") {
    const oracle::Spheroid sph{1.0, 2.0};
    // Pole: both radii → a²/c = 0.5, so κ = 2, K = 4, H = 4, pinch = 1/4.
    CHECK(sph.K(1e-7) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(sph.H(1e-7) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(sph.pinch(1e-7) == doctest::Approx(0.25).epsilon(1e-6));
    // Equator: λ = (c², a)/a-scaled → κ = (1/4, 1), K = 1/4, H = 5/4.
    CHECK(sph.K(kPi / 2.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sph.H(kPi / 2.0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(sph.pinch(kPi / 2.0) == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("curvature_field: dilation covariance") {
    const oracle::Spheroid sph{1.0, 2.0};
    const auto g = make_grid(GridMode::axisymmetric, 64);
    const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
    const CurvatureField base = curvature_field(u);

    SUBCASE("power-of-two dilation is bitwise") {
        std::vector<double> v = u.values;
        for (double& x : v) x *= 2.0;
        const CurvatureField big = curvature_field(SupportField(g, std::move(v)));
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            CHECK(big.lambda1[i] == 2.0 * base.lambda1[i]);
            CHECK(big.lambda2[i] == 2.0 * base.lambda2[i]);
            CHECK(big.pinch[i] == base.pinch[i]);
        }
    }
    SUBCASE("generic dilation scales radii and preserves pinch") {
        const double s = 1.7;
        std::vector<double> v = u.values;
        for (double& x : v) x *= s;
        const CurvatureField big = curvature_field(SupportField(g, std::move(v)));
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            CHECK(big.lambda1[i] == doctest::Approx(s * base.lambda1[i]).epsilon(1e-13));
            CHECK(big.pinch[i] == doctest::Approx(base.pinch[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("curvature_field: equatorial reflection symmetry") {
    const oracle::Spheroid sph{1.0, 2.0};
    const auto g = make_grid(GridMode::axisymmetric, 64);
    const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
    const CurvatureField cf = curvature_field(u);
    // mirrored nodes agree only to round-off: θ_j + θ_{N−1−j} = π holds
    // analytically but not bitwise, and the ulp-level input difference is
    // amplified by the second-derivative divisor (≈ Δθ²) to ~1e-12
    const std::size_t n = g->node_count();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = n - 1 - i;
        CHECK(cf.lambda1[i] == doctest::Approx(cf.lambda1[m]).epsilon(5e-12));
        CHECK(cf.lambda2[i] == doctest::Approx(cf.lambda2[m]).epsilon(5e-12));
        CHECK(cf.pinch[i] == doctest::Approx(cf.pinch[m]).epsilon(5e-12));
    }
}

TEST_CASE("curvature_field: 2|A|² − H² = (κ₂ − κ₁)² ≥ 0") {
    const oracle::Spheroid sph{1.0, 2.0};
    const auto g = make_grid(GridMode::axisymmetric, 64);
    const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
    const CurvatureField cf = curvature_field(u);
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const double gap = 2.0 * cf.A2[i] - cf.H[i] * cf.H[i];
        const double diff = cf.kappa2[i] - cf.kappa1[i];
        CHECK(gap >= -1e-12);
        // near-umbilic nodes cancel two O(H²) terms, so the identity holds
        // to an absolute few·1e-15, not to a relative tolerance
        CHECK(std::abs(gap - diff * diff) < 1e-12);
    }
}

TEST_CASE("curvature_field: triaxial ellipsoid on the full grid") {
    const double a = 1.0, b = 1.3, c = 1.7;
    const auto g = make_grid(GridMode::full, 64);
    std::vector<double> v(g->node_count());
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const auto x = gcf::node_normal(*g, i);
        v[i] = oracle::triaxial_u(a, b, c, x.data());
    }
    const SupportField u(g, std::move(v));
    const CurvatureField cf = curvature_field(u);
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const auto x = gcf::node_normal(*g, i);
        const double K_exact = oracle::triaxial_K(a, b, c, x.data());
        CHECK(std::abs(cf.K[i] - K_exact) / K_exact < 5e-5);
    }
}

TEST_CASE("curvature_field: nonconvex data raises ConvexityLostError") {
    const auto g = make_grid(GridMode::axisymmetric, 32);
    const auto u = make_field(g, [](double th, double) { return 1.0 + 0.5 * std::cos(2.0 * th); });
    try {
        curvature_field(u);
        FAIL("expected ConvexityLostError");
    } catch (const gcf::ConvexityLostError& e) {
        CHECK(e.node() < g->node_count());
        CHECK(e.lambda_min() < gcf::kConvexityEps);
        CHECK(std::string(e.what()).find("convexity lost") != std::string::npos);
    }
    CHECK(gcf::kConvexityEps == 1e-10);
}

TEST_CASE("embed_surface: spheres and translated spheres") {
    const auto g = make_grid(GridMode::full, 16);
    SUBCASE("u ≡ r embeds onto the radius-r sphere") {
        const auto u = make_field(g, [](double, double) { return 1.5; });
        const auto pts = embed_surface(u);
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            const auto x = gcf::node_normal(*g, i);
            for (int d = 0; d < 3; ++d)
                CHECK(pts[i][static_cast<std::size_t>(d)] ==
                      doctest::Approx(1.5 * x[static_cast<std::size_t>(d)]).epsilon(1e-14));
        }
    }
    SUBCASE("adding v·x translates the embedding by v") {
        const std::array<double, 3> vsh{0.1, -0.2, 0.15};
        const auto u = make_field(g, [&](double th, double ph) {
            return 1.0 + vsh[0] * std::sin(th) * std::cos(ph) +
                   vsh[1] * std::sin(th) * std::sin(ph) + vsh[2] * std::cos(th);
        });
        const auto pts = embed_surface(u);
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            const auto x = gcf::node_normal(*g, i);
            for (int d = 0; d < 3; ++d) {
                const auto dd = static_cast<std::size_t>(d);
                CHECK(std::abs(pts[i][dd] - (x[dd] + vsh[dd])) < 1e-10);
            }
        }
    }
}

TEST_CASE("embed_surface: spheroid satisfies its implicit equation") {
    const double a = 1.0, c = 2.0;
    const oracle::Spheroid sph{a, c};
    const auto g = make_grid(GridMode::axisymmetric, 64);
    const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
    const auto pts = embed_surface(u);
    double max_x = 0.0, max_z = 0.0;
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        const double lhs = (pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1]) / (a * a) +
                           pts[i][2] * pts[i][2] / (c * c);
        CHECK(std::abs(lhs - 1.0) < 1e-6);
        max_x = std::max(max_x, pts[i][0]);
        max_z = std::max(max_z, pts[i][2]);
    }
    // extreme points of the body are reached up to node granularity
    CHECK(std::abs(max_x - a) < 5e-3);
    CHECK(std::abs(max_z - c) < 5e-3);
}

TEST_CASE("steiner_point: spheres, shifts, and equivariance") {
    SUBCASE("centered sphere and even perturbation sit at the origin") {
        const auto g = make_grid(GridMode::axisymmetric, 64);
        const auto u = make_field(g, [](double, double) { return 1.5; });
        const auto z = steiner_point(u);
        CHECK(z[0] == 0.0);
        CHECK(z[1] == 0.0);
        CHECK(std::abs(z[2]) < 1e-14);

        const auto even = make_field(g, [](double th, double) {
            return 1.0 + 0.1 * std::cos(th) * std::cos(th);
        });
        CHECK(std::abs(steiner_point(even)[2]) < 1e-13);
    }
    SUBCASE("axisymmetric shift is recovered exactly") {
        const auto g = make_grid(GridMode::axisymmetric, 64);
        const auto u = make_field(g, [](double th, double) { return 1.0 + 0.2 * std::cos(th); });
        const auto z = steiner_point(u);
        CHECK(z[2] == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("full-grid translation equivariance on a non-sphere") {
        const auto g = make_grid(GridMode::full, 32);
        std::vector<double> base(g->node_count()), shifted(g->node_count());
        const std::array<double, 3> vsh{0.07, -0.11, 0.05};
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            const auto x = gcf::node_normal(*g, i);
            base[i] = oracle::triaxial_u(1.0, 1.3, 1.7, x.data());
            shifted[i] = base[i] + vsh[0] * x[0] + vsh[1] * x[1] + vsh[2] * x[2];
        }
        const auto z0 = steiner_point(SupportField(g, std::move(base)));
        const auto z1 = steiner_point(SupportField(g, std::move(shifted)));
        for (int d = 0; d < 3; ++d) {
            const auto dd = static_cast<std::size_t>(d);
            CHECK(std::abs((z1[dd] - z0[dd]) - vsh[dd]) < 1e-13);
        }
    }
}

TEST_CASE("radii_about: inradius and circumradius from a chosen center") {
    const auto g = make_grid(GridMode::axisymmetric, 64);
    SUBCASE("sphere about its center is exact") {
        const auto u = make_field(g, [](double, double) { return 2.0; });
        const auto [rin, rout] = radii_about(u, {0.0, 0.0, 0.0});
        CHECK(rin == 2.0);
        CHECK(rout == 2.0);
    }
    SUBCASE("translated sphere recentered at its Steiner point") {
        const auto u = make_field(g, [](double th, double) { return 2.0 + 0.3 * std::cos(th); });
        const auto z = steiner_point(u);
        const auto [rin, rout] = radii_about(u, z);
        CHECK(std::abs(rin - 2.0) < 1e-10);
        CHECK(std::abs(rout - 2.0) < 1e-10);
    }
    SUBCASE("spheroid about the origin") {
        const oracle::Spheroid sph{1.0, 2.0};
        const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
        const auto [rin, rout] = radii_about(u, {0.0, 0.0, 0.0});
        CHECK(std::abs(rin - 1.0) < 5e-3);
        CHECK(std::abs(rout - 2.0) < 5e-3);
    }
    SUBCASE("off-axis center sees the full surface of revolution") {
        const auto u = make_field(g, [](double, double) { return 2.0; });
        const auto [rin, rout] = radii_about(u, {0.1, 0.0, 0.0});
        CHECK(std::abs(rin - 1.9) < 1e-3);
        CHECK(std::abs(rout - 2.1) < 1e-3);
    }
    SUBCASE("center outside the body is rejected") {
        const oracle::Spheroid sph{1.0, 2.0};
        const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
        CHECK_THROWS_AS((void)radii_about(u, {0.0, 0.0, 5.0}), gcf::InvalidCenterError);
    }
}

TEST_CASE("deficits: pinching deficit g and its weighted form") {
    SUBCASE("round sphere has identically zero deficit") {
        const auto g = make_grid(GridMode::axisymmetric, 32);
        const auto u = make_field(g, [](double, double) { return 1.5; });
        const auto df = gcf::deficits(curvature_field(u), 0.5);
        for (std::size_t i = 0; i < g->node_count(); ++i) {
            CHECK(df.g[i] == 0.0);
            CHECK(df.g_sigma[i] == 0.0);
        }
    }
    SUBCASE("σ = 0 leaves g untouched bitwise") {
        const oracle::Spheroid sph{1.0, 2.0};
        const auto g = make_grid(GridMode::axisymmetric, 32);
        const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
        const auto df = gcf::deficits(curvature_field(u), 0.0);
        for (std::size_t i = 0; i < g->node_count(); ++i) CHECK(df.g_sigma[i] == df.g[i]);
    }
    SUBCASE("spheroid equatorial deficit and the H^σ weight") {
        const oracle::Spheroid sph{1.0, 2.0};
        const auto g = make_grid(GridMode::axisymmetric, 128);
        const auto u = make_field(g, [&](double th, double) { return sph.u(th); });
        const CurvatureField cf = curvature_field(u);
        const auto df = gcf::deficits(cf, 0.1);
        const std::size_t eq = g->node_count() / 2;  // node nearest the equator
        CHECK(df.g[eq] == doctest::Approx(0.09).epsilon(1e-3));
        for (const std::size_t i : {std::size_t{10}, eq, g->node_count() - 5}) {
            CHECK(df.g_sigma[i] ==
                  doctest::Approx(std::pow(cf.H[i], 0.1) * df.g[i]).epsilon(1e-12));
        }
    }
}
