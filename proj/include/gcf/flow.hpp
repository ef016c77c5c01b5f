/// @file flow.hpp
/// @brief Time integration of ∂u/∂t = −f(K) with adaptive parabolic steps,
///        stopping rules, rescaling, and the initial-scale scan.
///
/// Linearizing the speed about the current state gives
///   δ(−f(K)) = f′(K)·K·(W⁻¹) : (∇²δu + δu·I),
/// a diffusion operator whose largest eigenvalue at a node is
/// D_max = f′(K)·K/λ_min.  The stable step obeys the usual explicit
/// parabolic bound dt ≤ c_cfl·Δx_eff²/(2n·D_max) with the effective spacing
/// Δx_eff = u·(local angular spacing) — the grid's physical spacing at the
/// body's scale.
///
/// A step advances u with Heun's method (explicit trapezoid): a predictor
/// Euler substep, a speed re-evaluation, and the averaged update.  Both the
/// predictor and the committed state are convexity-checked; any failure
/// preserves the last valid state.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gcf/monitors.hpp"
#include "gcf/speed.hpp"
#include "gcf/support_geometry.hpp"

namespace gcf {

enum class FlowStatus { running, extinct, convexity_lost, completed };

std::string to_string(FlowStatus s);

struct FlowState {
    double t = 0.0;
    SupportField u;
    long step_count = 0;
    double last_dt = 0.0;
    FlowStatus status = FlowStatus::running;
};

enum class ShapeKind { sphere, ellipsoid, custom };

/// Initial body: a sphere of given radius, a spheroid with equatorial
/// semi-axis a and polar semi-axis c (support u = √(a²sin²θ + c²cos²θ)),
/// or explicit per-node support samples.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::sphere;
    double radius = 1.0;
    double a = 1.0, c = 1.0;
    std::vector<double> samples;
};

struct RunConfig {
    ShapeSpec shape;
    GridMode mode = GridMode::axisymmetric;
    int N = 64;
    SpeedSpec speed;
    double theta = 1.0;   ///< initial scale multiplier: u(0) = ϑ·u_shape
    double t_max = 1.0;
    double c_cfl = 0.2;   ///< in (0, 1]
    double r_min = 0.05;  ///< extinction threshold on the inner radius
    std::vector<double> sigmas = {0.1};
    int stride = 10;      ///< record a monitor row every this many steps
};

/// Validate invariants (ϑ > 0, 0 < c_cfl ≤ 1, r_min > 0, stride ≥ 1);
/// throws ConfigError naming the offending field.
void validate(const RunConfig& config);

/// Nodal support samples of the configured shape (before the ϑ scaling).
std::vector<double> shape_support(const ShapeSpec& shape, const Grid& grid);

/// Largest stable explicit step for the current state, capped at dt_max.
/// Throws ConvexityLostError through curvature_field when the state is not
/// convex.  The f′→0 limit has no parabolic bound and returns dt_max.
double stable_dt(const FlowState& state, const SpeedSpec& spec, double c_cfl,
                 double dt_max);

/// Advance one Heun step of size stable_dt(...).  On convexity loss in the
/// predictor or the update, the input state is returned unchanged except
/// for status = convexity_lost.
FlowState step(const FlowState& state, const SpeedSpec& spec, double c_cfl,
               double dt_max);

/// Full run: integrate until t ≥ t_max (completed), the inner radius about
/// the Steiner point drops below r_min (extinct), or convexity fails.
/// Records a monitor row at t = 0, every `stride` steps, and at the final
/// state.  Throws ConvexityLostError if the *initial* shape is not convex.
std::pair<MonitorSeries, FlowState> run(const RunConfig& config);

enum class RescaleMode { inner_radius, volume_proxy };

/// Recenter at the Steiner point, then normalize: divide u by r_in
/// (inner_radius) or by (3V/4π)^{1/3} with V = (1/3)·Σ u·λ₁λ₂·weight
/// (volume_proxy).  After rescale the chosen normalizer equals 1;
/// the operation is idempotent to round-off.
FlowState rescale(const FlowState& state, RescaleMode mode);

/// One row of the initial-scale scan.
struct ScanRow {
    double theta = 0.0;
    FlowStatus status = FlowStatus::running;
    std::optional<double> extinction_time;  ///< empty when censored at t_max
    double terminal_roundness = 0.0;
    double terminal_min_pinch = 0.0;
    std::string error;  ///< per-row failure; empty on success
};

/// Run the shared config once per ϑ (ascending, positive) and tabulate
/// extinction data; failures are recorded in the row and the scan continues.
std::vector<ScanRow> theta_scan(const RunConfig& config,
                                const std::vector<double>& theta_values);

} // namespace gcf
