/// @file monitors.hpp
/// @brief Per-time diagnostics rows, monotonicity verification of recorded
///        series, and the sphere evolution-identity residual.
///
/// The quantities a run records are exactly the ones the flow is known to
/// control: the minimum pinching ratio K/H² is non-decreasing, the minimum
/// of K is non-decreasing, and the weighted deficit g_σ = H^σ·(1/4 − K/H²)
/// never exceeds its initial maximum.  verify_monotone turns those facts
/// into mechanical checks on a recorded series.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "gcf/speed.hpp"
#include "gcf/support_geometry.hpp"

namespace gcf {

struct FlowState;  // defined in flow.hpp

/// Scalar diagnostics of one recorded instant.
struct MonitorRow {
    double t = 0.0;
    double min_K = 0.0, max_K = 0.0;
    double min_pinch = 0.0;
    double max_g = 0.0;
    std::vector<double> max_g_sigma;  ///< one entry per configured σ
    double min_H = 0.0, max_H = 0.0;
    double r_in = 0.0, R_out = 0.0;
    double roundness = 0.0;  ///< R_out/r_in − 1 about the Steiner point
    std::array<double, 3> steiner{0.0, 0.0, 0.0};
    double min_lambda = 0.0;  ///< convexity margin
};

struct MonitorSeries {
    std::vector<double> sigmas;
    std::vector<MonitorRow> rows;  ///< strictly increasing t
    std::string config_hash;       ///< hash of the resolved run configuration
    std::string speed_description;
};

/// Assemble one row from a state (pure; recomputes everything from u).
/// Propagates convexity failures.
MonitorRow record_row(const FlowState& state, const std::vector<double>& sigmas);

/// Fixed CSV column order for a series with the given σ list:
/// t, min_K, max_K, min_pinch, max_g, max_g_sigma_<σ>..., min_H, max_H,
/// r_in, R_out, roundness, steiner_x, steiner_y, steiner_z, min_lambda.
std::vector<std::string> series_columns(const std::vector<double>& sigmas);

/// Column accessor by name; throws KeyError for unknown names.
double series_value(const MonitorSeries& series, std::size_t row, const std::string& key);

enum class Direction { non_decreasing, non_increasing };

struct MonotoneVerdict {
    bool pass = false;
    std::string key;
    std::string mode;           ///< "non_decreasing" | "non_increasing" | "below_initial"
    double worst_t = 0.0;       ///< row time of the worst violation (or 0)
    double worst_delta = 0.0;   ///< most adverse consecutive delta (signed)
    double total_adverse = 0.0; ///< summed excursion against the direction
    double per_step_tol = 0.0;
    double total_tol = 0.0;
};

/// Check that every consecutive delta of the column respects `direction`
/// within per_step_tol and that the total adverse excursion stays within
/// total_tol.  Tolerances are scaled by max(1, |row value|).  Requires at
/// least two rows; unknown keys throw KeyError.
MonotoneVerdict verify_monotone(const MonitorSeries& series, const std::string& key,
                                Direction direction, double per_step_tol,
                                double total_tol);

/// The form the g_σ bound takes: every row's value ≤ the first row's value
/// plus tol (scaled by max(1, |initial|)).
MonotoneVerdict verify_bounded_by_initial(const MonitorSeries& series,
                                          const std::string& key, double tol);

/// Residual of the K evolution identity on an exact sphere of radius r,
/// where all gradient terms vanish: dK/dt along the sphere ODE
/// (K = r⁻ⁿ, dr/dt = −f) must equal f(K)·K·H with H = n/r.
/// Zero analytically for every speed; returns |lhs − rhs|.
double sphere_residual(double r, const SpeedSpec& spec, int n);

} // namespace gcf
