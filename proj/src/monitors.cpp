/// @file monitors.cpp
/// @brief Diagnostics rows, series verification, sphere identity residual.

#include "gcf/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gcf/flow.hpp"

namespace gcf {

namespace {

/// σ → column suffix with %g formatting ("0.1" → max_g_sigma_0.1).
std::string sigma_suffix(double sigma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", sigma);
    return buf;
}

} // namespace

MonitorRow record_row(const FlowState& state, const std::vector<double>& sigmas) {
    const CurvatureField cf = curvature_field(state.u);
    const std::size_t n = cf.K.size();

    MonitorRow row;
    row.t = state.t;
    row.min_K = std::numeric_limits<double>::infinity();
    row.max_K = -std::numeric_limits<double>::infinity();
    row.min_pinch = std::numeric_limits<double>::infinity();
    row.max_g = -std::numeric_limits<double>::infinity();
    row.min_H = std::numeric_limits<double>::infinity();
    row.max_H = -std::numeric_limits<double>::infinity();
    row.min_lambda = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        row.min_K = std::min(row.min_K, cf.K[i]);
        row.max_K = std::max(row.max_K, cf.K[i]);
        row.min_pinch = std::min(row.min_pinch, cf.pinch[i]);
        row.max_g = std::max(row.max_g, 0.25 - cf.pinch[i]);
        row.min_H = std::min(row.min_H, cf.H[i]);
        row.max_H = std::max(row.max_H, cf.H[i]);
        row.min_lambda = std::min(row.min_lambda, cf.lambda1[i]);
    }
    row.max_g_sigma.reserve(sigmas.size());
    for (double s : sigmas) {
        const DeficitField df = deficits(cf, s);
        row.max_g_sigma.push_back(*std::max_element(df.g_sigma.begin(), df.g_sigma.end()));
    }
    row.steiner = steiner_point(state.u);
    const auto [r_in, r_out] = radii_about(state.u, row.steiner);
    row.r_in = r_in;
    row.R_out = r_out;
    row.roundness = r_out / r_in - 1.0;
    return row;
}

std::vector<std::string> series_columns(const std::vector<double>& sigmas) {
    std::vector<std::string> cols = {"t", "min_K", "max_K", "min_pinch", "max_g"};
    for (double s : sigmas) cols.push_back("max_g_sigma_" + sigma_suffix(s));
    for (const char* c : {"min_H", "max_H", "r_in", "R_out", "roundness",
                          "steiner_x", "steiner_y", "steiner_z", "min_lambda"})
        cols.push_back(c);
    return cols;
}

double series_value(const MonitorSeries& series, std::size_t row, const std::string& key) {
    const MonitorRow& r = series.rows.at(row);
    if (key == "t") return r.t;
    if (key == "min_K") return r.min_K;
    if (key == "max_K") return r.max_K;
    if (key == "min_pinch") return r.min_pinch;
    if (key == "max_g") return r.max_g;
    if (key == "min_H") return r.min_H;
    if (key == "max_H") return r.max_H;
    if (key == "r_in") return r.r_in;
    if (key == "R_out") return r.R_out;
    if (key == "roundness") return r.roundness;
    if (key == "steiner_x") return r.steiner[0];
    if (key == "steiner_y") return r.steiner[1];
    if (key == "steiner_z") return r.steiner[2];
    if (key == "min_lambda") return r.min_lambda;
    for (std::size_t s = 0; s < series.sigmas.size(); ++s) {
        if (key == "max_g_sigma_" + sigma_suffix(series.sigmas[s]))
            return r.max_g_sigma.at(s);
    }
    throw KeyError("unknown series column: " + key);
}

MonotoneVerdict verify_monotone(const MonitorSeries& series, const std::string& key,
                                Direction direction, double per_step_tol,
                                double total_tol) {
    if (series.rows.size() < 2) {
        throw KeyError("verify_monotone needs at least two rows");
    }
    MonotoneVerdict v;
    v.key = key;
    v.mode = (direction == Direction::non_decreasing) ? "non_decreasing" : "non_increasing";
    v.per_step_tol = per_step_tol;
    v.total_tol = total_tol;
    v.pass = true;

    double worst = 0.0;
    double total_adverse = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i + 1 < series.rows.size(); ++i) {
        const double a = series_value(series, i, key);
        const double b = series_value(series, i + 1, key);
        max_abs = std::max({max_abs, std::abs(a), std::abs(b)});
        const double delta = b - a;
        // Adverse excursion: movement against the declared direction.
        const double adverse =
            (direction == Direction::non_decreasing) ? std::max(0.0, -delta)
                                                     : std::max(0.0, delta);
        total_adverse += adverse;
        const double scale = std::max(1.0, std::abs(a));
        if (adverse > per_step_tol * scale && adverse > worst) {
            worst = adverse;
            v.worst_t = series.rows[i + 1].t;
            v.worst_delta = delta;
            v.pass = false;
        }
    }
    v.total_adverse = total_adverse;
    if (total_adverse > total_tol * std::max(1.0, max_abs)) v.pass = false;
    return v;
}

MonotoneVerdict verify_bounded_by_initial(const MonitorSeries& series,
                                          const std::string& key, double tol) {
    if (series.rows.empty()) {
        throw KeyError("verify_bounded_by_initial needs at least one row");
    }
    MonotoneVerdict v;
    v.key = key;
    v.mode = "below_initial";
    v.per_step_tol = tol;
    v.total_tol = tol;
    v.pass = true;

    const double initial = series_value(series, 0, key);
    const double bound = initial + tol * std::max(1.0, std::abs(initial));
    double worst_excess = 0.0;
    for (std::size_t i = 1; i < series.rows.size(); ++i) {
        const double val = series_value(series, i, key);
        const double excess = val - initial;
        v.total_adverse = std::max(v.total_adverse, excess);
        if (val > bound && excess > worst_excess) {
            worst_excess = excess;
            v.worst_t = series.rows[i].t;
            v.worst_delta = excess;
            v.pass = false;
        }
    }
    return v;
}

double sphere_residual(double r, const SpeedSpec& spec, int n) {
    // On a sphere of radius r: K = r⁻ⁿ and dr/dt = −f(K), so
    //   lhs = dK/dt = −n·r^{−n−1}·(dr/dt) = n·r^{−n−1}·f(K),
    // while the identity's surviving term (gradients vanish) is
    //   rhs = f(K)·K·H,  H = n/r.
    const double K = std::pow(r, -static_cast<double>(n));
    const double f = eval_speed(spec, K).f;
    const double lhs = n * std::pow(r, -static_cast<double>(n) - 1.0) * f;
    const double H = n / r;
    const double rhs = f * K * H;
    return std::abs(lhs - rhs);
}

} // namespace gcf
