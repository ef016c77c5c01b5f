/// @file flow.cpp
/// @brief Heun time stepping with parabolic CFL control, stopping rules,
///        rescaling, and the ϑ-scan.

#include "gcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcf {

std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::running: return "running";
        case FlowStatus::extinct: return "extinct";
        case FlowStatus::convexity_lost: return "convexity_lost";
        default: return "completed";
    }
}

void validate(const RunConfig& config) {
    if (!(config.theta > 0.0)) throw ConfigError("flow.theta must be positive");
    if (!(config.c_cfl > 0.0) || config.c_cfl > 1.0)
        throw ConfigError("flow.c_cfl must lie in (0, 1]");
    if (!(config.r_min > 0.0)) throw ConfigError("flow.r_min must be positive");
    if (!(config.t_max > 0.0)) throw ConfigError("flow.t_max must be positive");
    if (config.stride < 1) throw ConfigError("monitors.stride must be at least 1");
    for (double s : config.sigmas)
        if (s < 0.0) throw ConfigError("monitors.sigmas entries must be nonnegative");
}

std::vector<double> shape_support(const ShapeSpec& shape, const Grid& grid) {
    const std::size_t n = grid.node_count();
    std::vector<double> u(n);
    switch (shape.kind) {
        case ShapeKind::sphere:
            std::fill(u.begin(), u.end(), shape.radius);
            break;
        case ShapeKind::ellipsoid:
            // Spheroid with semi-axes (a, a, c): u = √(a²sin²θ + c²cos²θ).
            for (std::size_t i = 0; i < n; ++i) {
                const int j = static_cast<int>(i) / grid.n_phi;
                const double s = grid.sin_theta[j], ct = grid.cos_theta[j];
                u[i] = std::sqrt(shape.a * shape.a * s * s + shape.c * shape.c * ct * ct);
            }
            break;
        case ShapeKind::custom:
            if (shape.samples.size() != n) {
                throw ConfigError("shape.samples has " + std::to_string(shape.samples.size()) +
                                  " entries but the grid has " + std::to_string(n) + " nodes");
            }
            u = shape.samples;
            break;
    }
    return u;
}

namespace {

/// Curvature-dependent part of the step bound; factored out so step() can
/// reuse the curvature field it needs anyway.
double stable_dt_from(const CurvatureField& cf, const SupportField& u,
                      const SpeedSpec& spec, double c_cfl, double dt_max) {
    const Grid& grid = *u.grid;
    const std::size_t n_nodes = grid.node_count();
    const int n = 2;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const SpeedEval e = eval_speed(spec, cf.K[i]);
        const double D = e.fp * cf.K[i] / cf.lambda1[i];
        if (!(D > 0.0) || !std::isfinite(D)) continue;  // no parabolic bound here
        const int j = static_cast<int>(i) / grid.n_phi;
        double spacing = grid.dtheta;
        if (grid.mode == GridMode::full)
            spacing = std::min(spacing, grid.sin_theta[j] * grid.dphi);
        const double dx = u.values[i] * spacing;
        bound = std::min(bound, dx * dx / (2.0 * n * D));
    }
    return std::min(c_cfl * bound, dt_max);
}

} // namespace

double stable_dt(const FlowState& state, const SpeedSpec& spec, double c_cfl,
                 double dt_max) {
    const CurvatureField cf = curvature_field(state.u);
    return stable_dt_from(cf, state.u, spec, c_cfl, dt_max);
}

FlowState step(const FlowState& state, const SpeedSpec& spec, double c_cfl,
               double dt_max) {
    const CurvatureField cf = curvature_field(state.u);
    const double dt = stable_dt_from(cf, state.u, spec, c_cfl, dt_max);
    const std::size_t n = state.u.values.size();

    // Predictor (Euler) substep.
    std::vector<double> k1(n);
    for (std::size_t i = 0; i < n; ++i) k1[i] = eval_speed(spec, cf.K[i]).f;
    SupportField pred(state.u.grid, state.u.values);
    for (std::size_t i = 0; i < n; ++i) pred.values[i] -= dt * k1[i];

    FlowState next = state;
    try {
        const CurvatureField cfp = curvature_field(pred);
        // Corrector: average the speeds at both ends of the substep.
        SupportField updated(state.u.grid, state.u.values);
        for (std::size_t i = 0; i < n; ++i) {
            const double k2 = eval_speed(spec, cfp.K[i]).f;
            updated.values[i] -= 0.5 * dt * (k1[i] + k2);
        }
        curvature_field(updated);  // convexity check on the committed state
        next.u = std::move(updated);
        next.t = state.t + dt;
        next.step_count = state.step_count + 1;
        next.last_dt = dt;
    } catch (const ConvexityLostError&) {
        next.status = FlowStatus::convexity_lost;  // state preserved at last valid u
    }
    return next;
}

std::pair<MonitorSeries, FlowState> run(const RunConfig& config) {
    validate(config);
    auto grid = std::make_shared<const Grid>(build_grid(config.mode, config.N));
    std::vector<double> u0 = shape_support(config.shape, *grid);
    for (double& v : u0) v *= config.theta;

    FlowState state;
    state.u = SupportField(grid, std::move(u0));
    curvature_field(state.u);  // initial shape must be convex; throws otherwise

    MonitorSeries series;
    series.sigmas = config.sigmas;
    series.speed_description = config.speed.description;
    series.rows.push_back(record_row(state, config.sigmas));

    const double dt_max = 1e-2 * config.t_max;
    while (state.status == FlowStatus::running) {
        if (state.t >= config.t_max) {
            state.status = FlowStatus::completed;
            break;
        }
        // Never step past t_max: the final partial step lands exactly on it.
        const double dt_cap = std::min(dt_max, config.t_max - state.t);
        FlowState next = step(state, config.speed, config.c_cfl, dt_cap);
        if (next.status == FlowStatus::convexity_lost) {
            state.status = FlowStatus::convexity_lost;
            break;
        }
        state = std::move(next);

        const auto zeta = steiner_point(state.u);
        const auto [r_in, r_out] = radii_about(state.u, zeta);
        (void)r_out;
        if (r_in < config.r_min) {
            state.status = FlowStatus::extinct;
            break;
        }
        if (state.step_count % config.stride == 0 && state.t < config.t_max) {
            series.rows.push_back(record_row(state, config.sigmas));
        }
    }
    series.rows.push_back(record_row(state, config.sigmas));
    return {std::move(series), std::move(state)};
}

FlowState rescale(const FlowState& state, RescaleMode mode) {
    FlowState out = state;
    const auto zeta = steiner_point(state.u);
    const Grid& grid = *state.u.grid;
    const std::size_t n = grid.node_count();
    out.u.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = node_normal(grid, i);
        out.u.values[i] =
            state.u.values[i] - (zeta[0] * x[0] + zeta[1] * x[1] + zeta[2] * x[2]);
    }

    double normalizer = 1.0;
    if (mode == RescaleMode::inner_radius) {
        normalizer = radii_about(out.u, {0.0, 0.0, 0.0}).first;
    } else {
        // V = (1/3)·Σ u·λ₁λ₂·w — the support integral of 1/K, the discrete
        // volume of the recentered body.
        const CurvatureField cf = curvature_field(out.u);
        std::vector<double> integrand(n);
        for (std::size_t i = 0; i < n; ++i)
            integrand[i] = out.u.values[i] * cf.lambda1[i] * cf.lambda2[i];
        const double V = integrate(integrand, grid) / 3.0;
        normalizer = std::cbrt(3.0 * V / (4.0 * 3.14159265358979323846));
    }
    for (double& v : out.u.values) v /= normalizer;
    return out;
}

std::vector<ScanRow> theta_scan(const RunConfig& config,
                                const std::vector<double>& theta_values) {
    if (theta_values.empty()) throw ConfigError("scan.theta_values must be non-empty");
    for (std::size_t i = 0; i < theta_values.size(); ++i) {
        if (!(theta_values[i] > 0.0))
            throw ConfigError("scan.theta_values entries must be positive");
        if (i > 0 && !(theta_values[i] > theta_values[i - 1]))
            throw ConfigError("scan.theta_values must be strictly ascending");
    }

    std::vector<ScanRow> rows(theta_values.size());
    for (std::size_t i = 0; i < theta_values.size(); ++i) {
        ScanRow& row = rows[i];
        row.theta = theta_values[i];
        try {
            RunConfig c = config;
            c.theta = theta_values[i];
            auto [series, final_state] = run(c);
            row.status = final_state.status;
            if (final_state.status == FlowStatus::extinct)
                row.extinction_time = final_state.t;
            const FlowState normalized = rescale(final_state, RescaleMode::inner_radius);
            const MonitorRow m = record_row(normalized, {});
            row.terminal_roundness = m.roundness;
            row.terminal_min_pinch = m.min_pinch;
        } catch (const Error& e) {
            row.error = e.what();
        }
    }
    return rows;
}

} // namespace gcf
