/// @file speed.cpp
/// @brief Built-in speeds and the sampled admissibility checker.

#include "gcf/speed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gcf {

SpeedSpec make_power(double alpha) {
    SpeedSpec s;
    s.kind = SpeedKind::power;
    s.alpha = alpha;
    s.description = "power alpha=" + std::to_string(alpha);
    return s;
}

SpeedSpec make_log_power(int n, double K0) {
    SpeedSpec s;
    s.kind = SpeedKind::log_power;
    s.n = n;
    s.K0 = K0;
    s.description = "log_power n=" + std::to_string(n) + " K0=" + std::to_string(K0);
    return s;
}

SpeedSpec make_custom(std::function<SpeedEval(double)> eval, std::string description) {
    SpeedSpec s;
    s.kind = SpeedKind::custom;
    s.custom = std::move(eval);
    s.description = std::move(description);
    return s;
}

SpeedEval eval_speed(const SpeedSpec& spec, double K) {
    if (!(K > 0.0)) {
        throw SpeedDomainError("speed evaluated at non-positive K = " + std::to_string(K));
    }
    SpeedEval e;
    switch (spec.kind) {
        case SpeedKind::power: {
            const double a = spec.alpha;
            e.f = std::pow(K, a);
            e.fp = a * std::pow(K, a - 1.0);
            e.fpp = a * (a - 1.0) * std::pow(K, a - 2.0);
            break;
        }
        case SpeedKind::log_power: {
            // f = K^{1/n} ln K̂ with K̂ = K + K₀.
            const double inv_n = 1.0 / spec.n;
            const double Khat = K + spec.K0;
            const double lg = std::log(Khat);
            const double p = std::pow(K, inv_n);
            e.f = p * lg;
            e.fp = inv_n * std::pow(K, inv_n - 1.0) * lg + p / Khat;
            e.fpp = inv_n * (inv_n - 1.0) * std::pow(K, inv_n - 2.0) * lg +
                    2.0 * inv_n * std::pow(K, inv_n - 1.0) / Khat - p / (Khat * Khat);
            break;
        }
        case SpeedKind::custom: {
            e = spec.custom(K);
            if (!std::isfinite(e.f) || !std::isfinite(e.fp) || !std::isfinite(e.fpp)) {
                throw SpeedDomainError("custom speed returned a non-finite value at K = " +
                                       std::to_string(K));
            }
            break;
        }
    }
    return e;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "indeterminate";
    }
}

namespace {

/// Strictness margin for the open inequalities in (ii)/(iii): a sampled
/// infimum must clear zero by more than accumulated round-off to count as
/// strictly positive.
constexpr double kStrictEps = 1e-12;

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> xs(count);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i) {
        const double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        xs[i] = std::exp(la + t * (lb - la));
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

/// Default exponent for condition (iv): the canonical value for the
/// built-ins, a coarse grid search for custom speeds (largest γ in (0,1]
/// whose ratio infimum stays positive).
double pick_gamma(const SpeedSpec& spec, int n, const std::vector<double>& top_K) {
    if (spec.kind == SpeedKind::log_power) return static_cast<double>(n) / (n + 1);
    if (spec.kind == SpeedKind::power) return std::min(1.0, 1.0 / spec.alpha);
    for (int i = 20; i >= 1; --i) {
        const double g = i / 20.0;
        double inf = std::numeric_limits<double>::infinity();
        for (double K : top_K) inf = std::min(inf, K / std::pow(eval_speed(spec, K).f, g));
        if (inf > kStrictEps) return g;
    }
    return 0.0;
}

} // namespace

ConditionReport check_conditions(const SpeedSpec& spec, double K_lo, double K_hi,
                                 int n, int samples, double lambda_lo,
                                 double lambda_hi, double gamma) {
    if (!(K_lo > 0.0) || !(K_hi > K_lo)) {
        throw SpeedDomainError("check_conditions requires 0 < K_lo < K_hi");
    }
    if (samples < 100) {
        throw SpeedDomainError("check_conditions requires at least 100 samples");
    }
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo)) {
        throw SpeedDomainError("check_conditions requires 0 < lambda_lo < lambda_hi");
    }

    ConditionReport rep;
    rep.K_lo = K_lo;
    rep.K_hi = K_hi;
    rep.samples = samples;
    rep.lambda_lo = lambda_lo;
    rep.lambda_hi = lambda_hi;

    const std::vector<double> Ks = log_spaced(K_lo, K_hi, samples);

    // (i) parabolicity and the scale-covariant combinations for (ii)/(iii).
    double min_fp = std::numeric_limits<double>::infinity();
    double rho_lo = std::numeric_limits<double>::infinity();
    double rho_hi = -std::numeric_limits<double>::infinity();
    double tau_lo = std::numeric_limits<double>::infinity();
    double tau_hi = -std::numeric_limits<double>::infinity();
    for (double K : Ks) {
        const SpeedEval e = eval_speed(spec, K);
        min_fp = std::min(min_fp, e.fp);
        const double rho = (n * K * e.fp - e.f) / e.f;
        rho_lo = std::min(rho_lo, rho);
        rho_hi = std::max(rho_hi, rho);
        const double tau = K * e.fpp / e.fp + 1.0 - 1.0 / n;
        tau_lo = std::min(tau_lo, tau);
        tau_hi = std::max(tau_hi, tau);
    }
    rep.cond_i = (min_fp > 0.0) ? Verdict::pass : Verdict::fail;

    const bool ii_ok = rho_lo > kStrictEps && rho_hi <= (n - 1) + kStrictEps;
    rep.cond_ii = ii_ok ? Verdict::pass : Verdict::fail;
    if (ii_ok) {
        rep.alpha1 = rho_lo;
        rep.alpha2 = rho_hi;
    }

    const bool iii_ok = tau_lo > 0.0;
    rep.cond_iii = iii_ok ? Verdict::pass : Verdict::fail;
    if (iii_ok) rep.beta = tau_hi;

    // (iv) over the top decade of the sampled range ("large K").
    const double K_threshold = std::max(K_lo, K_hi / 10.0);
    std::vector<double> top;
    for (double K : Ks)
        if (K >= K_threshold) top.push_back(K);
    const double g = (gamma > 0.0) ? gamma : pick_gamma(spec, n, top);
    rep.K_threshold = K_threshold;
    double inf_ratio = std::numeric_limits<double>::infinity();
    if (g > 0.0) {
        for (double K : top) inf_ratio = std::min(inf_ratio, K / std::pow(eval_speed(spec, K).f, g));
    } else {
        inf_ratio = 0.0;
    }
    rep.min_ratio = inf_ratio;
    // The log_power family carries the known certificate γ̂ = 2^{−n/(n+1)};
    // otherwise the observed infimum itself is the reported bound.
    const double ghat = (spec.kind == SpeedKind::log_power && gamma == 0.0)
                            ? std::pow(2.0, -static_cast<double>(n) / (n + 1))
                            : inf_ratio;
    const bool iv_ok = g > 0.0 && inf_ratio > kStrictEps && inf_ratio >= ghat * (1.0 - 1e-12);
    rep.cond_iv = iv_ok ? Verdict::pass : Verdict::fail;
    if (iv_ok) {
        rep.gamma = g;
        rep.gamma_hat = ghat;
    }

    // (v) convexity in the radii via a sampled finite-difference Hessian of
    // F(λ₁, λ₂) = f(1/(λ₁λ₂)); n = 2 only — higher n has no grid here.
    if (n != 2) {
        rep.cond_v = Verdict::indeterminate;
    } else {
        const int m = 33;
        rep.radii_samples = m;
        const std::vector<double> ls = log_spaced(lambda_lo, lambda_hi, m);
        auto F = [&](double l1, double l2) { return eval_speed(spec, 1.0 / (l1 * l2)).f; };
        double min_eig = std::numeric_limits<double>::infinity();
        for (double l1 : ls) {
            for (double l2 : ls) {
                const double h1 = 1e-4 * l1, h2 = 1e-4 * l2;
                const double f0 = F(l1, l2);
                const double fxx = (F(l1 + h1, l2) - 2.0 * f0 + F(l1 - h1, l2)) / (h1 * h1);
                const double fyy = (F(l1, l2 + h2) - 2.0 * f0 + F(l1, l2 - h2)) / (h2 * h2);
                const double fxy = (F(l1 + h1, l2 + h2) - F(l1 + h1, l2 - h2) -
                                    F(l1 - h1, l2 + h2) + F(l1 - h1, l2 - h2)) /
                                   (4.0 * h1 * h2);
                const double mean = 0.5 * (fxx + fyy);
                const double off = 0.5 * (fxx - fyy);
                const double eig = mean - std::sqrt(off * off + fxy * fxy);
                min_eig = std::min(min_eig, eig);
            }
        }
        rep.min_hessian_eig = min_eig;
        rep.cond_v = (min_eig >= -1e-8) ? Verdict::pass : Verdict::fail;
    }

    return rep;
}

} // namespace gcf
