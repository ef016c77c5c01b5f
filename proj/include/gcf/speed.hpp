/// @file speed.hpp
/// @brief Speed functions f(K) for the flow ∂u/∂t = −f(K), their
///        derivatives, and the admissibility checker.
///
/// A speed is admissible when, over the curvature range of interest,
///   (i)   f′(K) > 0                                   (parabolicity)
///   (ii)  ρ(K) = (nKf′ − f)/f ∈ [α₁, α₂], 0 < α₁, α₂ ≤ n−1
///   (iii) τ(K) = Kf″/f′ + 1 − 1/n ∈ (0, β]
///   (iv)  K/f(K)^γ ≥ γ̂ for large K (some γ ∈ (0,1], γ̂ > 0)
///   (v)   f(1/(λ₁λ₂)) is convex as a function of the principal radii.
///
/// Built-ins:
///   power:     f = K^α            (ρ ≡ nα−1, τ ≡ α−1/n)
///   log_power: f = K^{1/n}·ln(K + K₀)
/// The log_power family satisfies (iii) with β = (n+1)/n once
/// K₀ ≥ e^{n/(n−1)}, and (iv) with γ = n/(n+1), γ̂ = 2^{−n/(n+1)}.

#pragma once

#include <functional>
#include <string>

#include "gcf/errors.hpp"

namespace gcf {

enum class SpeedKind { power, log_power, custom };

/// Value and first two derivatives of f at one K.
struct SpeedEval {
    double f = 0.0;
    double fp = 0.0;
    double fpp = 0.0;
};

/// A speed function with closed-form derivatives.  Custom speeds must
/// supply analytic f′ and f″ — the checker does no internal differentiation.
struct SpeedSpec {
    SpeedKind kind = SpeedKind::power;
    double alpha = 1.0;  ///< power exponent
    double K0 = 0.0;     ///< log_power offset
    int n = 2;           ///< hypersurface dimension entering K^{1/n}
    std::function<SpeedEval(double)> custom;  ///< used only for kind custom
    std::string description;                  ///< human-readable summary
};

SpeedSpec make_power(double alpha);
SpeedSpec make_log_power(int n, double K0);
SpeedSpec make_custom(std::function<SpeedEval(double)> eval, std::string description);

/// Evaluate (f, f′, f″).  Throws SpeedDomainError for K ≤ 0 or when a
/// custom evaluator produces a non-finite value.
SpeedEval eval_speed(const SpeedSpec& spec, double K);

enum class Verdict { pass, fail, indeterminate };

std::string to_string(Verdict v);

/// Outcome of the admissibility check.  Extracted constants are populated
/// only when the owning condition passes.
struct ConditionReport {
    // (i) parabolicity
    Verdict cond_i = Verdict::indeterminate;
    // (ii) homogeneity bounds
    Verdict cond_ii = Verdict::indeterminate;
    double alpha1 = 0.0, alpha2 = 0.0;
    // (iii) second-derivative bound
    Verdict cond_iii = Verdict::indeterminate;
    double beta = 0.0;
    // (iv) growth bound over the top decade of the sampled range
    Verdict cond_iv = Verdict::indeterminate;
    double gamma = 0.0, gamma_hat = 0.0;
    double K_threshold = 0.0;  ///< lower end of the decade actually tested
    double min_ratio = 0.0;    ///< observed inf of K/f^γ over that decade
    // (v) convexity in the radii, sampled finite-difference Hessian
    Verdict cond_v = Verdict::indeterminate;
    double min_hessian_eig = 0.0;
    int radii_samples = 0;  ///< grid is radii_samples × radii_samples pairs

    // sampling metadata
    double K_lo = 0.0, K_hi = 0.0;
    int samples = 0;
    double lambda_lo = 0.0, lambda_hi = 0.0;

    bool overall() const {
        return cond_i == Verdict::pass && cond_ii == Verdict::pass &&
               cond_iii == Verdict::pass && cond_iv == Verdict::pass &&
               cond_v == Verdict::pass;
    }
};

/// Verify conditions (i)–(v) by log-spaced sampling of [K_lo, K_hi]
/// (`samples` ≥ 100 points) and a radii box [λ_lo, λ_hi]² for (v).
/// Pass γ > 0 to pin condition (iv)'s exponent; γ = 0 selects the
/// canonical exponent for built-ins and a coarse search for custom speeds.
ConditionReport check_conditions(const SpeedSpec& spec, double K_lo, double K_hi,
                                 int n, int samples, double lambda_lo,
                                 double lambda_hi, double gamma = 0.0);

} // namespace gcf
