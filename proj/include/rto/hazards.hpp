#pragma once

// Hazard functions of the form baseline(elapsed) * exp(sum beta * x(t)) and
// exact samplers for the next event time of processes governed by them.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rto/rng.hpp"

namespace rto {

struct ConstantBaseline {
    double rate = 1.0;  // events per day

    bool operator==(const ConstantBaseline&) const = default;
};

struct WeibullBaseline {
    double shape = 1.0;
    double scale = 1.0;  // days

    bool operator==(const WeibullBaseline&) const = default;
};

/// Periodic covariate x(t) = amplitude * cos(2 pi t / period + phase),
/// entering the intensity through exp(beta * x(t)).
struct PeriodicCovariate {
    double amplitude = 1.0;
    double period = 365.0;
    double phase = 0.0;
    double beta = 0.0;

    double value(double t) const {
        return amplitude * std::cos(2.0 * std::numbers::pi * t / period + phase);
    }

    bool operator==(const PeriodicCovariate&) const = default;
};

struct HazardSpec {
    std::variant<ConstantBaseline, WeibullBaseline> baseline;
    std::vector<PeriodicCovariate> covariates;

    bool operator==(const HazardSpec&) const = default;
};

/// Baseline hazard at `elapsed` days since the last event.
double baseline_hazard(const HazardSpec& spec, double elapsed);

/// exp(sum beta * x(t)) at absolute time `t`.
double covariate_multiplier(const HazardSpec& spec, double t);

/// Upper bound of covariate_multiplier over all t.
double covariate_bound(const HazardSpec& spec);

/// Full intensity. Throws std::domain_error when the baseline diverges
/// (elapsed = 0 with Weibull shape < 1) or elapsed is negative.
double hazard_value(const HazardSpec& spec, double elapsed, double t_abs);

inline double exponential_inverse(double mean, double u) { return -mean * std::log(u); }

template <UniformSource Rng>
double sample_exponential_delay(double mean, Rng& rng) {
    return exponential_inverse(mean, rng.uniform());
}

/// Thrown when a thinning candidate's intensity exceeds its dominating rate.
class DominatingRateViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

template <UniformSource Rng>
std::optional<double> thin_with_windows(const HazardSpec& spec, double t_last, double horizon, Rng& rng,
                                        double window) {
    const double modulation = covariate_bound(spec);
    double elapsed = 0.0;
    for (;;) {
        const double window_end = elapsed + window;
        // Baseline is non-decreasing, so its window maximum sits at the right end.
        const double bound = baseline_hazard(spec, std::isfinite(window_end) ? window_end : elapsed) * modulation;
        const double candidate = elapsed + exponential_inverse(1.0 / bound, rng.uniform());
        if (candidate > window_end) {
            elapsed = window_end;
            if (t_last + elapsed > horizon) return std::nullopt;
            continue;
        }
        const double t = t_last + candidate;
        if (t > horizon) return std::nullopt;
        const double intensity = hazard_value(spec, candidate, t);
        if (intensity > bound * (1.0 + 1e-12)) {
            throw DominatingRateViolation("thinning candidate exceeds dominating rate");
        }
        if (rng.uniform() * bound <= intensity) return t;
        elapsed = candidate;
    }
}

// Decreasing Weibull baseline: dominate by the baseline itself scaled by the
// covariate bound. Its cumulative hazard inverts in closed form.
template <UniformSource Rng>
std::optional<double> thin_decreasing_weibull(const HazardSpec& spec, const WeibullBaseline& w, double t_last,
                                              double horizon, Rng& rng) {
    const double modulation = covariate_bound(spec);
    double cumulative = 0.0;  // (elapsed / scale)^shape
    for (;;) {
        cumulative += exponential_inverse(1.0, rng.uniform()) / modulation;
        const double candidate = w.scale * std::pow(cumulative, 1.0 / w.shape);
        const double t = t_last + candidate;
        if (t > horizon) return std::nullopt;
        const double ratio = covariate_multiplier(spec, t);
        if (ratio > modulation * (1.0 + 1e-12)) {
            throw DominatingRateViolation("thinning candidate exceeds dominating rate");
        }
        if (rng.uniform() * modulation <= ratio) return t;
    }
}

}  // namespace detail

/// Next event time in (t_last, horizon] of a renewal process whose clock
/// restarts at t_last, or nullopt when it falls beyond the horizon.
/// `window_fraction` sets the thinning window width relative to the Weibull scale.
template <UniformSource Rng>
std::optional<double> sample_gap(const HazardSpec& spec, double t_last, double horizon, Rng& rng,
                                 double window_fraction = 0.25) {
    if (!(t_last < horizon)) return std::nullopt;
    if (const auto* c = std::get_if<ConstantBaseline>(&spec.baseline)) {
        if (spec.covariates.empty()) {
            const double t = t_last + exponential_inverse(1.0 / c->rate, rng.uniform());
            if (t > horizon) return std::nullopt;
            return t;
        }
        return detail::thin_with_windows(spec, t_last, horizon, rng, std::numeric_limits<double>::infinity());
    }
    const auto& w = std::get<WeibullBaseline>(spec.baseline);
    if (w.shape < 1.0) return detail::thin_decreasing_weibull(spec, w, t_last, horizon, rng);
    return detail::thin_with_windows(spec, t_last, horizon, rng, window_fraction * w.scale);
}

}  // namespace rto
