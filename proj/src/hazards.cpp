#include "rto/hazards.hpp"

#include <cmath>

namespace rto {

double baseline_hazard(const HazardSpec& spec, double elapsed) {
    if (elapsed < 0.0) throw std::domain_error("negative elapsed time");
    if (const auto* c = std::get_if<ConstantBaseline>(&spec.baseline)) return c->rate;
    const auto& w = std::get<WeibullBaseline>(spec.baseline);
    if (w.shape == 1.0) return 1.0 / w.scale;
    if (elapsed == 0.0) {
        if (w.shape < 1.0) throw std::domain_error("Weibull hazard diverges at zero elapsed time for shape < 1");
        return 0.0;
    }
    return (w.shape / w.scale) * std::pow(elapsed / w.scale, w.shape - 1.0);
}

double covariate_multiplier(const HazardSpec& spec, double t) {
    double linear = 0.0;
    for (const auto& x : spec.covariates) linear += x.beta * x.value(t);
    return std::exp(linear);
}

double covariate_bound(const HazardSpec& spec) {
    double linear = 0.0;
    for (const auto& x : spec.covariates) linear += std::abs(x.beta) * std::abs(x.amplitude);
    return std::exp(linear);
}

double hazard_value(const HazardSpec& spec, double elapsed, double t_abs) {
    return baseline_hazard(spec, elapsed) * covariate_multiplier(spec, t_abs);
}

}  // namespace rto
