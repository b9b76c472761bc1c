#include "oracles.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace oracles {

std::optional<double> assignment_cost(const OracleInstance& in, const std::vector<std::size_t>& assignment) {
    double total = 0.0;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const auto& c = in.cost[i][assignment[i]];
        if (!c) return std::nullopt;
        total += *c * static_cast<double>(in.quantity[i]);
        used.insert(assignment[i]);
    }
    if (!used.empty()) total += in.overhead * static_cast<double>(used.size() - 1);
    return total;
}

OracleResult exhaustive_allocation(const OracleInstance& in, double tolerance) {
    const std::size_t items = in.cost.size();
    double combos = std::pow(static_cast<double>(in.suppliers), static_cast<double>(items));
    if (combos > std::pow(2.0, 20)) throw std::length_error("oracle instance too large to enumerate");

    OracleResult best;
    bool found = false;
    std::vector<std::size_t> a(items, 0);
    for (;;) {
        if (const auto c = assignment_cost(in, a)) {
            if (!found || *c < best.min_cost - tolerance) {
                best.min_cost = *c;
                best.minimizers = {a};
                found = true;
            } else if (std::abs(*c - best.min_cost) <= tolerance) {
                best.minimizers.push_back(a);
            }
        }
        std::size_t k = 0;
        while (k < items && ++a[k] == in.suppliers) a[k++] = 0;
        if (k == items) break;
    }
    if (!found) throw std::invalid_argument("no feasible assignment");
    return best;
}

double weibull_cdf(double shape, double scale, double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - std::exp(-std::pow(x / scale, shape));
}

double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracles
