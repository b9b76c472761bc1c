#include "rto/demand.hpp"

#include <algorithm>
#include <cmath>

namespace rto {

double inventory_level(double q0, double depletion_rate, double t, double t_last) {
    return std::max(0.0, q0 - depletion_rate * (t - t_last));
}

double propensity(double q0, double level) { return (q0 - level) / q0; }

InventoryState::InventoryState(const Scenario& scenario) {
    anchors_.reserve(scenario.products.size());
    for (const auto& p : scenario.products) {
        anchors_.push_back({p.initial_level.value_or(static_cast<double>(p.baseline_stock)), 0.0});
    }
}

double InventoryState::level(const Product& product, ProductIndex p, double t) const {
    const auto& a = anchors_.at(p.value);
    return inventory_level(a.level, product.depletion_rate, t, a.time);
}

void InventoryState::replenish(const Product& product, ProductIndex p, double t) {
    anchors_.at(p.value) = {static_cast<double>(product.baseline_stock), t};
}

namespace detail {

Units restock_quantity(double q0, double level) {
    // Tolerance absorbs rounding in q0 - rate * elapsed for integral gaps.
    const auto q = static_cast<Units>(std::ceil(q0 - level - 1e-9));
    return std::max<Units>(q, 1);
}

}  // namespace detail

}  // namespace rto
