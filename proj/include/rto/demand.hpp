#pragma once

// Requisition timing (renewal process with periodic covariates) and content
// (latent linear-depletion inventory sampled through inclusion propensities).

#include <optional>
#include <vector>

#include "rto/domain.hpp"
#include "rto/hazards.hpp"
#include "rto/rng.hpp"

namespace rto {

/// max(0, q0 - rate * (t - t_last)).
double inventory_level(double q0, double depletion_rate, double t, double t_last);

/// (q0 - level) / q0.
double propensity(double q0, double level);

/// Latent onboard stock of one vessel. Each product depletes linearly from
/// its last anchor (level, time) and is reset to q0 on replenishment.
class InventoryState {
public:
    InventoryState() = default;
    explicit InventoryState(const Scenario& scenario);

    double level(const Product& product, ProductIndex p, double t) const;
    double last_replenished(ProductIndex p) const { return anchors_.at(p.value).time; }
    void replenish(const Product& product, ProductIndex p, double t);

private:
    struct Anchor {
        double level = 0.0;
        double time = 0.0;
    };
    std::vector<Anchor> anchors_;
};

namespace detail {
Units restock_quantity(double q0, double level);
}

/// Draws inclusion flags and restock quantities for a requisition triggered
/// at `t`. Included products are replenished to q0. Returns nullopt, leaving
/// the inventory untouched, when no product is drawn.
template <UniformSource Rng>
std::optional<Requisition> build_requisition(const Scenario& scenario, VesselIndex vessel, CategoryIndex category,
                                             InventoryState& inventory, double t, Rng& rng) {
    Requisition pr;
    pr.vessel = vessel;
    pr.category = category;
    pr.created_at = t;
    const auto& products = scenario.categories.at(category.value).products;
    pr.items.reserve(products.size());
    bool any = false;
    for (auto p : products) {
        const auto& product = scenario.products[p.value];
        const double q0 = static_cast<double>(product.baseline_stock);
        const double level = inventory.level(product, p, t);
        const double u = rng.uniform();
        // Inverse-transform Bernoulli: U on (0,1] is below p with probability p.
        const bool included = u < propensity(q0, level);
        RequisitionItem item{p, included, 0};
        if (included) {
            item.quantity = detail::restock_quantity(q0, level);
            any = true;
        }
        pr.items.push_back(item);
    }
    if (!any) return std::nullopt;
    for (const auto& item : pr.items) {
        if (item.included) inventory.replenish(scenario.products[item.product.value], item.product, t);
    }
    return pr;
}

/// Next requisition time for a (vessel, category) pair whose renewal clock
/// restarted at `t_last_event`.
template <UniformSource Rng>
std::optional<double> next_requisition_time(const Scenario& scenario, VesselIndex vessel, CategoryIndex category,
                                            double t_last_event, double horizon, Rng& rng) {
    const auto& spec = scenario.vessels.at(vessel.value).hazards.at(category.value);
    return sample_gap(spec, t_last_event, horizon, rng, scenario.engine.thinning_window_fraction);
}

}  // namespace rto
