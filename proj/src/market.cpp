#include "rto/market.hpp"

namespace rto {

ContractBook::ContractBook(const Scenario& scenario) : scenario_(&scenario) {}

std::optional<ContractTerm> ContractBook::lookup(ProductIndex product, SupplierIndex supplier, double t) const {
    const auto& contracts = scenario_->contracts;
    for (std::size_t k = 0; k < contracts.size(); ++k) {
        const auto& c = contracts[k];
        if (!(c.supplier == supplier) || !c.active_at(t)) continue;
        if (auto rate = c.rate_for(product)) {
            return ContractTerm{product, supplier, ContractIndex{k}, *rate, c.lead_time};
        }
    }
    return std::nullopt;
}

ContractSnapshot ContractBook::snapshot(const Requisition& pr, double t) const {
    ContractSnapshot snap;
    snap.taken_at = t;
    const auto& suppliers = scenario_->categories.at(pr.category.value).eligible_suppliers;
    for (const auto& item : pr.items) {
        if (!item.included) continue;
        for (auto s : suppliers) {
            if (auto term = lookup(item.product, s, t)) snap.terms.push_back(*term);
        }
    }
    return snap;
}

double seasonal_rate(const SpotModel& model, const SpotPrice& price, double t) {
    return price.baseline + price.amplitude * std::cos(2.0 * std::numbers::pi * t / model.period + price.phase);
}

}  // namespace rto
