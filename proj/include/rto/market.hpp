#pragma once

// Contract book lookups, seasonal spot rates with Gaussian noise and
// quantity-driven competition, and synthesis of RFQ responses.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rto/domain.hpp"
#include "rto/rng.hpp"

namespace rto {

inline constexpr double kSpotRateFloor = 0.01;

class ContractBook {
public:
    explicit ContractBook(const Scenario& scenario);

    /// Terms of the contract covering (product, supplier) active at `t`.
    std::optional<ContractTerm> lookup(ProductIndex product, SupplierIndex supplier, double t) const;

    /// C_t for every included item of `pr` and every supplier eligible for its category.
    ContractSnapshot snapshot(const Requisition& pr, double t) const;

private:
    const Scenario* scenario_;
};

/// Seasonal expectation baseline + amplitude * cos(2 pi t / period + phase).
double seasonal_rate(const SpotModel& model, const SpotPrice& price, double t);

inline double competition_adjust(double rate, double slope, Units quantity) {
    return rate + slope * static_cast<double>(quantity);
}

/// Seasonal rate plus sigma * N(0,1) noise, floored at kSpotRateFloor.
template <UniformSource Rng>
double spot_rate(const SpotModel& model, const SpotPrice& price, double t, Rng& rng) {
    const double noise = standard_normal(rng);
    return std::max(kSpotRateFloor, seasonal_rate(model, price, t) + model.noise_sd * noise);
}

/// RFQ response of `supplier` at time `response_time` for the listed
/// products of `pr`. Noise is drawn for every product of the category in
/// catalog order so a product's rate does not depend on which other products
/// were quoted. Under per-item competition the returned rates include the
/// quantity surcharge; under per-supplier-total competition they are raw.
template <UniformSource Rng>
Quote make_quote(const Scenario& scenario, const Requisition& pr, SupplierIndex supplier,
                 std::span<const ProductIndex> products, double response_time, Rng& rng) {
    Quote quote;
    quote.supplier = supplier;
    quote.response_time = response_time;
    quote.lead_time = scenario.suppliers.at(supplier.value).spot_lead_time;
    const auto& model = scenario.spot;
    for (auto p : scenario.categories.at(pr.category.value).products) {
        const double noise = standard_normal(rng);
        if (std::find(products.begin(), products.end(), p) == products.end()) continue;
        const Units q = pr.quantity_of(p);
        if (q < 1) throw std::logic_error("quote requested for a product not included in the requisition");
        const SpotPrice* price = model.find(p, supplier);
        if (price == nullptr) throw std::logic_error("quote requested from a supplier without a spot price");
        double rate = std::max(kSpotRateFloor, seasonal_rate(model, *price, response_time) + model.noise_sd * noise);
        if (model.competition_basis == CompetitionBasis::PerItem) {
            rate = competition_adjust(rate, model.competition_slope, q);
        }
        quote.rates.push_back({p, rate});
    }
    return quote;
}

}  // namespace rto
