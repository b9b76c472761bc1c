#include "rto/domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace rto {

namespace {

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) throw ValidationError(path, message);
}

void check_hazard(const HazardSpec& h, const std::string& path) {
    if (const auto* c = std::get_if<ConstantBaseline>(&h.baseline)) {
        require(c->rate > 0.0 && std::isfinite(c->rate), path + ".baseline.rate", "constant rate must be positive");
    } else {
        const auto& w = std::get<WeibullBaseline>(h.baseline);
        require(w.shape > 0.0 && std::isfinite(w.shape), path + ".baseline.shape", "Weibull shape must be positive");
        require(w.scale > 0.0 && std::isfinite(w.scale), path + ".baseline.scale", "Weibull scale must be positive");
    }
    for (std::size_t k = 0; k < h.covariates.size(); ++k) {
        const auto& x = h.covariates[k];
        const auto p = indexed(path + ".covariates", k);
        require(x.period > 0.0, p + ".period", "covariate period must be positive");
        require(std::isfinite(x.amplitude) && std::isfinite(x.beta) && std::isfinite(x.phase), p,
                "covariate parameters must be finite");
    }
}

}  // namespace

ValidationError::ValidationError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

std::optional<double> Contract::rate_for(ProductIndex p) const {
    for (const auto& r : rates) {
        if (r.product == p) return r.unit_price;
    }
    return std::nullopt;
}

const SpotPrice* SpotModel::find(ProductIndex p, SupplierIndex s) const {
    for (const auto& price : prices) {
        if (price.product == p && price.supplier == s) return &price;
    }
    return nullptr;
}

std::optional<CategoryIndex> Scenario::category_of(ProductIndex p) const {
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const auto& prods = categories[c].products;
        if (std::find(prods.begin(), prods.end(), p) != prods.end()) return CategoryIndex{c};
    }
    return std::nullopt;
}

bool Scenario::supplier_eligible(CategoryIndex c, SupplierIndex s) const {
    const auto& el = categories.at(c.value).eligible_suppliers;
    return std::find(el.begin(), el.end(), s) != el.end();
}

Scenario validate_scenario(Scenario s) {
    require(s.schema_version == 1, "schema_version", "unsupported schema");
    require(s.horizon > 0.0 && std::isfinite(s.horizon), "horizon", "horizon must be positive");

    std::set<std::string> ids;
    for (std::size_t i = 0; i < s.products.size(); ++i) {
        const auto& p = s.products[i];
        const auto path = indexed("catalog.products", i);
        require(!p.id.empty(), path + ".id", "empty product id");
        require(ids.insert(p.id).second, path + ".id", "duplicate product id '" + p.id + "'");
        require(p.baseline_stock >= 1, path + ".q0", "baseline stock must be at least 1");
        require(p.depletion_rate > 0.0 && std::isfinite(p.depletion_rate), path + ".depletion_rate",
                "depletion rate must be positive");
        if (p.initial_level) {
            require(*p.initial_level >= 0.0 && *p.initial_level <= static_cast<double>(p.baseline_stock),
                    path + ".initial_level", "initial level must lie in [0, q0]");
        }
    }

    ids.clear();
    for (std::size_t i = 0; i < s.suppliers.size(); ++i) {
        const auto path = indexed("suppliers", i);
        require(!s.suppliers[i].id.empty(), path + ".id", "empty supplier id");
        require(ids.insert(s.suppliers[i].id).second, path + ".id", "duplicate supplier id '" + s.suppliers[i].id + "'");
        require(s.suppliers[i].spot_lead_time >= 0.0, path + ".spot_lead_time", "lead time must be non-negative");
    }

    std::vector<int> owner(s.products.size(), -1);
    ids.clear();
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        const auto& cat = s.categories[c];
        const auto path = indexed("catalog.categories", c);
        require(ids.insert(cat.id).second, path + ".id", "duplicate category id '" + cat.id + "'");
        require(!cat.products.empty(), path + ".products", "category has no products");
        for (auto p : cat.products) {
            require(p.value < s.products.size(), path + ".products", "unknown product");
            require(owner[p.value] < 0, path + ".products",
                    "product '" + s.products[p.value].id + "' appears in two categories");
            owner[p.value] = static_cast<int>(c);
        }
        require(!cat.eligible_suppliers.empty(), path + ".eligible_suppliers", "category has no eligible suppliers");
        require(cat.eligible_suppliers.size() <= 12, path + ".eligible_suppliers",
                "at most 12 eligible suppliers per category are supported");
        for (auto sup : cat.eligible_suppliers) {
            require(sup.value < s.suppliers.size(), path + ".eligible_suppliers", "unknown supplier");
        }
    }
    for (std::size_t p = 0; p < owner.size(); ++p) {
        require(owner[p] >= 0, indexed("catalog.products", p), "product belongs to no category");
    }

    ids.clear();
    for (std::size_t v = 0; v < s.vessels.size(); ++v) {
        const auto path = indexed("fleet.vessels", v);
        require(ids.insert(s.vessels[v].id).second, path + ".id", "duplicate vessel id '" + s.vessels[v].id + "'");
        require(s.vessels[v].hazards.size() == s.categories.size(), path + ".hazards",
                "vessel must define one hazard per category");
        for (std::size_t c = 0; c < s.vessels[v].hazards.size(); ++c) {
            check_hazard(s.vessels[v].hazards[c], path + ".hazards." + s.categories[c].id);
        }
    }

    for (auto& ct : s.contracts) {
        std::sort(ct.rates.begin(), ct.rates.end(),
                  [](const ContractRate& a, const ContractRate& b) { return a.product < b.product; });
    }
    for (std::size_t k = 0; k < s.contracts.size(); ++k) {
        const auto& ct = s.contracts[k];
        const auto path = indexed("contracts", k);
        require(ct.supplier.value < s.suppliers.size(), path + ".supplier", "unknown supplier");
        require(ct.valid_from < ct.valid_to, path + ".validity", "empty validity window");
        require(ct.valid_from >= 0.0, path + ".validity", "validity starts before time zero");
        require(ct.commitment >= 0, path + ".commitment", "commitment must be non-negative");
        require(ct.lead_time >= 0.0, path + ".lead_time", "lead time must be non-negative");
        require(!ct.rates.empty(), path + ".rates", "contract covers no products");
        for (std::size_t r = 0; r < ct.rates.size(); ++r) {
            const auto& rate = ct.rates[r];
            const auto rpath = indexed(path + ".rates", r);
            require(rate.product.value < s.products.size(), rpath, "unknown product");
            require(rate.unit_price > 0.0 && std::isfinite(rate.unit_price), rpath, "contract rate must be positive");
            const auto cat = s.category_of(rate.product);
            require(cat && s.supplier_eligible(*cat, ct.supplier), rpath,
                    "supplier not eligible for the product's category");
            for (std::size_t q = 0; q < r; ++q) {
                require(!(ct.rates[q].product == rate.product), rpath, "duplicate product rate");
            }
        }
        // At most one active contract per (product, supplier) at any time.
        for (std::size_t other = 0; other < k; ++other) {
            const auto& o = s.contracts[other];
            if (!(o.supplier == ct.supplier)) continue;
            const bool overlap = o.valid_from < ct.valid_to && ct.valid_from < o.valid_to;
            if (!overlap) continue;
            for (const auto& rate : ct.rates) {
                require(!o.rate_for(rate.product), path,
                        "overlaps contracts[" + std::to_string(other) + "] for the same product and supplier");
            }
        }
    }

    const auto& spot = s.spot;
    require(spot.period > 0.0, "spot.period", "period must be positive");
    require(spot.noise_sd >= 0.0, "spot.noise_sd", "noise sd must be non-negative");
    require(spot.competition_slope >= 0.0, "spot.competition_slope", "competition slope must be non-negative");
    for (std::size_t k = 0; k < spot.prices.size(); ++k) {
        const auto& price = spot.prices[k];
        const auto path = indexed("spot.prices", k);
        require(price.product.value < s.products.size(), path + ".product", "unknown product");
        require(price.supplier.value < s.suppliers.size(), path + ".supplier", "unknown supplier");
        require(price.baseline > 0.0, path + ".baseline", "baseline price must be positive");
        const auto cat = s.category_of(price.product);
        require(cat && s.supplier_eligible(*cat, price.supplier), path,
                "supplier not eligible for the product's category");
        for (std::size_t q = 0; q < k; ++q) {
            require(!(spot.prices[q].product == price.product && spot.prices[q].supplier == price.supplier), path,
                    "duplicate spot price entry");
        }
    }

    require(s.policy.po_overhead >= 0.0, "policy.po_overhead", "overhead must be non-negative");

    const auto& d = s.delays;
    require(d.creation_to_approval > 0.0, "delays.creation_to_approval", "delay mean must be positive");
    require(d.approval_to_handling > 0.0, "delays.approval_to_handling", "delay mean must be positive");
    require(d.handling_to_po > 0.0, "delays.handling_to_po", "delay mean must be positive");
    require(d.rfq_response.size() == s.suppliers.size(), "delays.rfq_response", "one mean per supplier required");
    for (std::size_t k = 0; k < d.rfq_response.size(); ++k) {
        require(d.rfq_response[k] > 0.0, indexed("delays.rfq_response", k), "delay mean must be positive");
    }

    require(s.engine.thinning_window_fraction > 0.0, "engine.thinning_window_fraction",
            "window fraction must be positive");
    require(s.runs.count >= 1, "runs.count", "at least one run required");
    require(s.runs.parallelism >= 1, "runs.parallelism", "parallelism must be at least 1");
    require(s.output.histogram_bins >= 1, "output.histogram_bins", "at least one histogram bin required");
    return s;
}

std::size_t Requisition::included_count() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const auto& i) { return i.included; }));
}

Units Requisition::quantity_of(ProductIndex p) const {
    for (const auto& i : items) {
        if (i.product == p) return i.included ? i.quantity : 0;
    }
    return 0;
}

void validate_requisition(const Scenario& scenario, const Requisition& pr) {
    require(pr.category.value < scenario.categories.size(), "requisition.category", "unknown category");
    const auto& products = scenario.categories[pr.category.value].products;
    for (std::size_t k = 0; k < pr.items.size(); ++k) {
        const auto& item = pr.items[k];
        const auto path = indexed("requisition.items", k);
        require(std::find(products.begin(), products.end(), item.product) != products.end(), path,
                "product outside the requisition's category");
        if (item.included) {
            require(item.quantity >= 1, path, "zero quantity for included item");
        } else {
            require(item.quantity == 0, path, "quantity set for excluded item");
        }
    }
}

bool ContractSnapshot::contracted(ProductIndex p) const {
    return std::any_of(terms.begin(), terms.end(), [p](const auto& t) { return t.product == p; });
}

std::optional<double> Quote::rate_for(ProductIndex p) const {
    for (const auto& r : rates) {
        if (r.product == p) return r.unit_rate;
    }
    return std::nullopt;
}

double Allocation::item_cost() const {
    double total = 0.0;
    for (const auto& i : items) total += i.cost();
    return total;
}

bool Allocation::assigned(ProductIndex p, SupplierIndex s) const {
    return std::any_of(items.begin(), items.end(), [&](const auto& i) { return i.product == p && i.supplier == s; });
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::PRGeneration: return "PRGeneration";
        case EventKind::PRHandling: return "PRHandling";
        case EventKind::RFQResponse: return "RFQResponse";
        case EventKind::POGeneration: return "POGeneration";
        case EventKind::Termination: return "Termination";
    }
    return "Unknown";
}

}  // namespace rto
