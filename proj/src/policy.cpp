#include "rto/policy.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace rto {

RfqScope decide_rfq_scope(const Scenario& scenario, const Requisition& pr, const ContractSnapshot& contracts,
                          PolicyKind policy) {
    RfqScope scope;
    const auto& suppliers = scenario.categories.at(pr.category.value).eligible_suppliers;
    std::vector<SupplierIndex> ordered(suppliers.begin(), suppliers.end());
    std::sort(ordered.begin(), ordered.end());
    for (auto s : ordered) {
        for (const auto& item : pr.items) {
            if (!item.included) continue;
            if (policy == PolicyKind::Naive && contracts.contracted(item.product)) continue;
            if (scenario.spot.find(item.product, s) == nullptr) continue;
            scope.emplace_back(item.product, s);
        }
    }
    return scope;
}

std::vector<SupplierIndex> scope_suppliers(const RfqScope& scope) {
    std::vector<SupplierIndex> out;
    for (const auto& [p, s] : scope) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ProductIndex> scope_products(const RfqScope& scope, SupplierIndex supplier) {
    std::vector<ProductIndex> out;
    for (const auto& [p, s] : scope) {
        if (s == supplier) out.push_back(p);
    }
    return out;
}

CostMatrix build_cost_matrix(const Scenario& scenario, const Requisition& pr, const ContractSnapshot& contracts,
                             std::span<const Quote> quotes, PolicyKind policy) {
    CostMatrix matrix;
    if (scenario.spot.competition_basis == CompetitionBasis::PerSupplierTotal) {
        matrix.supplier_total_slope = scenario.spot.competition_slope;
    }
    const auto scope = decide_rfq_scope(scenario, pr, contracts, policy);
    for (const auto& item : pr.items) {
        if (!item.included) continue;
        CostRow row{item.product, item.quantity, {}};
        const bool contracted = contracts.contracted(item.product);
        if (policy == PolicyKind::Dynamic || contracted) {
            for (const auto& term : contracts.terms) {
                if (term.product == item.product) {
                    row.entries.push_back({term.supplier, Provenance::Contract, term.contract, term.unit_price});
                }
            }
        }
        for (const auto& [p, s] : scope) {
            if (!(p == item.product)) continue;
            const auto it = std::find_if(quotes.begin(), quotes.end(), [s = s](const Quote& q) { return q.supplier == s; });
            const auto rate = it == quotes.end() ? std::nullopt : it->rate_for(p);
            if (!rate) {
                throw CostMatrixError("missing quote for product " + std::to_string(p.value) + " from supplier " +
                                      std::to_string(s.value));
            }
            row.entries.push_back({s, Provenance::Spot, std::nullopt, *rate});
        }
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

namespace {

using SupplierSet = std::vector<SupplierIndex>;

struct Candidate {
    double cost = std::numeric_limits<double>::infinity();
    SupplierSet used;
    std::vector<const CostEntry*> choice;
};

// Strict "better than" under (cost, fewer suppliers, lexicographic set,
// lowest supplier per item).
bool better(double cost, const SupplierSet& used, const std::vector<const CostEntry*>& choice, const Candidate& best) {
    if (cost != best.cost) return cost < best.cost;
    if (used.size() != best.used.size()) return used.size() < best.used.size();
    if (used != best.used) {
        return std::lexicographical_compare(used.begin(), used.end(), best.used.begin(), best.used.end());
    }
    for (std::size_t r = 0; r < choice.size(); ++r) {
        if (choice[r]->supplier != best.choice[r]->supplier) return choice[r]->supplier < best.choice[r]->supplier;
    }
    return false;
}

// Contract beats spot at equal price, then the lower contract index.
bool entry_preferred(const CostEntry& a, const CostEntry& b) {
    if (a.unit_cost != b.unit_cost) return a.unit_cost < b.unit_cost;
    if (a.provenance != b.provenance) return a.provenance == Provenance::Contract;
    return a.contract.value_or(ContractIndex{}) < b.contract.value_or(ContractIndex{});
}

SupplierSet used_suppliers(const std::vector<const CostEntry*>& choice) {
    SupplierSet used;
    for (const auto* e : choice) used.push_back(e->supplier);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    return used;
}

double overhead_for(std::size_t used, double po_overhead) {
    return used > 1 ? po_overhead * static_cast<double>(used - 1) : 0.0;
}

Allocation to_allocation(const CostMatrix& matrix, const Candidate& best, double po_overhead) {
    Allocation a;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        const auto& row = matrix.rows[r];
        const auto* e = best.choice[r];
        a.items.push_back({row.product, e->supplier, e->provenance, e->contract, row.quantity, e->unit_cost});
    }
    a.po_count = best.used.size();
    a.overhead_cost = overhead_for(a.po_count, po_overhead);
    return a;
}

// Separable case: for a fixed supplier subset every item independently takes
// its cheapest offer, so enumerating subsets is exact.
Candidate solve_by_subsets(const CostMatrix& matrix, double po_overhead, const SupplierSet& suppliers) {
    if (suppliers.size() > 20) throw InfeasibleAllocation("too many suppliers for exact subset enumeration");
    const std::size_t n = suppliers.size();
    // best offer of each supplier for each row
    std::vector<std::vector<const CostEntry*>> offer(matrix.rows.size(), std::vector<const CostEntry*>(n, nullptr));
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        for (const auto& e : matrix.rows[r].entries) {
            const auto k = static_cast<std::size_t>(
                std::lower_bound(suppliers.begin(), suppliers.end(), e.supplier) - suppliers.begin());
            auto*& slot = offer[r][k];
            if (slot == nullptr || entry_preferred(e, *slot)) slot = &e;
        }
    }
    Candidate best;
    std::vector<const CostEntry*> choice(matrix.rows.size());
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double cost = 0.0;
        bool feasible = true;
        for (std::size_t r = 0; r < matrix.rows.size() && feasible; ++r) {
            const CostEntry* pick = nullptr;
            for (std::size_t k = 0; k < n; ++k) {
                if (!(mask & (1u << k)) || offer[r][k] == nullptr) continue;
                if (pick == nullptr || offer[r][k]->unit_cost < pick->unit_cost) pick = offer[r][k];
            }
            if (pick == nullptr) {
                feasible = false;
                break;
            }
            choice[r] = pick;
            cost += pick->unit_cost * static_cast<double>(matrix.rows[r].quantity);
        }
        if (!feasible) continue;
        auto used = used_suppliers(choice);
        cost += overhead_for(used.size(), po_overhead);
        if (better(cost, used, choice, best)) best = {cost, std::move(used), choice};
    }
    return best;
}

// Non-separable case: spot surcharges grow with each supplier's total spot
// quantity, so every combination of offers is evaluated.
Candidate solve_by_assignments(const CostMatrix& matrix, double po_overhead) {
    double combos = 1.0;
    for (const auto& row : matrix.rows) combos *= static_cast<double>(row.entries.size());
    if (combos > static_cast<double>(1u << 20)) {
        throw InfeasibleAllocation("assignment space too large for exact enumeration under per-supplier competition");
    }
    const std::size_t rows = matrix.rows.size();
    std::vector<std::size_t> pick(rows, 0);
    std::vector<const CostEntry*> choice(rows);
    Candidate best;
    for (;;) {
        for (std::size_t r = 0; r < rows; ++r) choice[r] = &matrix.rows[r].entries[pick[r]];
        double cost = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const auto* e = choice[r];
            double unit = e->unit_cost;
            if (e->provenance == Provenance::Spot) {
                Units total = 0;
                for (std::size_t o = 0; o < rows; ++o) {
                    if (choice[o]->supplier == e->supplier && choice[o]->provenance == Provenance::Spot) {
                        total += matrix.rows[o].quantity;
                    }
                }
                unit += matrix.supplier_total_slope * static_cast<double>(total);
            }
            cost += unit * static_cast<double>(matrix.rows[r].quantity);
        }
        auto used = used_suppliers(choice);
        cost += overhead_for(used.size(), po_overhead);
        if (better(cost, used, choice, best)) best = {cost, std::move(used), choice};

        std::size_t r = 0;
        while (r < rows && ++pick[r] == matrix.rows[r].entries.size()) pick[r++] = 0;
        if (r == rows) break;
    }
    return best;
}

}  // namespace

Allocation allocate_min_cost(const CostMatrix& matrix, double po_overhead) {
    if (matrix.rows.empty()) throw InfeasibleAllocation("empty cost matrix");
    SupplierSet suppliers;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        const auto& row = matrix.rows[r];
        if (row.entries.empty()) {
            throw InfeasibleAllocation("no admissible supplier for product " + std::to_string(row.product.value));
        }
        if (row.quantity < 1) throw InfeasibleAllocation("non-positive quantity in cost matrix");
        for (const auto& e : row.entries) suppliers.push_back(e.supplier);
    }
    std::sort(suppliers.begin(), suppliers.end());
    suppliers.erase(std::unique(suppliers.begin(), suppliers.end()), suppliers.end());

    if (matrix.supplier_total_slope == 0.0) {
        return to_allocation(matrix, solve_by_subsets(matrix, po_overhead, suppliers), po_overhead);
    }

    const auto best = solve_by_assignments(matrix, po_overhead);
    // Report the surcharged unit costs actually paid.
    Allocation a = to_allocation(matrix, best, po_overhead);
    for (auto& item : a.items) {
        if (item.provenance != Provenance::Spot) continue;
        Units total = 0;
        for (const auto& other : a.items) {
            if (other.supplier == item.supplier && other.provenance == Provenance::Spot) total += other.quantity;
        }
        item.unit_cost += matrix.supplier_total_slope * static_cast<double>(total);
    }
    return a;
}

}  // namespace rto
