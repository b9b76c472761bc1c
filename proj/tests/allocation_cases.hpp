#pragma once

// Random allocation instances and their translation to the oracle's form.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles/oracles.hpp"
#include "rto/policy.hpp"

namespace test {

using namespace rto;

inline CostEntry spot(std::size_t s, double c) { return {SupplierIndex{s}, Provenance::Spot, std::nullopt, c}; }
inline CostEntry contract(std::size_t s, std::size_t k, double c) {
    return {SupplierIndex{s}, Provenance::Contract, ContractIndex{k}, c};
}

inline oracles::OracleInstance to_oracle(const CostMatrix& m, std::size_t suppliers, double overhead) {
    oracles::OracleInstance in;
    in.suppliers = suppliers;
    in.overhead = overhead;
    for (const auto& row : m.rows) {
        std::vector<std::optional<double>> costs(suppliers);
        for (const auto& e : row.entries) {
            auto& slot = costs[e.supplier.value];
            if (!slot || e.unit_cost < *slot) slot = e.unit_cost;
        }
        in.cost.push_back(costs);
        in.quantity.push_back(row.quantity);
    }
    return in;
}

inline std::vector<std::size_t> assignment_of(const Allocation& a) {
    std::vector<std::size_t> out;
    for (const auto& item : a.items) out.push_back(item.supplier.value);
    return out;
}

inline std::vector<std::size_t> used_set(const std::vector<std::size_t>& a) {
    std::set<std::size_t> s(a.begin(), a.end());
    return {s.begin(), s.end()};
}

// Expected choice among all minimizers: fewest suppliers, then the
// lexicographically smallest supplier set, then the lowest supplier per item.
inline std::vector<std::size_t> preferred(std::vector<std::vector<std::size_t>> minimizers) {
    std::sort(minimizers.begin(), minimizers.end(), [](const auto& x, const auto& y) {
        const auto ux = used_set(x), uy = used_set(y);
        if (ux.size() != uy.size()) return ux.size() < uy.size();
        if (ux != uy) return ux < uy;
        return x < y;
    });
    return minimizers.front();
}

inline CostMatrix random_matrix(std::mt19937_64& gen, std::size_t& suppliers) {
    std::uniform_int_distribution<std::size_t> ns(1, 3), ni(1, 5);
    std::uniform_int_distribution<int> cost(1, 20), qty(1, 10), coin(0, 3);
    suppliers = ns(gen);
    CostMatrix m;
    const std::size_t items = ni(gen);
    for (std::size_t i = 0; i < items; ++i) {
        CostRow row{ProductIndex{i}, qty(gen), {}};
        for (std::size_t s = 0; s < suppliers; ++s) {
            if (coin(gen) == 0) continue;  // unavailable pair
            row.entries.push_back(spot(s, cost(gen)));
            if (coin(gen) == 0) row.entries.push_back(contract(s, s, cost(gen)));
        }
        if (row.entries.empty()) row.entries.push_back(spot(std::uniform_int_distribution<std::size_t>(0, suppliers - 1)(gen), cost(gen)));
        m.rows.push_back(row);
    }
    return m;
}

/// True when the solver's allocation has the oracle's minimum cost and is
/// the minimizer selected by the documented tie-breaks.
inline bool solver_matches_oracle(const CostMatrix& m, std::size_t suppliers, double overhead) {
    const auto a = allocate_min_cost(m, overhead);
    const auto o = oracles::exhaustive_allocation(to_oracle(m, suppliers, overhead));
    return std::abs(a.total_cost() - o.min_cost) <= 1e-9 && assignment_of(a) == preferred(o.minimizers);
}

}  // namespace test
