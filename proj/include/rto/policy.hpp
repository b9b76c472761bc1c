#pragma once

// Order-allocation policies: which (item, supplier) pairs go out for
// quotation, which offers are admissible at order time, and the exact
// minimum-cost assignment with a fixed charge for every extra purchase order.

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rto/domain.hpp"

namespace rto {

/// Offer of one supplier for one item, either at contract or at spot terms.
struct CostEntry {
    SupplierIndex supplier;
    Provenance provenance = Provenance::Spot;
    std::optional<ContractIndex> contract;
    double unit_cost = 0.0;

    bool operator==(const CostEntry&) const = default;
};

struct CostRow {
    ProductIndex product;
    Units quantity = 0;
    std::vector<CostEntry> entries;

    bool operator==(const CostRow&) const = default;
};

struct CostMatrix {
    std::vector<CostRow> rows;
    /// Non-zero when spot surcharges depend on a supplier's total spot
    /// quantity within the requisition; spot entries then hold raw rates.
    double supplier_total_slope = 0.0;

    bool operator==(const CostMatrix&) const = default;
};

using RfqScope = std::vector<std::pair<ProductIndex, SupplierIndex>>;

class InfeasibleAllocation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CostMatrixError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Pairs to quote, ordered by supplier then catalog position. Naive quotes
/// only items without an active contract; Dynamic quotes every item. Only
/// eligible suppliers with a spot price for the product are asked.
RfqScope decide_rfq_scope(const Scenario& scenario, const Requisition& pr, const ContractSnapshot& contracts,
                          PolicyKind policy);

/// Suppliers appearing in `scope`, in index order.
std::vector<SupplierIndex> scope_suppliers(const RfqScope& scope);

/// Products `supplier` is asked to quote.
std::vector<ProductIndex> scope_products(const RfqScope& scope, SupplierIndex supplier);

/// Admissible offers per included item. Naive: contracted items admit only
/// their contract terms, others only spot quotes. Dynamic: the union of both.
/// Throws CostMatrixError when a quote expected from the RFQ scope is missing.
CostMatrix build_cost_matrix(const Scenario& scenario, const Requisition& pr, const ContractSnapshot& contracts,
                             std::span<const Quote> quotes, PolicyKind policy);

/// Exact minimum of sum(cost * quantity) + overhead * (suppliers used - 1),
/// one supplier per item. Ties go to fewer suppliers, then to the
/// lexicographically smallest set of supplier indices.
Allocation allocate_min_cost(const CostMatrix& matrix, double po_overhead);

}  // namespace rto
