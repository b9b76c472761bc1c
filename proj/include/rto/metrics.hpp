#pragma once

// Per-run cost and compliance accounting, counting-process terminals, and
// batch distribution summaries.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rto/domain.hpp"

namespace rto {

/// Contract-priced volume allocated against each contract's commitment.
class ComplianceLedger {
public:
    ComplianceLedger() = default;
    explicit ComplianceLedger(const Scenario& scenario);

    /// Accrues contract-tagged volume and returns the cost of the allocation
    /// including its multi-PO overhead.
    double record(const Allocation& allocation);

    Units volume(ContractIndex c) const { return volume_.at(c.value); }
    /// Totals over all contracts held by `s`.
    Units supplier_volume(SupplierIndex s) const;
    Units supplier_commitment(SupplierIndex s) const;

private:
    std::vector<SupplierIndex> owner_;
    std::vector<Units> commitment_;
    std::vector<Units> volume_;
};

/// Free-function form of ComplianceLedger::record.
inline double record_allocation(ComplianceLedger& ledger, const Allocation& allocation) {
    return ledger.record(allocation);
}

/// V / K, or nullopt when nothing was committed.
std::optional<double> utilization(Units volume, Units commitment);

struct SupplierOutcome {
    Units volume = 0;      // V_s
    Units commitment = 0;  // K_s
    std::optional<double> utilization;
    double deviation = 0.0;  // V_s - K_s
    std::uint64_t rfq_responses = 0;

    bool operator==(const SupplierOutcome&) const = default;
};

struct RunResult {
    std::uint64_t run_index = 0;
    double terminal_cost = 0.0;
    std::vector<SupplierOutcome> suppliers;  // indexed by SupplierIndex
    std::uint64_t n_pr = 0;
    std::uint64_t n_hl = 0;
    std::uint64_t n_po = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t empty_draws = 0;
    std::vector<double> po_costs;  // per completed requisition, in PO order
    EventLog events;               // filled only when event recording is on

    std::uint64_t n_rfq() const;
};

inline constexpr std::array<double, 7> kQuantileLevels{0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges over [min, max]
    std::vector<std::uint64_t> counts;
};

struct DistributionSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for a single value
    double min = 0.0;
    double max = 0.0;
    std::array<double, kQuantileLevels.size()> quantiles{};
    Histogram histogram;
};

/// Summary of one sample. Quantiles interpolate linearly between order
/// statistics; the histogram has `bins` equal-width bins over [min, max]
/// with the last bin closed.
DistributionSummary summarize(std::vector<double> values, std::size_t bins = 100);

struct MetricSummary {
    std::string name;
    DistributionSummary summary;
};

/// Summaries of every per-run metric, in a fixed order: terminal_cost, the
/// counting-process terminals, in_flight, empty_draws, then volume,
/// utilization and deviation for each contracted supplier.
std::vector<MetricSummary> summarize_batch(const Scenario& scenario, const std::vector<RunResult>& runs,
                                           std::size_t bins = 100);

}  // namespace rto
