#include "rto/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rto {

ComplianceLedger::ComplianceLedger(const Scenario& scenario) {
    for (const auto& c : scenario.contracts) {
        owner_.push_back(c.supplier);
        commitment_.push_back(c.commitment);
        volume_.push_back(0);
    }
}

double ComplianceLedger::record(const Allocation& allocation) {
    for (const auto& item : allocation.items) {
        if (item.provenance == Provenance::Contract && item.contract) volume_.at(item.contract->value) += item.quantity;
    }
    return allocation.total_cost();
}

Units ComplianceLedger::supplier_volume(SupplierIndex s) const {
    Units total = 0;
    for (std::size_t k = 0; k < owner_.size(); ++k) {
        if (owner_[k] == s) total += volume_[k];
    }
    return total;
}

Units ComplianceLedger::supplier_commitment(SupplierIndex s) const {
    Units total = 0;
    for (std::size_t k = 0; k < owner_.size(); ++k) {
        if (owner_[k] == s) total += commitment_[k];
    }
    return total;
}

std::optional<double> utilization(Units volume, Units commitment) {
    if (commitment <= 0) return std::nullopt;
    return static_cast<double>(volume) / static_cast<double>(commitment);
}

std::uint64_t RunResult::n_rfq() const {
    std::uint64_t total = 0;
    for (const auto& s : suppliers) total += s.rfq_responses;
    return total;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double level) {
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

DistributionSummary summarize(std::vector<double> values, std::size_t bins) {
    DistributionSummary out;
    if (values.empty()) return out;
    bins = std::max<std::size_t>(bins, 1);
    std::sort(values.begin(), values.end());
    out.count = values.size();
    out.min = values.front();
    out.max = values.back();
    // Summation over sorted values keeps the result independent of run order.
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) out.quantiles[q] = quantile_sorted(values, kQuantileLevels[q]);
    for (std::size_t q = 1; q < kQuantileLevels.size(); ++q) {
        out.quantiles[q] = std::max(out.quantiles[q], out.quantiles[q - 1]);
    }

    auto& h = out.histogram;
    const double width = (out.max - out.min) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = out.min + width * static_cast<double>(b);
    h.edges.back() = out.max;
    h.counts.assign(bins, 0);
    for (double v : values) {
        std::size_t b = 0;
        if (width > 0.0) b = std::min(bins - 1, static_cast<std::size_t>((v - out.min) / width));
        ++h.counts[b];
    }
    return out;
}

std::vector<MetricSummary> summarize_batch(const Scenario& scenario, const std::vector<RunResult>& runs,
                                           std::size_t bins) {
    std::vector<MetricSummary> out;
    auto add = [&](std::string name, auto&& extract) {
        std::vector<double> values;
        values.reserve(runs.size());
        for (const auto& r : runs) values.push_back(static_cast<double>(extract(r)));
        out.push_back({std::move(name), summarize(std::move(values), bins)});
    };
    add("terminal_cost", [](const RunResult& r) { return r.terminal_cost; });
    add("n_pr", [](const RunResult& r) { return r.n_pr; });
    add("n_hl", [](const RunResult& r) { return r.n_hl; });
    add("n_rfq", [](const RunResult& r) { return r.n_rfq(); });
    add("n_po", [](const RunResult& r) { return r.n_po; });
    add("in_flight", [](const RunResult& r) { return r.in_flight; });
    add("empty_draws", [](const RunResult& r) { return r.empty_draws; });
    for (std::size_t s = 0; s < scenario.suppliers.size(); ++s) {
        const auto& id = scenario.suppliers[s].id;
        const bool contracted = std::any_of(scenario.contracts.begin(), scenario.contracts.end(),
                                            [s](const Contract& c) { return c.supplier.value == s; });
        if (!contracted) continue;
        add("volume_" + id, [s](const RunResult& r) { return r.suppliers.at(s).volume; });
        if (runs.empty() || !runs.front().suppliers.at(s).utilization) {
            add("deviation_" + id, [s](const RunResult& r) { return r.suppliers.at(s).deviation; });
            continue;
        }
        add("utilization_" + id, [s](const RunResult& r) { return r.suppliers.at(s).utilization.value_or(0.0); });
        add("deviation_" + id, [s](const RunResult& r) { return r.suppliers.at(s).deviation; });
    }
    return out;
}

}  // namespace rto
