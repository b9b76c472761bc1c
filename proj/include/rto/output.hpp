#pragma once

// Bit-stable text renderings of run results: CSV tables, histograms, the JSON
// batch summary and exported event logs.

#include <string>
#include <vector>

#include "rto/domain.hpp"
#include "rto/metrics.hpp"

namespace rto {

/// Nine significant digits, shortest general form, locale independent.
std::string format_number(double value);

/// `value` rounded to nine significant digits.
double round_significant(double value);

std::string runs_csv(const Scenario& scenario, const std::vector<RunResult>& runs);
std::string histogram_csv(const Histogram& histogram);

/// Batch summary document; every number rounded to nine significant digits.
std::string summary_json(const Scenario& scenario, std::size_t runs, std::uint64_t master_seed,
                         const std::vector<MetricSummary>& metrics);

std::string events_csv(const Scenario& scenario, const EventLog& log);

}  // namespace rto
