#pragma once

// Discrete-event kernel for the request-to-order process. Four event
// routines (requisition generation, handling, RFQ response, order
// generation) plus termination at the horizon.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rto/domain.hpp"
#include "rto/metrics.hpp"

namespace rto {

enum class DelayMode {
    Stochastic,  // exponential draws
    Mean,        // every delay fixed at its mean
};

/// Replaces the sampled requisition timing; receives the pair and the time
/// the renewal clock last restarted (0 at initialization), returns the next
/// trigger time or nullopt for none.
using TimingOverride = std::function<std::optional<double>(VesselIndex, CategoryIndex, double)>;

struct EngineOptions {
    DelayMode delays = DelayMode::Stochastic;
    bool record_events = false;
    TimingOverride timing;
};

/// Executes one replication until the horizon.
RunResult run_once(const Scenario& scenario, std::uint64_t run_index, std::uint64_t master_seed,
                   const EngineOptions& options = {});

struct BatchResult {
    std::vector<RunResult> runs;  // ordered by run index
};

class BatchError : public std::runtime_error {
public:
    BatchError(std::uint64_t run_index, const std::string& what);
    std::uint64_t run_index() const noexcept { return run_index_; }

private:
    std::uint64_t run_index_;
};

/// Runs replications 0..n_runs-1 on up to `parallelism` threads. Results are
/// identical for any parallelism. The first failing run (lowest index)
/// aborts the batch with a BatchError.
BatchResult run_batch(const Scenario& scenario, std::size_t n_runs, std::uint64_t master_seed,
                      std::size_t parallelism = 1, const EngineOptions& options = {});

/// Checks an event log for clock monotonicity, per-requisition time ordering,
/// lifecycle completeness and N_PO <= N_HL <= N_PR. Returns one message per
/// violation; empty means the log is consistent.
std::vector<std::string> audit_event_log(const EventLog& log, double horizon);

}  // namespace rto
