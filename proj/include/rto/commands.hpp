#pragma once

// Subcommands behind the rto-sim executable. Each returns a process exit
// status: 0 success, 1 runtime failure, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rto/domain.hpp"

namespace rto {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunRequest {
    std::filesystem::path scenario;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<PolicyKind> policy;
    std::optional<double> competition_slope;
    std::optional<std::size_t> parallelism;
    std::optional<std::filesystem::path> out;
    bool export_events = false;
};

struct CompareRequest {
    std::filesystem::path scenario;
    std::vector<PolicyKind> policies;
    std::vector<double> slopes;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> parallelism;
    std::optional<std::filesystem::path> out;
    bool export_events = false;
};

/// Master seed precedence: explicit flag, scenario file, RTO_SIM_SEED, 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Scenario& scenario);

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareRequest& request, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

}  // namespace rto
