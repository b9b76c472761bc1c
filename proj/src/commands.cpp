#include "rto/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "rto/engine.hpp"
#include "rto/metrics.hpp"
#include "rto/output.hpp"
#include "rto/scenario_io.hpp"

namespace rto {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tracks files written by a command so a failure can remove partial output.
class OutputSet {
public:
    void write(const fs::path& path, const std::string& content) {
        make_dirs(path.parent_path());
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        files_.push_back(path);
        f << content;
        if (!f) throw std::runtime_error("write failed for " + path.string());
    }

    void rollback() noexcept {
        std::error_code ec;
        for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
        for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only if empty
    }

private:
    void make_dirs(const fs::path& dir) {
        if (dir.empty() || fs::exists(dir)) return;
        make_dirs(dir.parent_path());
        fs::create_directory(dir);
        dirs_.push_back(dir);
    }

    std::vector<fs::path> files_;
    std::vector<fs::path> dirs_;
};

struct BatchOutcome {
    BatchResult batch;
    std::vector<MetricSummary> metrics;
};

BatchOutcome run_and_write(const Scenario& scenario, std::size_t runs, std::uint64_t seed, std::size_t parallelism,
                           const fs::path& dir, bool export_events, OutputSet& files) {
    EngineOptions options;
    options.record_events = export_events;
    BatchOutcome outcome{run_batch(scenario, runs, seed, parallelism, options), {}};
    outcome.metrics = summarize_batch(scenario, outcome.batch.runs, scenario.output.histogram_bins);

    files.write(dir / "runs.csv", runs_csv(scenario, outcome.batch.runs));
    for (const auto& m : outcome.metrics) {
        files.write(dir / ("histogram_" + m.name + ".csv"), histogram_csv(m.summary.histogram));
    }
    files.write(dir / "summary.json", summary_json(scenario, runs, seed, outcome.metrics));
    if (export_events) {
        for (const auto& r : outcome.batch.runs) {
            files.write(dir / ("events_" + std::to_string(r.run_index) + ".csv"), events_csv(scenario, r.events));
        }
    }
    return outcome;
}

const DistributionSummary* find_metric(const std::vector<MetricSummary>& metrics, const std::string& name) {
    for (const auto& m : metrics) {
        if (m.name == name) return &m.summary;
    }
    return nullptr;
}

std::vector<std::string> contracted_suppliers(const Scenario& s) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < s.suppliers.size(); ++k) {
        for (const auto& c : s.contracts) {
            if (c.supplier.value == k && c.commitment > 0) {
                ids.push_back(s.suppliers[k].id);
                break;
            }
        }
    }
    return ids;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename Body>
int guarded(std::ostream& err, OutputSet& files, Body&& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        files.rollback();
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        files.rollback();
        err << "invalid scenario: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        files.rollback();
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Scenario& scenario) {
    if (flag) return *flag;
    if (scenario.runs.master_seed) return *scenario.runs.master_seed;
    if (const char* env = std::getenv("RTO_SIM_SEED")) {
        try {
            std::size_t used = 0;
            const auto value = std::stoull(env, &used);
            if (used == std::string(env).size()) return value;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("RTO_SIM_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    OutputSet files;
    return guarded(err, files, [&] {
        if (request.runs && *request.runs == 0) throw UsageError("--runs must be at least 1");
        if (request.parallelism && *request.parallelism == 0) throw UsageError("--parallelism must be at least 1");
        Scenario scenario = load_scenario(request.scenario);
        if (request.policy) scenario.policy.kind = *request.policy;
        if (request.competition_slope) scenario.spot.competition_slope = *request.competition_slope;
        if (request.runs) scenario.runs.count = *request.runs;
        if (request.parallelism) scenario.runs.parallelism = *request.parallelism;
        scenario = validate_scenario(std::move(scenario));
        const auto seed = resolve_seed(request.seed, scenario);
        const fs::path dir = request.out.value_or(fs::path(scenario.output.directory));

        const auto start = std::chrono::steady_clock::now();
        const auto outcome = run_and_write(scenario, scenario.runs.count, seed, scenario.runs.parallelism, dir,
                                           request.export_events, files);

        out << "runs=" << scenario.runs.count << " policy=" << to_string(scenario.policy.kind)
            << " slope=" << format_number(scenario.spot.competition_slope)
            << " mean_cost=" << format_number(find_metric(outcome.metrics, "terminal_cost")->mean);
        for (const auto& id : contracted_suppliers(scenario)) {
            if (const auto* u = find_metric(outcome.metrics, "utilization_" + id)) {
                out << " mean_util_" << id << '=' << format_number(u->mean);
            }
        }
        out << " runtime=" << format_number(elapsed_seconds(start)) << "s\n";
        return kExitOk;
    });
}

int cmd_compare(const CompareRequest& request, std::ostream& out, std::ostream& err) {
    OutputSet files;
    return guarded(err, files, [&] {
        if (request.policies.empty() || request.slopes.empty()) throw UsageError("need at least one policy and one slope");
        if (request.policies.size() * request.slopes.size() < 2) throw UsageError("need at least two grid cells");
        if (request.runs && *request.runs == 0) throw UsageError("--runs must be at least 1");
        if (request.parallelism && *request.parallelism == 0) throw UsageError("--parallelism must be at least 1");
        for (double slope : request.slopes) {
            if (!(slope >= 0.0)) throw UsageError("slopes must be non-negative");
        }
        const Scenario base = load_scenario(request.scenario);
        const auto seed = resolve_seed(request.seed, base);
        const std::size_t runs = request.runs.value_or(base.runs.count);
        const std::size_t parallelism = request.parallelism.value_or(base.runs.parallelism);
        const fs::path dir = request.out.value_or(fs::path(base.output.directory));
        const auto suppliers = contracted_suppliers(base);

        std::ostringstream table;
        table << "cell,policy,slope,mean_cost,median_cost";
        for (const auto& id : suppliers) table << ",mean_util_" << id << ",median_util_" << id;
        table << '\n';

        const auto start = std::chrono::steady_clock::now();
        std::size_t cell = 0;
        for (auto policy : request.policies) {
            for (double slope : request.slopes) {
                Scenario scenario = base;
                scenario.policy.kind = policy;
                scenario.spot.competition_slope = slope;
                scenario = validate_scenario(std::move(scenario));
                const auto name = "cell" + std::to_string(cell) + "_" + to_string(policy) + "_slope" + format_number(slope);
                // Every cell reuses the same master seed, hence the same stream plan.
                const auto outcome = run_and_write(scenario, runs, seed, parallelism, dir / name, request.export_events, files);
                const auto* cost = find_metric(outcome.metrics, "terminal_cost");
                table << cell << ',' << to_string(policy) << ',' << format_number(slope) << ','
                      << format_number(cost->mean) << ',' << format_number(cost->quantiles[3]);
                for (const auto& id : suppliers) {
                    const auto* u = find_metric(outcome.metrics, "utilization_" + id);
                    table << ',' << (u ? format_number(u->mean) : "") << ',' << (u ? format_number(u->quantiles[3]) : "");
                }
                table << '\n';
                ++cell;
            }
        }
        files.write(dir / "comparison.csv", table.str());
        out << table.str() << "runtime=" << format_number(elapsed_seconds(start)) << "s\n";
        return kExitOk;
    });
}

int cmd_validate(const fs::path& scenario, std::ostream& out, std::ostream& err) {
    OutputSet files;
    return guarded(err, files, [&] {
        const auto s = load_scenario(scenario);
        out << "ok: " << s.vessels.size() << " vessels, " << s.categories.size() << " categories, "
            << s.products.size() << " products, " << s.suppliers.size() << " suppliers, " << s.contracts.size()
            << " contracts, horizon " << format_number(s.horizon) << " days\n";
        return kExitOk;
    });
}

}  // namespace rto
