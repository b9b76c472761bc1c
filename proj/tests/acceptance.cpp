// Acceptance checks A1-A9. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "allocation_cases.hpp"
#include "oracles/oracles.hpp"
#include "random_scenario.hpp"
#include "rto/commands.hpp"
#include "rto/demand.hpp"
#include "rto/engine.hpp"
#include "rto/hazards.hpp"
#include "support.hpp"

using namespace rto;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

double mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

constexpr std::uint64_t kSeed = 42;

Verdict a1_sampler() {
    const auto t0 = Clock::now();
    const auto spec = test::weibull(2.0, 10.0);
    Stream rng(kSeed, 0, "acceptance-a1");
    std::vector<double> gaps;
    for (int i = 0; i < 10000; ++i) gaps.push_back(*sample_gap(spec, 0.0, 1e9, rng));
    const double d = oracles::ks_statistic(gaps, [](double x) { return oracles::weibull_cdf(2.0, 10.0, x); });
    const double crit = oracles::ks_critical_001(gaps.size());
    const double target = 10.0 * std::tgamma(1.5);
    const double rel = std::abs(mean(gaps) - target) / target;
    const double secs = seconds_since(t0);
    return {d < crit && rel < 0.02 && secs < 5.0,
            "KS D=" + fmt(d) + " (crit " + fmt(crit) + "), mean=" + fmt(mean(gaps)) + " vs " + fmt(target) +
                " (rel " + fmt(rel) + "), " + fmt(secs) + "s"};
}

Verdict a2_renewal() {
    const auto t0 = Clock::now();
    const auto bundled = test::bundled();
    struct Case {
        std::string name;
        HazardSpec spec;
    };
    const std::vector<Case> cases{{"bundled", bundled.vessels[0].hazards[0]},
                                  {"W(2,30)", test::weibull(2.0, 30.0)},
                                  {"W(1.5,50)", test::weibull(1.5, 50.0)},
                                  {"W(3,20)", test::weibull(3.0, 20.0)}};
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& w = std::get<WeibullBaseline>(cases[k].spec.baseline);
        const double mu = w.scale * std::tgamma(1.0 + 1.0 / w.shape);
        if (365.0 < 5.0 * mu) continue;
        double total = 0.0;
        for (int run = 0; run < 10000; ++run) {
            Stream rng(kSeed, run, "acceptance-a2", {k});
            double t = 0.0;
            while (const auto next = sample_gap(cases[k].spec, t, 365.0, rng)) {
                t = *next;
                total += 1.0;
            }
        }
        const double m = total / 10000.0, expected = 365.0 / mu;
        const double rel = std::abs(m - expected) / expected;
        ok = ok && rel < 0.05;
        detail += cases[k].name + " " + fmt(m) + "/" + fmt(expected) + " (rel " + fmt(rel) + "); ";
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 30.0, detail + fmt(secs) + "s"};
}

Verdict a3_allocation() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(kSeed);
    int mismatches = 0, checked = 0;
    for (int i = 0; i < 1000; ++i) {
        std::size_t suppliers = 0;
        const auto m = test::random_matrix(gen, suppliers);
        for (double overhead : {0.0, 10.0, 25.0}) {
            ++checked;
            if (!test::solver_matches_oracle(m, suppliers, overhead)) ++mismatches;
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 10.0,
            std::to_string(checked) + " instances, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) + "s"};
}

struct Cell {
    PolicyKind policy;
    double slope;
    std::vector<double> cost;
    std::vector<std::vector<double>> util;  // per supplier
};

std::vector<Cell> grid(std::size_t runs) {
    const auto base = test::bundled();
    std::vector<Cell> cells;
    for (auto policy : {PolicyKind::Naive, PolicyKind::Dynamic}) {
        for (double slope : {0.0, 0.01, 0.10}) {
            auto s = base;
            s.policy.kind = policy;
            s.spot.competition_slope = slope;
            const auto batch = run_batch(s, runs, kSeed, 4);
            Cell c{policy, slope, {}, std::vector<std::vector<double>>(s.suppliers.size())};
            for (const auto& r : batch.runs) {
                c.cost.push_back(r.terminal_cost);
                for (std::size_t k = 0; k < r.suppliers.size(); ++k) {
                    if (r.suppliers[k].utilization) c.util[k].push_back(*r.suppliers[k].utilization);
                }
            }
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

Verdict a4_ordering(const std::vector<Cell>& cells, double secs) {
    const auto& naive = cells[0].cost;
    const auto& dyn = cells[3].cost;
    std::size_t le = 0;
    for (std::size_t i = 0; i < naive.size(); ++i) le += dyn[i] - naive[i] <= 0.0 ? 1 : 0;
    const double frac = double(le) / double(naive.size());
    return {mean(dyn) <= mean(naive) && frac >= 0.9 && secs < 120.0,
            "mean dynamic " + fmt(mean(dyn)) + " vs naive " + fmt(mean(naive)) + ", paired dynamic<=naive in " +
                fmt(100.0 * frac) + "% of runs, grid " + fmt(secs) + "s"};
}

Verdict a5_convergence(const std::vector<Cell>& cells) {
    std::vector<double> diff;
    for (int k = 0; k < 3; ++k) diff.push_back(std::abs(mean(cells[k].cost) - mean(cells[k + 3].cost)));
    const bool ok = diff[0] >= diff[1] && diff[1] >= diff[2];
    return {ok, "|mean diff| at slopes 0/0.01/0.10: " + fmt(diff[0]) + " / " + fmt(diff[1]) + " / " + fmt(diff[2])};
}

Verdict a6_compliance(const std::vector<Cell>& cells) {
    const std::size_t a = 0, b = 1, c = 2;
    bool ok = true;
    std::string detail = "naive median u_C:";
    for (int k = 0; k < 3; ++k) {
        const double u = median(cells[k].util[c]);
        ok = ok && u > 1.0;
        detail += " " + fmt(u);
    }
    detail += "; dynamic slope 0 medians A/B/C:";
    for (auto s : {a, b, c}) {
        const double u = median(cells[3].util[s]);
        ok = ok && u < 0.25;
        detail += " " + fmt(u);
    }
    const double high = median(cells[5].util[c]);
    ok = ok && high > 1.0;
    detail += "; dynamic slope 0.10 median u_C: " + fmt(high);
    return {ok, detail};
}

Verdict a7_determinism() {
    const auto root = fs::temp_directory_path() / ("rto-sim-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto scenario = test::bundled_scenario().string();
    auto invoke = [&](int parallelism, const fs::path& out) {
        const std::string cmd = std::string(RTO_SIM_BIN) + " run " + scenario + " --runs 100 --seed 42 --parallelism " +
                                std::to_string(parallelism) + " --out " + out.string() + " >/dev/null";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) && WEXITSTATUS(status) == 0;
    };
    if (!invoke(1, root / "p1") || !invoke(8, root / "p8")) return {false, "rto-sim run failed"};
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(root / "p1")) {
        const auto name = e.path().filename().string();
        if (name != "runs.csv" && name != "summary.json" && name.rfind("histogram_", 0) != 0) continue;
        ++files;
        if (!fs::exists(root / "p8" / name) || slurp(e.path()) != slurp(root / "p8" / name)) ++differing;
    }
    fs::remove_all(root);
    return {files > 2 && differing == 0,
            std::to_string(files) + " files compared, " + std::to_string(differing) + " differ"};
}

Verdict a8_lifecycle() {
    EngineOptions o;
    o.record_events = true;
    std::size_t violations = 0, events = 0;
    std::string first;
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
        const auto s = test::random_scenario(seed);
        const auto r = run_once(s, 0, seed, o);
        events += r.events.size();
        auto v = audit_event_log(r.events, s.horizon);
        if (!(r.n_po <= r.n_hl && r.n_hl <= r.n_pr)) v.push_back("counting processes out of order");
        if (!v.empty() && first.empty()) first = "seed " + std::to_string(seed) + ": " + v.front();
        violations += v.size();
    }
    return {violations == 0,
            "100 scenarios, " + std::to_string(events) + " events, " + std::to_string(violations) + " violations" +
                (first.empty() ? "" : " (" + first + ")")};
}

Verdict a9_scale() {
    const auto root = fs::temp_directory_path() / ("rto-sim-acceptance-grid-" + std::to_string(::getpid()));
    fs::remove_all(root);
    CompareRequest req;
    req.scenario = test::bundled_scenario();
    req.policies = {PolicyKind::Naive, PolicyKind::Dynamic};
    req.slopes = {0.0, 0.01, 0.10};
    req.runs = 10000;
    req.seed = kSeed;
    req.parallelism = 4;
    req.out = root;
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    const int status = cmd_compare(req, out, err);
    const double secs = seconds_since(t0);
    fs::remove_all(root);
    return {status == kExitOk && secs < 600.0, "6 x 10000 runs in " + fmt(secs) + "s (exit " + std::to_string(status) + ")"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* id, const char* title, const Verdict& v) {
        std::cout << id << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << title << ": " << v.detail << std::endl;
        if (!v.pass) ++failures;
    };
    report("A1", "sampler fidelity", a1_sampler());
    report("A2", "renewal accumulation", a2_renewal());
    report("A3", "allocation optimality", a3_allocation());
    const auto t0 = Clock::now();
    const auto cells = grid(1000);
    const double grid_secs = seconds_since(t0);
    report("A4", "policy cost ordering", a4_ordering(cells, grid_secs));
    report("A5", "competition convergence", a5_convergence(cells));
    report("A6", "compliance shape", a6_compliance(cells));
    report("A7", "determinism", a7_determinism());
    report("A8", "lifecycle invariants", a8_lifecycle());
    report("A9", "scale", a9_scale());
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
