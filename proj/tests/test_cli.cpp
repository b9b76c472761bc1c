#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rto/commands.hpp"
#include "rto/output.hpp"
#include "rto/scenario_io.hpp"
#include "support.hpp"

using namespace rto;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("rto-sim-tests-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string without_key(const std::string& key) {
    auto doc = nlohmann::json::parse(slurp(test::bundled_scenario()));
    doc.erase(key);
    return doc.dump();
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(RTO_SIM_BIN) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> generation_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (line.find(",PRGeneration,") != std::string::npos) out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bundled scenario loads") {
    const auto s = test::bundled();
    CHECK(s.products.size() == 3);
    CHECK(s.suppliers.size() == 3);
    CHECK(s.contracts.size() == 3);
    CHECK(s.contracts[0].rates[0].unit_price == 11.0);
    CHECK(s.contracts[1].rates[0].unit_price == 11.0);
    CHECK(s.contracts[2].rates[0].unit_price == 12.0);
    CHECK(s.contracts[0].valid_to == 182.5);
    CHECK(s.contracts[2].valid_to == 365.0);
}

TEST_CASE("scenario survives a json round trip") {
    const auto s = test::bundled();
    CHECK(parse_scenario(scenario_to_json(s)) == s);
    const auto t = parse_scenario(std::string_view(scenario_to_json(s).dump()));
    CHECK(t == s);
}

TEST_CASE("defaults for optional sections") {
    auto doc = nlohmann::json::parse(slurp(test::bundled_scenario()));
    doc.erase("delays");
    doc.erase("policy");
    doc.erase("output");
    doc["spot"].erase("noise_sd");
    const auto s = parse_scenario(doc);
    CHECK(s.delays.creation_to_approval == 2.0);
    CHECK(s.delays.approval_to_handling == 5.0);
    CHECK(s.delays.rfq_response == std::vector<double>{2.5, 2.5, 2.5});
    CHECK(s.delays.handling_to_po == 0.1);
    CHECK(s.policy.po_overhead == 10.0);
    CHECK(s.spot.noise_sd == 1.0);
    CHECK(s.output.histogram_bins == 100);
}

TEST_CASE("missing horizon names the field") {
    try {
        parse_scenario(std::string_view(without_key("horizon")));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.path() == "horizon");
        CHECK(std::string(e.what()).find("horizon") != std::string::npos);
    }
}

TEST_CASE("unknown schema version") {
    auto doc = nlohmann::json::parse(slurp(test::bundled_scenario()));
    doc["schema_version"] = 7;
    try {
        parse_scenario(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("unsupported schema") != std::string::npos);
    }
}

TEST_CASE("invalid scenarios are rejected") {
    auto base = test::bundled();
    SUBCASE("overlapping contracts") {
        auto s = base;
        auto dup = s.contracts[0];
        dup.valid_from = 100.0;
        dup.valid_to = 200.0;
        s.contracts.push_back(dup);
        CHECK_THROWS_AS(validate_scenario(s), ValidationError);
    }
    SUBCASE("empty validity") {
        auto s = base;
        s.contracts[0].valid_to = s.contracts[0].valid_from;
        CHECK_THROWS_AS(validate_scenario(s), ValidationError);
    }
    SUBCASE("ineligible contracted supplier") {
        auto s = base;
        s.categories[0].eligible_suppliers.pop_back();
        CHECK_THROWS_AS(validate_scenario(s), ValidationError);
    }
    SUBCASE("too many suppliers in a category") {
        CHECK_THROWS_AS(test::small_world(1, 13), ValidationError);
    }
    SUBCASE("requisition with zero quantity") {
        Requisition pr;
        pr.category = CategoryIndex{0};
        pr.items = {{ProductIndex{0}, true, 0}, {ProductIndex{1}, false, 0}, {ProductIndex{2}, false, 0}};
        CHECK_THROWS_AS(validate_requisition(base, pr), ValidationError);
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(10548.66084321) == "10548.6608");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(round_significant(1.0 / 3.0) == 0.333333333);
}

TEST_CASE("seed precedence") {
    auto s = test::bundled();
    s.runs.master_seed = 5;
    CHECK(resolve_seed(9, s) == 9);
    CHECK(resolve_seed(std::nullopt, s) == 5);
    s.runs.master_seed.reset();
    ::setenv("RTO_SIM_SEED", "77", 1);
    CHECK(resolve_seed(std::nullopt, s) == 77);
    ::unsetenv("RTO_SIM_SEED");
    CHECK(resolve_seed(std::nullopt, s) == 0);
}

TEST_CASE("run writes stable outputs") {
    const auto a = scratch("run-a"), b = scratch("run-b");
    std::ostringstream out, err;
    RunRequest req;
    req.scenario = test::bundled_scenario();
    req.runs = 100;
    req.seed = 42;
    req.parallelism = 1;
    req.out = a;
    REQUIRE(cmd_run(req, out, err) == kExitOk);
    CHECK(out.str().find("mean_cost=") != std::string::npos);
    CHECK(out.str().find("mean_util_C=") != std::string::npos);
    req.out = b;
    req.parallelism = 8;
    REQUIRE(cmd_run(req, out, err) == kExitOk);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        INFO(name.string());
        CHECK(slurp(entry.path()) == slurp(b / name));
    }
    CHECK(fs::exists(a / "histogram_terminal_cost.csv"));
    CHECK(slurp(a / "runs.csv").rfind("run_index,terminal_cost,V_A,u_A,d_A", 0) == 0);
    CHECK(slurp(a / "histogram_terminal_cost.csv").rfind("bin_left,bin_right,count\n", 0) == 0);
}

TEST_CASE("overrides reach the batch") {
    const auto dir = scratch("override");
    std::ostringstream out, err;
    RunRequest req;
    req.scenario = test::bundled_scenario();
    req.runs = 5;
    req.policy = PolicyKind::Dynamic;
    req.competition_slope = 0.10;
    req.out = dir;
    REQUIRE(cmd_run(req, out, err) == kExitOk);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["policy"] == "dynamic");
    CHECK(summary["competition_slope"] == 0.1);
    CHECK(summary["runs"] == 5);
}

TEST_CASE("usage errors") {
    std::ostringstream out, err;
    RunRequest req;
    req.scenario = test::bundled_scenario();
    req.runs = 0;
    req.out = scratch("zero");
    CHECK(cmd_run(req, out, err) == kExitUsage);
    CHECK_FALSE(fs::exists(scratch("zero")));

    CHECK(run_cli("run " + test::bundled_scenario().string() + " --runs 0") == kExitUsage);
    CHECK(run_cli("run " + test::bundled_scenario().string() + " --policy greedy") == kExitUsage);
    CHECK(run_cli("frobnicate") == kExitUsage);
    CHECK(run_cli("validate " + test::bundled_scenario().string()) == kExitOk);
    CHECK(run_cli("validate /nonexistent/scenario.json") == kExitFailure);
}

TEST_CASE("invalid scenario leaves no output behind") {
    const auto bad = scratch("bad-input");
    fs::create_directories(bad);
    std::ofstream(bad / "s.json") << without_key("horizon");
    std::ostringstream out, err;
    RunRequest req;
    req.scenario = bad / "s.json";
    req.out = bad / "out";
    CHECK(cmd_run(req, out, err) == kExitFailure);
    CHECK_FALSE(fs::exists(bad / "out"));
    CHECK(err.str().find("horizon") != std::string::npos);
}

TEST_CASE("compare grid shares demand across cells") {
    const auto dir = scratch("compare");
    std::ostringstream out, err;
    CompareRequest req;
    req.scenario = test::bundled_scenario();
    req.policies = {PolicyKind::Naive, PolicyKind::Dynamic};
    req.slopes = {0.0, 0.01, 0.10};
    req.runs = 4;
    req.seed = 3;
    req.out = dir;
    req.export_events = true;
    REQUIRE(cmd_compare(req, out, err) == kExitOk);
    const auto table = slurp(dir / "comparison.csv");
    CHECK(std::count(table.begin(), table.end(), '\n') == 7);
    std::vector<fs::path> cells;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) cells.push_back(e.path());
    }
    REQUIRE(cells.size() == 6);
    for (int run = 0; run < 4; ++run) {
        const auto file = "events_" + std::to_string(run) + ".csv";
        const auto reference = generation_lines(slurp(cells[0] / file));
        CHECK_FALSE(reference.empty());
        for (const auto& cell : cells) CHECK(generation_lines(slurp(cell / file)) == reference);
    }
}

TEST_CASE("self comparison gives identical cells") {
    const auto dir = scratch("self");
    std::ostringstream out, err;
    CompareRequest req;
    req.scenario = test::bundled_scenario();
    req.policies = {PolicyKind::Dynamic, PolicyKind::Dynamic};
    req.slopes = {0.01};
    req.runs = 30;
    req.out = dir;
    REQUIRE(cmd_compare(req, out, err) == kExitOk);
    CHECK(slurp(dir / "cell0_dynamic_slope0.01" / "runs.csv") == slurp(dir / "cell1_dynamic_slope0.01" / "runs.csv"));
    CHECK(slurp(dir / "cell0_dynamic_slope0.01" / "histogram_terminal_cost.csv") ==
          slurp(dir / "cell1_dynamic_slope0.01" / "histogram_terminal_cost.csv"));

    req.policies = {PolicyKind::Naive};
    req.slopes = {0.0};
    CHECK(cmd_compare(req, out, err) == kExitUsage);
}

}
