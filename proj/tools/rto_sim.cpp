// rto-sim: Monte Carlo driver for the request-to-order procurement simulator.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rto/commands.hpp"
#include "rto/domain.hpp"
#include "rto/scenario_io.hpp"

namespace {

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulation of request-to-order procurement"};
    app.require_subcommand(1);

    rto::RunRequest run;
    std::string run_policy;
    std::string run_scenario;
    std::string run_out;
    auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo batch for one scenario");
    run_cmd->add_option("scenario", run_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--runs", run.runs, "Number of replications");
    run_cmd->add_option("--seed", run.seed, "Master seed (falls back to the file, then RTO_SIM_SEED)");
    run_cmd->add_option("--policy", run_policy, "Allocation policy")->check(CLI::IsMember({"naive", "dynamic"}));
    run_cmd->add_option("--competition-slope", run.competition_slope, "Spot-rate increase per unit requested")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--parallelism", run.parallelism, "Worker threads");
    run_cmd->add_option("--out", run_out, "Output directory");
    run_cmd->add_flag("--export-events", run.export_events, "Write events_<run>.csv for every run");

    rto::CompareRequest cmp;
    std::string cmp_scenario;
    std::string cmp_policies = "naive,dynamic";
    std::string cmp_slopes = "0,0.01,0.10";
    std::string cmp_out;
    auto* cmp_cmd = app.add_subcommand("compare", "Run a policy x competition grid under common random numbers");
    cmp_cmd->add_option("scenario", cmp_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--policies", cmp_policies, "Comma-separated policies")->capture_default_str();
    cmp_cmd->add_option("--slopes", cmp_slopes, "Comma-separated competition slopes")->capture_default_str();
    cmp_cmd->add_option("--runs", cmp.runs, "Replications per cell");
    cmp_cmd->add_option("--seed", cmp.seed, "Master seed shared by all cells");
    cmp_cmd->add_option("--parallelism", cmp.parallelism, "Worker threads");
    cmp_cmd->add_option("--out", cmp_out, "Output directory");
    cmp_cmd->add_flag("--export-events", cmp.export_events, "Write events_<run>.csv for every run of every cell");

    std::string validate_scenario;
    auto* val_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    val_cmd->add_option("scenario", validate_scenario, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rto::kExitUsage;
    }

    try {
        if (*run_cmd) {
            run.scenario = run_scenario;
            if (!run_policy.empty()) run.policy = rto::parse_policy_kind(run_policy);
            if (!run_out.empty()) run.out = run_out;
            return rto::cmd_run(run, std::cout, std::cerr);
        }
        if (*cmp_cmd) {
            cmp.scenario = cmp_scenario;
            for (const auto& p : split(cmp_policies)) cmp.policies.push_back(rto::parse_policy_kind(p));
            for (const auto& s : split(cmp_slopes)) cmp.slopes.push_back(std::stod(s));
            if (!cmp_out.empty()) cmp.out = cmp_out;
            return rto::cmd_compare(cmp, std::cout, std::cerr);
        }
        return rto::cmd_validate(validate_scenario, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return rto::kExitUsage;
    }
}
