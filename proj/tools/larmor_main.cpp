#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "larmor/cli/runner.hpp"

using namespace larmor::cli;

namespace {

void print_report(const RunReport& r) {
    for (const auto& c : r.checks) {
        std::printf("  [%s] %-24s defect=%.3e tol=%.3e%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.defect,
                    c.tolerance, c.note.empty() ? "" : "  ", c.note.c_str());
    }
    std::printf("%s %s (%s, %zu checks, %.2f s)\n", r.passed() ? "PASS" : "FAIL", r.scenario.c_str(),
                to_string(r.mode).c_str(), r.checks.size(), r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Charged particle in electromagnetic fields: canonical reductions and their checks"};
    app.require_subcommand(1);

    std::vector<std::string> configs;
    RunOptions options;
    int threads = 1;
    CLI::App* run_cmd = app.add_subcommand("run", "Run scenarios from YAML configuration files");
    run_cmd->add_option("config", configs, "Scenario files")->required()->check(CLI::ExistingFile);
    run_cmd->add_flag("--check-only", options.check_only, "Run the checks without writing artifacts");
    run_cmd->add_option("--out-dir", options.out_dir, "Directory for CSV artifacts")->capture_default_str();
    run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--tolerance-scale", options.tolerance_scale, "Multiplier applied to every tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    std::vector<Scenario> scenarios;
    try {
        for (const auto& path : configs) {
            for (auto& s : parse_scenarios(path)) scenarios.push_back(std::move(s));
        }
    } catch (const ScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::set<std::string> names;
    std::set<std::string> prefixes;
    for (const auto& s : scenarios) {
        if (!names.insert(s.name).second) {
            std::fprintf(stderr, "error: %s: duplicate scenario name '%s'\n", s.source.c_str(), s.name.c_str());
            return 2;
        }
        if (!prefixes.insert(s.output_prefix).second) {
            std::fprintf(stderr, "error: %s: duplicate output prefix '%s'\n", s.source.c_str(), s.output_prefix.c_str());
            return 2;
        }
    }

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(scenarios.size())));
    options.inner_threads = scenarios.size() == 1 ? threads : 1;
    std::vector<RunReport> reports(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                reports[i] = run(scenarios[i], options);
            } catch (const std::exception& e) {
                reports[i].scenario = scenarios[i].name;
                reports[i].mode = scenarios[i].mode;
                reports[i].checks.push_back({"run", std::numeric_limits<double>::infinity(), 0.0, false, e.what()});
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < workers; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(reports.begin(), reports.end(),
              [](const RunReport& a, const RunReport& b) { return a.scenario < b.scenario; });
    bool ok = true;
    for (const auto& r : reports) {
        print_report(r);
        ok = ok && r.passed();
    }
    std::printf("%zu scenario(s), %s\n", reports.size(), ok ? "all checks passed" : "some checks failed");
    return ok ? 0 : 1;
}
