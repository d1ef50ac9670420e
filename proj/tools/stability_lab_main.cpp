#include <cstdio>
#include <future>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stablab/errors.hpp"
#include "stablab/experiment.hpp"

namespace {

void print_manifest(const stablab::RunManifest& man, bool quiet) {
    if (!quiet) {
        std::printf("%s:\n", man.config.scenario.c_str());
        for (const stablab::CheckResult& c : man.checks)
            std::printf("  %-36s %.6e %s %.6e : %s\n", c.name.c_str(), c.value,
                        c.comparison.c_str(), c.tolerance, c.passed ? "PASS" : "FAIL");
        if (!man.error.empty()) std::printf("  error: %s\n", man.error.c_str());
    }
    int passed = 0;
    for (const stablab::CheckResult& c : man.checks) passed += c.passed ? 1 : 0;
    std::printf("%s: %s (%d/%zu checks) -> %s\n", man.config.scenario.c_str(),
                man.all_passed ? "PASS" : "FAIL", passed, man.checks.size(),
                man.run_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for classical stability analysis and"
                 " its quantum-mechanical counterparts"};
    app.require_subcommand(1);

    std::string output_dir;
    bool quiet = false;
    app.add_option("--output-dir", output_dir,
                   "Root directory for run outputs (default: config file, then"
                   " $STABILITY_LAB_OUTPUT_DIR, then ./runs)");
    app.add_flag("--quiet", quiet, "Only print one summary line per scenario");

    CLI::App* run = app.add_subcommand("run", "Execute scenarios and write run directories");
    run->fallthrough();
    std::string config_path;
    std::vector<std::string> scenario_names;
    std::vector<std::string> overrides;
    run->add_option("--config", config_path, "TOML configuration file");
    run->add_option("--scenario", scenario_names, "Registered scenario name (repeatable)");
    run->add_option("--set", overrides, "Override, e.g. --set evolution.dt=5e-4 (repeatable)");

    CLI::App* list = app.add_subcommand("list", "List registered scenarios");
    list->fallthrough();

    CLI::App* plot = app.add_subcommand("plot-data", "Derive tidy plot/*.csv from a run directory");
    plot->fallthrough();
    std::string plot_dir;
    plot->add_option("run_dir", plot_dir, "Run directory containing manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const stablab::ScenarioInfo& info : stablab::list_scenarios())
                std::printf("%-22s %s\n", info.name.c_str(), info.description.c_str());
            return 0;
        }
        if (plot->parsed()) {
            stablab::emit_plot_data(plot_dir);
            return 0;
        }

        if (config_path.empty() == scenario_names.empty())
            throw stablab::ConfigError("run needs exactly one of --config or --scenario");
        std::vector<stablab::ScenarioConfig> configs;
        if (!config_path.empty()) {
            configs.push_back(stablab::parse_config_file(config_path));
        } else {
            for (const std::string& name : scenario_names)
                configs.push_back(stablab::default_config(name));
        }
        for (stablab::ScenarioConfig& cfg : configs)
            for (const std::string& kv : overrides) stablab::apply_override(cfg, kv);

        std::vector<stablab::RunManifest> manifests(configs.size());
        if (configs.size() == 1) {
            manifests[0] = stablab::run_scenario(configs[0], output_dir, /*quiet=*/true);
        } else {
            std::vector<std::future<stablab::RunManifest>> futures;
            futures.reserve(configs.size());
            for (const stablab::ScenarioConfig& cfg : configs)
                futures.push_back(std::async(std::launch::async, [&cfg, &output_dir] {
                    return stablab::run_scenario(cfg, output_dir, /*quiet=*/true);
                }));
            for (std::size_t i = 0; i < futures.size(); ++i) manifests[i] = futures[i].get();
        }

        bool all = true;
        for (const stablab::RunManifest& man : manifests) {
            print_manifest(man, quiet);
            all = all && man.all_passed;
        }
        return all ? 0 : 1;
    } catch (const stablab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
