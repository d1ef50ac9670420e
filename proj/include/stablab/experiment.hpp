#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stablab {

inline constexpr const char* kArtifactName = "stability-lab";
inline constexpr const char* kArtifactVersion = "1.0.0";

struct GridConfig {
    double x_min = -8.0;
    double x_max = 8.0;
    int n_points = 1601;
};

struct PhysicsConfig {
    double mass = 1.0;
    double hbar = 1.0;
    std::optional<double> omega;
};

struct EvolutionConfig {
    double dt = 1e-3;
    int n_steps = 1000;
    int snapshot_stride = 10;
};

struct ScenarioConfig {
    std::string scenario;
    GridConfig grid;
    PhysicsConfig physics;
    EvolutionConfig evolution;
    std::vector<double> seeds;       // Bohm seed positions
    std::vector<double> alpha_list;  // dilatation exponents
    long rng_seed = 42;
    std::string output_dir;          // empty: resolve via flag / env / ./runs
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparison = "<=";  // "<=" or ">="
    bool passed = false;
};

struct RunManifest {
    ScenarioConfig config;
    std::string version;
    std::string started_at;  // ISO-8601 UTC
    std::string finished_at;
    std::string rng;  // generator identity, e.g. "mt19937 seed 42"
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, double>> diagnostics;  // reported-only values
    std::string error;  // nonempty when the run aborted early
    bool all_passed = false;
    std::string run_dir;
};

// Fully-populated default configuration for a registered scenario.
ScenarioConfig default_config(const std::string& scenario);

// Line-oriented TOML subset: [sections], key = value, numeric arrays,
// quoted strings, # comments.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

// "physics.mass=2.0", "grid.n_points=801", "seeds=[0.5,1.0]", ...
void apply_override(ScenarioConfig& cfg, const std::string& key_equals_value);

struct ScenarioInfo {
    std::string name;
    std::string description;
};

// Registry contents in stable order.
std::vector<ScenarioInfo> list_scenarios();

// Resolution order: cli_override, config output_dir, STABILITY_LAB_OUTPUT_DIR, "./runs".
std::string resolve_output_root(const std::string& cli_override, const std::string& config_dir);

// Executes the scenario end-to-end and writes manifest.json plus fields/*.csv
// and series/*.csv under <output_root>/<scenario>. Checks keep running after
// a failure; the manifest aggregates them.
RunManifest run_scenario(const ScenarioConfig& config, const std::string& output_root_override = "",
                         bool quiet = true);

// Derives the tidy plot/*.csv files from a completed run directory.
void emit_plot_data(const std::string& run_dir);

std::string manifest_json(const RunManifest& manifest);

// CSV with a header row, '.' decimal separator, 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::string& path);

}  // namespace stablab
