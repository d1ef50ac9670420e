#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "experiment_internal.hpp"
#include "json.hpp"
#include "stablab/errors.hpp"
#include "stablab/experiment.hpp"

namespace stablab {

namespace {

namespace fs = std::filesystem;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void print_check_line(const CheckResult& c) {
    std::printf("  %-36s %.6e %s %.6e : %s\n", c.name.c_str(), c.value, c.comparison.c_str(),
                c.tolerance, c.passed ? "PASS" : "FAIL");
}

// Copies src columns (by header name) of a run CSV into plot/<dst>, renaming
// the columns to out_header.
void project_csv(const fs::path& run_dir, const std::string& src_rel,
                 const std::string& dst_rel, const std::vector<std::string>& src_columns,
                 const std::vector<std::string>& out_header) {
    const auto [header, rows] = read_csv((run_dir / src_rel).string());
    std::vector<std::size_t> idx;
    for (const std::string& want : src_columns) {
        std::size_t j = header.size();
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == want) j = k;
        if (j == header.size())
            throw IoError("column '" + want + "' missing from " + src_rel);
        idx.push_back(j);
    }
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> r;
        r.reserve(idx.size());
        for (std::size_t j : idx) r.push_back(row[j]);
        out.push_back(std::move(r));
    }
    write_csv((run_dir / dst_rel).string(), out_header, out);
}

void copy_csv(const fs::path& run_dir, const std::string& src_rel, const std::string& dst_rel) {
    const auto [header, rows] = read_csv((run_dir / src_rel).string());
    write_csv((run_dir / dst_rel).string(), header, rows);
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& config, const std::string& output_root_override,
                         bool quiet) {
    const detail::ScenarioFn fn = detail::find_scenario(config.scenario);
    if (fn == nullptr)
        throw UnknownScenarioError("unknown scenario '" + config.scenario + "'");
    detail::validate_config(config);

    const std::string root = resolve_output_root(output_root_override, config.output_dir);
    const fs::path run_dir = fs::path(root) / config.scenario;
    std::error_code ec;
    fs::create_directories(run_dir / "fields", ec);
    fs::create_directories(run_dir / "series", ec);
    if (!fs::is_directory(run_dir))
        throw IoError("cannot create run directory " + run_dir.string());

    RunManifest manifest;
    manifest.config = config;
    manifest.version = kArtifactVersion;
    manifest.started_at = utc_timestamp();
    manifest.rng = "mt19937 seed " + std::to_string(config.rng_seed);
    manifest.run_dir = run_dir.string();

    detail::ScenarioSink sink;
    try {
        fn(config, sink);
    } catch (const Error& e) {
        manifest.error = e.what();
    } catch (const std::exception& e) {
        manifest.error = std::string("unexpected failure: ") + e.what();
    }

    for (const detail::CsvTable& table : sink.csvs)
        write_csv((run_dir / table.rel_path).string(), table.header, table.rows);

    manifest.checks = sink.checks;
    manifest.diagnostics = sink.diagnostics;
    manifest.finished_at = utc_timestamp();
    manifest.all_passed = manifest.error.empty();
    for (const CheckResult& c : manifest.checks)
        if (!c.passed) manifest.all_passed = false;

    {
        std::ofstream out(run_dir / "manifest.json", std::ios::binary);
        if (!out) throw IoError("cannot write " + (run_dir / "manifest.json").string());
        out << manifest_json(manifest);
    }

    if (!quiet) {
        std::printf("%s:\n", config.scenario.c_str());
        for (const CheckResult& c : manifest.checks) print_check_line(c);
        if (!manifest.error.empty())
            std::printf("  error: %s\n", manifest.error.c_str());
        std::printf("  => %s\n", manifest.all_passed ? "ALL PASSED" : "FAILED");
    }
    return manifest;
}

void emit_plot_data(const std::string& run_dir_in) {
    const fs::path run_dir(run_dir_in);
    const fs::path manifest_path = run_dir / "manifest.json";
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + manifest_path.string() + ": " + e.what());
    }
    const std::string scenario = j.value("scenario", "");

    std::error_code ec;
    fs::create_directories(run_dir / "plot", ec);

    if (scenario == "free_packet") {
        copy_csv(run_dir, "series/width.csv", "plot/width.csv");
        project_csv(run_dir, "fields/residuals_fine.csv", "plot/residuals.csv",
                    {"x", "continuity", "quantum_hj"}, {"x", "continuity", "quantum_hj"});
        // long-form trajectories: one (t, seed, x) row per sample; the seed
        // column repeats each trajectory's starting position.
        const auto [header, rows] = read_csv((run_dir / "series/bohm.csv").string());
        std::vector<std::vector<double>> out;
        if (!rows.empty()) {
            for (std::size_t s = 1; s < header.size(); ++s)
                for (const auto& row : rows) out.push_back({row[0], rows[0][s], row[s]});
        }
        write_csv((run_dir / "plot/bohm.csv").string(), {"t", "seed", "x"}, out);
    } else if (scenario == "harmonic_ground") {
        copy_csv(run_dir, "fields/q_profile.csv", "plot/q_profile.csv");
    } else if (scenario == "harmonic_coherent") {
        copy_csv(run_dir, "series/center.csv", "plot/center.csv");
    } else if (scenario == "variational_harmonic") {
        copy_csv(run_dir, "series/invariant.csv", "plot/invariant.csv");
    } else if (scenario == "variational_free") {
        copy_csv(run_dir, "series/abel_free.csv", "plot/abel_free.csv");
    } else if (scenario == "abel_check") {
        project_csv(run_dir, "series/abel.csv", "plot/abel.csv",
                    {"t", "det_w", "exp_int_l", "rel_err"},
                    {"t", "detW", "exp_int_L", "rel_err"});
        copy_csv(run_dir, "series/l_series.csv", "plot/l_series.csv");
    } else if (scenario == "scale_covariance") {
        const auto [header, rows] = read_csv((run_dir / "series/scale.csv").string());
        std::vector<std::vector<double>> out;
        for (const auto& row : rows)
            if (row[0] == 0.0)
                out.push_back({row[1], row[5], row[6], row[7], row[8]});
        write_csv((run_dir / "plot/scale.csv").string(),
                  {"alpha", "dx2", "dp2q", "product", "residual_3_9"}, out);
    } else if (scenario == "fisher_identities") {
        copy_csv(run_dir, "series/uncertainty.csv", "plot/uncertainty.csv");
        copy_csv(run_dir, "series/pq_identity.csv", "plot/pq_identity.csv");
    } else {
        throw UnknownScenarioError("run directory reports unknown scenario '" + scenario + "'");
    }
}

}  // namespace stablab
