#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "experiment_internal.hpp"
#include "json.hpp"
#include "stablab/errors.hpp"
#include "stablab/experiment.hpp"

namespace stablab {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& key, const std::string& raw) {
    // strtod instead of std::stod: subnormals (which %.17g output can contain)
    // must parse instead of raising out_of_range.
    const std::string v = trim(raw);
    const char* begin = v.c_str();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(begin, &end);
    if (end == begin) throw ConfigError("expected a number for " + key + ", got '" + v + "'");
    if (end != begin + v.size()) throw ConfigError("trailing characters after number for " + key);
    if (errno == ERANGE && (d == HUGE_VAL || d == -HUGE_VAL))
        throw ConfigError("number out of range for " + key);
    return d;
}

long parse_integer(const std::string& key, const std::string& raw) {
    const double d = parse_number(key, raw);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) != d) throw ConfigError(key + " must be an integer");
    return l;
}

std::string parse_string(const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (v.find('"') != std::string::npos)
        throw ConfigError("unbalanced quotes in value for " + key);
    return v;
}

std::vector<double> parse_array(const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError(key + " expects a [..] array");
    v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError("empty element in array for " + key);
        out.push_back(parse_number(key, t));
    }
    return out;
}

void apply_kv(ScenarioConfig& cfg, const std::string& key, const std::string& value,
              bool allow_scenario) {
    if (key == "scenario") {
        if (!allow_scenario)
            throw ConfigError("scenario is selected by --scenario/--config, not by override");
        cfg.scenario = parse_string(key, value);
    } else if (key == "grid.x_min") {
        cfg.grid.x_min = parse_number(key, value);
    } else if (key == "grid.x_max") {
        cfg.grid.x_max = parse_number(key, value);
    } else if (key == "grid.n_points") {
        cfg.grid.n_points = static_cast<int>(parse_integer(key, value));
    } else if (key == "physics.mass") {
        cfg.physics.mass = parse_number(key, value);
    } else if (key == "physics.hbar") {
        cfg.physics.hbar = parse_number(key, value);
    } else if (key == "physics.omega") {
        cfg.physics.omega = parse_number(key, value);
    } else if (key == "evolution.dt") {
        cfg.evolution.dt = parse_number(key, value);
    } else if (key == "evolution.n_steps") {
        cfg.evolution.n_steps = static_cast<int>(parse_integer(key, value));
    } else if (key == "evolution.snapshot_stride") {
        cfg.evolution.snapshot_stride = static_cast<int>(parse_integer(key, value));
    } else if (key == "seeds") {
        cfg.seeds = parse_array(key, value);
    } else if (key == "alpha_list") {
        cfg.alpha_list = parse_array(key, value);
    } else if (key == "rng_seed") {
        cfg.rng_seed = parse_integer(key, value);
    } else if (key == "output_dir") {
        cfg.output_dir = parse_string(key, value);
    } else {
        throw ConfigError("unknown configuration key: " + key);
    }
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(line_no));
            section = trim(body.substr(1, body.size() - 2));
            if (section != "grid" && section != "physics" && section != "evolution")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("empty key or value at line " + std::to_string(line_no));
        entries.emplace_back(section.empty() ? key : section + "." + key, value);
    }
    std::string scenario;
    for (const auto& [k, v] : entries)
        if (k == "scenario") scenario = parse_string(k, v);
    if (scenario.empty()) throw ConfigError("config does not name a scenario");
    ScenarioConfig cfg = default_config(scenario);
    for (const auto& [k, v] : entries)
        if (k != "scenario") apply_kv(cfg, k, v, false);
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& key_equals_value) {
    const std::size_t eq = key_equals_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: " + key_equals_value);
    const std::string key = trim(key_equals_value.substr(0, eq));
    const std::string value = trim(key_equals_value.substr(eq + 1));
    if (key.empty() || value.empty())
        throw ConfigError("override must look like key=value: " + key_equals_value);
    apply_kv(cfg, key, value, false);
}

std::string resolve_output_root(const std::string& cli_override, const std::string& config_dir) {
    if (!cli_override.empty()) return cli_override;
    if (!config_dir.empty()) return config_dir;
    if (const char* env = std::getenv("STABILITY_LAB_OUTPUT_DIR"); env && *env) return env;
    return "./runs";
}

namespace detail {

void validate_config(const ScenarioConfig& cfg) {
    if (!(cfg.grid.x_max > cfg.grid.x_min))
        throw ConfigError("grid.x_max must exceed grid.x_min");
    if (cfg.grid.n_points < 8) throw ConfigError("grid.n_points must be >= 8");
    if (!(cfg.physics.mass > 0.0)) throw ConfigError("physics.mass must be positive");
    if (!(cfg.physics.hbar > 0.0)) throw ConfigError("physics.hbar must be positive");
    if (cfg.physics.omega && !(*cfg.physics.omega > 0.0))
        throw ConfigError("physics.omega must be positive");
    if (!(cfg.evolution.dt > 0.0)) throw ConfigError("evolution.dt must be positive");
    if (cfg.evolution.n_steps < 0) throw ConfigError("evolution.n_steps must be >= 0");
    if (cfg.evolution.snapshot_stride < 1)
        throw ConfigError("evolution.snapshot_stride must be >= 1");
}

}  // namespace detail

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    char buf[40];
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw IoError("row width differs from header width in " + path);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(trim(cell));
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_number("csv cell", cell));
        if (row.size() != header.size()) throw IoError("ragged csv row in " + path);
        rows.push_back(std::move(row));
    }
    return {std::move(header), std::move(rows)};
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["artifact"] = {{"name", kArtifactName}, {"version", manifest.version}};
    j["scenario"] = manifest.config.scenario;
    nlohmann::ordered_json cfg;
    cfg["scenario"] = manifest.config.scenario;
    cfg["grid"] = {{"x_min", manifest.config.grid.x_min},
                   {"x_max", manifest.config.grid.x_max},
                   {"n_points", manifest.config.grid.n_points}};
    nlohmann::ordered_json physics;
    physics["mass"] = manifest.config.physics.mass;
    physics["hbar"] = manifest.config.physics.hbar;
    if (manifest.config.physics.omega)
        physics["omega"] = *manifest.config.physics.omega;
    else
        physics["omega"] = nullptr;
    cfg["physics"] = physics;
    cfg["evolution"] = {{"dt", manifest.config.evolution.dt},
                        {"n_steps", manifest.config.evolution.n_steps},
                        {"snapshot_stride", manifest.config.evolution.snapshot_stride}};
    cfg["seeds"] = manifest.config.seeds;
    cfg["alpha_list"] = manifest.config.alpha_list;
    cfg["rng_seed"] = manifest.config.rng_seed;
    cfg["output_dir"] = manifest.config.output_dir;
    j["config"] = cfg;
    j["rng"] = manifest.rng;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["run_dir"] = manifest.run_dir;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : manifest.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"comparison", c.comparison},
                          {"passed", c.passed}});
    j["checks"] = checks;
    nlohmann::ordered_json diags;
    for (const auto& [name, value] : manifest.diagnostics) diags[name] = value;
    j["diagnostics"] = diags;
    j["error"] = manifest.error;
    j["all_passed"] = manifest.all_passed;
    return j.dump(2) + "\n";
}

}  // namespace stablab
