#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stablab/experiment.hpp"
#include "stablab/grid.hpp"
#include "stablab/linalg.hpp"
#include "stablab/quantum.hpp"

namespace stablab::detail {

struct CsvTable {
    std::string rel_path;  // e.g. "series/width.csv"
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Mutable collector handed to a scenario; whatever has been recorded when an
// error escapes is still written out alongside the manifest.
struct ScenarioSink {
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<CsvTable> csvs;

    void check_le(const std::string& name, double value, double tolerance);
    void check_ge(const std::string& name, double value, double tolerance);
    void check_flag(const std::string& name, bool ok);
    void diag(const std::string& name, double value);
    CsvTable& csv(const std::string& rel_path, std::vector<std::string> header);
};

using ScenarioFn = void (*)(const ScenarioConfig&, ScenarioSink&);

// nullptr when the name is not registered.
ScenarioFn find_scenario(const std::string& name);

void run_free_packet(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_harmonic_ground(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_harmonic_coherent(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_variational_harmonic(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_variational_free(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_abel_check(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_scale_covariance(const ScenarioConfig& cfg, ScenarioSink& sink);
void run_fisher_identities(const ScenarioConfig& cfg, ScenarioSink& sink);

// Normalized Gaussian packet centered at `center` with position variance
// sigma0² in the density.
WaveField gaussian_packet(const Grid1D& grid, double m, double hbar, double sigma0, double center);

RealField zero_potential(const Grid1D& grid);
RealField harmonic_potential(const Grid1D& grid, double m, double omega);

// Madelung fields of a normalized Gaussian density with S = s1·x + s2·x².
MadelungFields gaussian_madelung(const Grid1D& grid, double m, double hbar, double sigma,
                                 double s1, double s2);

double density_mean(const RealField& p);
double density_variance(const RealField& p);

void validate_config(const ScenarioConfig& cfg);

}  // namespace stablab::detail
