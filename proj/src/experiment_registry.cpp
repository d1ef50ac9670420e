#include <cmath>
#include <string>
#include <vector>

#include "experiment_internal.hpp"
#include "stablab/errors.hpp"
#include "stablab/linalg.hpp"

namespace stablab {

namespace detail {

void ScenarioSink::check_le(const std::string& name, double value, double tolerance) {
    checks.push_back({name, value, tolerance, "<=", value <= tolerance});
}

void ScenarioSink::check_ge(const std::string& name, double value, double tolerance) {
    checks.push_back({name, value, tolerance, ">=", value >= tolerance});
}

void ScenarioSink::check_flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ">=", ok});
}

void ScenarioSink::diag(const std::string& name, double value) {
    diagnostics.emplace_back(name, value);
}

CsvTable& ScenarioSink::csv(const std::string& rel_path, std::vector<std::string> header) {
    csvs.push_back(CsvTable{rel_path, std::move(header), {}});
    return csvs.back();
}

WaveField gaussian_packet(const Grid1D& grid, double m, double hbar, double sigma0,
                          double center) {
    const double norm = std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25);
    const int n = grid.n_points;
    std::vector<std::complex<double>> psi(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid_x(grid, i) - center;
        psi[i] = norm * std::exp(-x * x / (4.0 * sigma0 * sigma0));
    }
    WaveField w;
    w.psi = make_field(grid, std::move(psi));
    w.m = m;
    w.hbar = hbar;
    w.t = 0.0;
    return w;
}

RealField zero_potential(const Grid1D& grid) {
    return make_field(grid, Vec(grid.n_points, 0.0));
}

RealField harmonic_potential(const Grid1D& grid, double m, double omega) {
    Vec u(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid_x(grid, i);
        u[i] = 0.5 * m * omega * omega * x * x;
    }
    return make_field(grid, std::move(u));
}

MadelungFields gaussian_madelung(const Grid1D& grid, double m, double hbar, double sigma,
                                 double s1, double s2) {
    const double norm = std::pow(2.0 * M_PI * sigma * sigma, -0.25);
    const int n = grid.n_points;
    Vec a(n), p(n), s(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid_x(grid, i);
        a[i] = norm * std::exp(-x * x / (4.0 * sigma * sigma));
        p[i] = a[i] * a[i];
        s[i] = s1 * x + s2 * x * x;
    }
    MadelungFields mf;
    mf.A = make_field(grid, std::move(a));
    mf.P = make_field(grid, std::move(p));
    mf.S = make_field(grid, std::move(s));
    mf.m = m;
    mf.hbar = hbar;
    mf.t = 0.0;
    return mf;
}

double density_mean(const RealField& p) {
    const Vec x = grid_points(p.grid);
    Vec v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = p.values[i] * x[i];
    return integrate(make_field(p.grid, std::move(v)));
}

double density_variance(const RealField& p) {
    const double mu = density_mean(p);
    const Vec x = grid_points(p.grid);
    Vec v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        v[i] = p.values[i] * (x[i] - mu) * (x[i] - mu);
    return integrate(make_field(p.grid, std::move(v)));
}

namespace {

struct RegistryEntry {
    const char* name;
    const char* description;
    ScenarioFn fn;
};

const RegistryEntry kRegistry[] = {
    {"free_packet",
     "Free Gaussian packet under Crank-Nicolson: spreading law, transport residuals with "
     "refinement orders, Bohm trajectory ensemble.",
     &run_free_packet},
    {"harmonic_ground",
     "Stationary oscillator ground state: quantum-potential oracle, unitarity over 10^4 steps, "
     "action-balance consistency.",
     &run_harmonic_ground},
    {"harmonic_coherent",
     "Displaced ground state over one period: center tracking, periodic return, discrete energy "
     "conservation.",
     &run_harmonic_coherent},
    {"variational_harmonic",
     "Harmonic variational flow by leapfrog: bilinear invariant, characteristic values, "
     "reduced-equation consistency.",
     &run_variational_harmonic},
    {"variational_free",
     "Free-particle variational and Hamilton-Jacobi identities: zero divergence, exact "
     "determinant law.",
     &run_variational_free},
    {"abel_check",
     "Determinant-vs-exponential identity on a caustic-free harmonic window plus closed-form "
     "divergence and its period average.",
     &run_abel_check},
    {"scale_covariance",
     "Dilatation covariance of uncertainty pairs and field functionals on Gaussian and compact "
     "bump states.",
     &run_scale_covariance},
    {"fisher_identities",
     "Fisher-information identities: integral equality, exact-uncertainty products, "
     "momentum-fluctuation conventions.",
     &run_fisher_identities},
};

}  // namespace

ScenarioFn find_scenario(const std::string& name) {
    for (const RegistryEntry& e : kRegistry)
        if (name == e.name) return e.fn;
    return nullptr;
}

}  // namespace detail

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const auto& e : detail::kRegistry) out.push_back({e.name, e.description});
    return out;
}

ScenarioConfig default_config(const std::string& scenario) {
    if (!detail::find_scenario(scenario)) throw UnknownScenarioError(scenario);
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    if (scenario == "free_packet") {
        cfg.grid = {-11.0, 11.0, 1101};
        cfg.evolution = {1e-3, 2000, 20};
        cfg.seeds = {-1.5, -0.5, 0.5, 1.5, 2.5};
    } else if (scenario == "harmonic_ground") {
        cfg.grid = {-8.0, 8.0, 1601};
        cfg.physics.omega = 1.0;
        cfg.evolution = {1e-3, 10000, 100};
        cfg.seeds = {-1.0, -0.5, 0.5, 1.0};
    } else if (scenario == "harmonic_coherent") {
        cfg.grid = {-6.0, 6.0, 1201};
        cfg.physics.omega = 1.0;
        cfg.evolution = {2.0 * M_PI / 6400.0, 6400, 64};
    } else if (scenario == "variational_harmonic") {
        cfg.physics.omega = 1.0;
        cfg.evolution = {1e-3, 62832, 10};
    } else if (scenario == "variational_free") {
        cfg.evolution = {1e-3, 1000, 10};
    } else if (scenario == "abel_check") {
        cfg.physics.omega = 1.0;
        cfg.evolution = {1e-4, 28415, 284};
    } else if (scenario == "scale_covariance") {
        cfg.grid = {-8.0, 8.0, 1601};
        cfg.alpha_list = {-2.0, -0.5, 0.5, 2.0};
    } else if (scenario == "fisher_identities") {
        cfg.grid = {-8.0, 8.0, 1601};
    }
    return cfg;
}

}  // namespace stablab
