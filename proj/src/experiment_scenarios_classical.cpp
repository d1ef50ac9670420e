#include <cmath>
#include <random>
#include <vector>

#include "experiment_internal.hpp"
#include "stablab/classical.hpp"
#include "stablab/errors.hpp"

namespace stablab::detail {

namespace {

std::vector<std::pair<double, double>> exponential_samples(double rate, double t_end, int n) {
    std::vector<std::pair<double, double>> s(n);
    for (int i = 0; i < n; ++i) {
        const double t = t_end * i / (n - 1);
        s[i] = {t, std::exp(rate * t)};
    }
    return s;
}

}  // namespace

void run_variational_harmonic(const ScenarioConfig& cfg, ScenarioSink& sink) {
    const double m = cfg.physics.mass;
    const double omega = cfg.physics.omega.value_or(1.0);
    const HamiltonianSystem sys = harmonic_system(m, omega);
    validate_hamiltonian_system(sys, {{0.4}, {-1.1}});

    // Reference orbit plus two variational solutions, integrated jointly by
    // leapfrog: state = (q, xi1, xi2 | p, eta1, eta2).
    const OdeState y0 = {1.0, 1.0, 0.0, 0.0, 0.0, 1.0};
    OdeStepperSpec spec;
    spec.method = OdeMethod::leapfrog;
    spec.dt = cfg.evolution.dt;
    const OdeSolution sol = ode_solve(joint_variational_rhs(sys, 2), y0, spec,
                                      cfg.evolution.n_steps);

    auto v1_at = [&](std::size_t k) {
        return VariationalState{{sol.states[k][1]}, {sol.states[k][4]}};
    };
    auto v2_at = [&](std::size_t k) {
        return VariationalState{{sol.states[k][2]}, {sol.states[k][5]}};
    };

    const double c0 = bilinear_invariant(v1_at(0), v2_at(0));
    double invariant_drift = 0.0;
    double energy_drift = 0.0;
    const double e0 = hamiltonian(sys, {sol.states[0][0]}, {sol.states[0][3]});
    std::vector<std::pair<double, double>> xi_samples;
    CsvTable& itab = sink.csv("series/invariant.csv", {"t", "c12", "energy"});
    for (std::size_t k = 0; k < sol.states.size(); ++k) {
        const double c = bilinear_invariant(v1_at(k), v2_at(k));
        invariant_drift = std::max(invariant_drift, std::fabs(c - c0));
        const double e = hamiltonian(sys, {sol.states[k][0]}, {sol.states[k][3]});
        energy_drift = std::max(energy_drift, std::fabs(e - e0));
        if (k % cfg.evolution.snapshot_stride == 0) {
            itab.rows.push_back({sol.t[k], c, e});
            xi_samples.emplace_back(sol.t[k], std::fabs(sol.states[k][1]));
        }
    }
    sink.check_le("bilinear_invariant_drift", invariant_drift, 1e-8);
    sink.check_le("energy_drift", energy_drift, 1e-6);
    {
        const std::size_t last = sol.states.size() - 1;
        const double self = std::fabs(bilinear_invariant(v1_at(last), v1_at(last)));
        const double anti = std::fabs(bilinear_invariant(v1_at(last), v2_at(last)) +
                                      bilinear_invariant(v2_at(last), v1_at(last)));
        sink.check_le("bilinear_antisymmetry", self + anti, 1e-15);
    }

    sink.check_le("lyapunov_oscillating", std::fabs(lyapunov_characteristic_value(xi_samples)),
                  0.05);
    sink.check_le("lyapunov_growing",
                  std::fabs(lyapunov_characteristic_value(exponential_samples(2.0, 10.0, 1001)) -
                            (-2.0)),
                  1e-3);
    sink.check_le("lyapunov_decaying",
                  std::fabs(lyapunov_characteristic_value(exponential_samples(-3.0, 10.0, 1001)) -
                            3.0),
                  1e-3);

    {
        // Constrained perturbations: eta = S_qq xi must reduce the full
        // variational system to the first-order equation in xi alone.
        const CompleteIntegral ci = harmonic_integral(m, omega, 1.0);
        const double q_turn = std::sqrt(2.0 / m) / omega;
        std::mt19937 gen(static_cast<std::mt19937::result_type>(cfg.rng_seed));
        std::uniform_real_distribution<double> uq(-0.8 * q_turn, 0.8 * q_turn);
        std::uniform_real_distribution<double> uxi(-2.0, 2.0);
        std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI / omega);
        double reduced_err = 0.0, trace_err = 0.0, hj_err = 0.0, wave_err = 0.0;
        const WaveProfile profile{[](double s) { return 0.7 * std::cos(0.7 * s); },
                                  [](double s) { return -0.49 * std::sin(0.7 * s); }};
        for (int it = 0; it < 100; ++it) {
            const double t = ut(gen);
            const Vec q{uq(gen)};
            const Vec xi{uxi(gen)};
            const Vec reduced = reduced_variational_rhs(sys, ci, t, q, xi);
            const Vec eta = constrain_eta(ci, t, q, xi);
            const Vec p = ci.dS_dq(t, q, ci.alpha);
            const VariationalState d = variational_rhs(sys, PhasePoint{q, p, t}, {xi, eta});
            reduced_err = std::max(reduced_err, std::fabs(reduced[0] - d.xi[0]));
            const Mat a = reduced_variational_matrix(sys, ci, t, q);
            trace_err = std::max(trace_err,
                                 std::fabs(stability_divergence(sys, ci, t, q) - a[0][0]));
            hj_err = std::max(hj_err, std::fabs(hj_residual(sys, ci, t, q)));
            const double r = wave_equation_residual(sys, ci, profile, t, q);
            const double expected = profile.first_derivative(ci.S(t, q, ci.alpha)) *
                                    stability_divergence(sys, ci, t, q);
            wave_err = std::max(wave_err, std::fabs(r - expected));
        }
        sink.check_le("reduced_consistency", reduced_err, 1e-10);
        sink.check_le("trace_identity", trace_err, 1e-12);
        sink.check_le("hj_residual_max", hj_err, 1e-10);
        sink.check_le("wave_residual_consistency", wave_err, 1e-10);
    }
}

void run_variational_free(const ScenarioConfig& cfg, ScenarioSink& sink) {
    const double m = cfg.physics.mass;
    const HamiltonianSystem sys = free_system(m);
    validate_hamiltonian_system(sys, {{0.4}, {-1.1}});
    const double alpha = 0.7;
    const CompleteIntegral ci = free_particle_integral(m, alpha);
    validate_complete_integral(ci, {{0.0, {0.3}}, {1.7, {-2.2}}});

    std::mt19937 gen(static_cast<std::mt19937::result_type>(cfg.rng_seed));
    std::uniform_real_distribution<double> uq(-5.0, 5.0);
    std::uniform_real_distribution<double> ut(0.0, 3.0);
    const WaveProfile profile{[](double s) { return std::cos(s); },
                              [](double s) { return -std::sin(s); }};
    double l_max = 0.0, hj_max = 0.0, wave_max = 0.0, reduced_max = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double t = ut(gen);
        const Vec q{uq(gen)};
        l_max = std::max(l_max, std::fabs(stability_divergence(sys, ci, t, q)));
        hj_max = std::max(hj_max, std::fabs(hj_residual(sys, ci, t, q)));
        wave_max = std::max(wave_max, std::fabs(wave_equation_residual(sys, ci, profile, t, q)));
        reduced_max =
            std::max(reduced_max, std::fabs(reduced_variational_rhs(sys, ci, t, q, {1.0})[0]));
    }
    sink.check_le("stability_divergence_max", l_max, 1e-12);
    sink.check_le("hj_residual_max", hj_max, 1e-14);
    sink.check_le("wave_residual_max", wave_max, 1e-14);
    sink.check_le("reduced_rhs_max", reduced_max, 1e-14);

    {
        const VariationalState d =
            variational_rhs(sys, PhasePoint{{0.3}, {0.5}, 0.0}, {{0.0}, {1.0}});
        sink.check_le("momentum_to_position_coupling",
                      std::fabs(d.xi[0] - 1.0 / m) + std::fabs(d.eta[0]), 1e-15);
    }

    {
        OdeStepperSpec spec;
        spec.dt = cfg.evolution.dt;
        const std::vector<PhasePoint> traj =
            hamilton_flow(sys, PhasePoint{{0.0}, {alpha}, 0.0}, spec, cfg.evolution.n_steps);
        const AbelCheck abel = abel_determinant_check(sys, ci, traj, {{1.0}});
        sink.check_le("abel_rel_err", abel.max_rel_err, 1e-12);
        CsvTable& atab = sink.csv("series/abel_free.csv", {"t", "det_w", "exp_int_l", "rel_err"});
        for (std::size_t k = 0; k < abel.t.size(); k += cfg.evolution.snapshot_stride)
            atab.rows.push_back({abel.t[k], abel.det_w[k], abel.abel_rhs[k], abel.rel_err[k]});
    }

    {
        std::vector<std::pair<double, double>> flat(100);
        for (int i = 0; i < 100; ++i) flat[i] = {0.05 * i, 1.0};
        sink.check_le("lyapunov_constant", std::fabs(lyapunov_characteristic_value(flat)),
                      1e-12);
    }
}

void run_abel_check(const ScenarioConfig& cfg, ScenarioSink& sink) {
    const double m = cfg.physics.mass;
    const double omega = cfg.physics.omega.value_or(1.0);
    const double alpha = 1.0;
    const HamiltonianSystem sys = harmonic_system(m, omega);
    const CompleteIntegral ci_minus = harmonic_integral(m, omega, alpha, -1);
    const CompleteIntegral ci_plus = harmonic_integral(m, omega, alpha, +1);

    const double t0 = (M_PI / 2.0 + 0.15) / omega;
    const double t_caustic = (3.0 * M_PI / 2.0 - 0.15) / omega;
    const double dt = cfg.evolution.dt;
    const int n_steps = cfg.evolution.n_steps;
    if (t0 + n_steps * dt > t_caustic + 1e-12)
        throw ConfigError("abel window would cross a caustic; reduce n_steps or dt");

    const double q_amp = std::sqrt(2.0 * alpha / m) / omega;
    const double p_amp = std::sqrt(2.0 * m * alpha);
    OdeStepperSpec spec;
    spec.dt = dt;
    const PhasePoint start{{q_amp * std::sin(omega * t0)}, {p_amp * std::cos(omega * t0)}, t0};
    const std::vector<PhasePoint> traj = hamilton_flow(sys, start, spec, n_steps);

    const AbelCheck abel = abel_determinant_check(sys, ci_minus, traj, {{1.0}});
    sink.check_le("abel_rel_err", abel.max_rel_err, 1e-6);
    CsvTable& atab = sink.csv("series/abel.csv", {"t", "det_w", "exp_int_l", "rel_err"});
    for (std::size_t k = 0; k < abel.t.size(); k += cfg.evolution.snapshot_stride)
        atab.rows.push_back({abel.t[k], abel.det_w[k], abel.abel_rhs[k], abel.rel_err[k]});

    {
        CsvTable& ltab = sink.csv("series/l_series.csv", {"t", "L", "L_closed_form"});
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const double l = stability_divergence(sys, ci_minus, traj[k].t, traj[k].q);
            const double ref = -omega * std::tan(omega * traj[k].t);
            worst = std::max(worst, std::fabs(l - ref));
            if (k % cfg.evolution.snapshot_stride == 0)
                ltab.rows.push_back({traj[k].t, l, ref});
        }
        sink.check_le("l_closed_form_max_err", worst, 1e-8);
    }

    {
        const double period = 2.0 * M_PI / omega;
        auto l_of_t = [&](double t) {
            const double c = std::cos(omega * t);
            const CompleteIntegral& ci = c >= 0.0 ? ci_plus : ci_minus;
            return stability_divergence(sys, ci, t, {q_amp * std::sin(omega * t)});
        };
        const double avg = symmetric_period_average(
            l_of_t, 0.0, period, 20000,
            {0.25 * period, 0.75 * period}, 1e-3 * period);
        sink.check_le("l_period_average", std::fabs(avg), 1e-6);
    }

    {
        bool rejected = false;
        try {
            (void)abel_determinant_check(sys, ci_minus, traj, {{0.0}});
        } catch (const NotIndependentError&) {
            rejected = true;
        }
        sink.check_flag("rejects_dependent_columns", rejected);
    }
}

}  // namespace stablab::detail
