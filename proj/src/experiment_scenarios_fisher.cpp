#include <cmath>
#include <string>
#include <vector>

#include "experiment_internal.hpp"
#include "stablab/errors.hpp"
#include "stablab/fisher.hpp"
#include "stablab/quantum.hpp"

namespace stablab::detail {

namespace {

// Compactly supported smooth density: P(x) ~ cos^4(pi x / 2w) on [-w, w].
MadelungFields bump_state(const Grid1D& grid, double m, double hbar, double width) {
    MadelungFields mf;
    mf.m = m;
    mf.hbar = hbar;
    mf.P = RealField{grid, std::vector<double>(grid.n_points, 0.0)};
    mf.A = mf.P;
    mf.S = mf.P;
    // normalization: integral of cos^4(pi u/2) over [-1, 1] equals 3/4.
    const double norm = 1.0 / (0.75 * width);
    for (int i = 0; i < grid.n_points; ++i) {
        const double u = grid_x(grid, i) / width;
        if (std::fabs(u) < 1.0) {
            const double c = std::cos(0.5 * M_PI * u);
            mf.P.values[i] = norm * c * c * c * c;
            mf.S.values[i] = 0.3 * grid_x(grid, i) * grid_x(grid, i);
        }
        mf.A.values[i] = std::sqrt(mf.P.values[i]);
    }
    return mf;
}

}  // namespace

void run_scale_covariance(const ScenarioConfig& cfg, ScenarioSink& sink) {
    const double m = cfg.physics.mass;
    const double hbar = cfg.physics.hbar;
    const double quarter = 0.25 * hbar * hbar;
    const std::vector<double>& alphas = cfg.alpha_list;

    // Uncertainty-product map on moment pairs.
    {
        const UncertaintyPair u0{1.3, 0.9, hbar};
        double map_err = 0.0, group_err = 0.0;
        for (double a : alphas) {
            const UncertaintyPair ua = scale_transform(u0, ScaleParameter{a});
            const double expected = std::exp(-2.0 * a) * u0.dx2 * u0.dp2 +
                                    quarter * (1.0 - std::exp(-2.0 * a));
            map_err = std::max(map_err, std::fabs(ua.dx2 * ua.dp2 - expected));
            for (double b : alphas) {
                const UncertaintyPair uab = scale_transform(ua, ScaleParameter{b});
                const UncertaintyPair u_sum = scale_transform(u0, ScaleParameter{a + b});
                group_err = std::max(group_err, std::fabs(uab.dx2 - u_sum.dx2) +
                                                    std::fabs(uab.dp2 - u_sum.dp2));
            }
        }
        sink.check_le("product_map_exact", map_err, 1e-12);
        sink.check_le("group_property", group_err, 1e-12);

        const UncertaintyPair ufix{0.7, quarter / 0.7, hbar};
        double fix_err = 0.0;
        for (double a : alphas) {
            const UncertaintyPair uf = scale_transform(ufix, ScaleParameter{a});
            fix_err = std::max(fix_err, std::fabs(uf.dx2 * uf.dp2 - quarter));
        }
        sink.check_le("fixed_point_preserved", fix_err, 1e-12);

        const UncertaintyPair uid = scale_transform(u0, ScaleParameter{0.0});
        sink.check_le("identity_transform",
                      std::fabs(uid.dx2 - u0.dx2) + std::fabs(uid.dp2 - u0.dp2), 1e-15);

        int violations = 0;
        for (int i = 0; i <= 40; ++i) {
            const double a = -10.0 + 0.5 * i;
            try {
                require_admissible(scale_transform(u0, ScaleParameter{a}));
            } catch (const DomainError&) {
                ++violations;
            }
        }
        sink.check_le("admissibility_violations", violations, 0.0);
    }

    // Field-level dilations on two Gaussians and a compact bump.
    const Grid1D grid1 = make_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
    const Grid1D grid2 = make_grid(-16.0, 16.0, 1601);
    const Grid1D gridb = make_grid(-2.0, 2.0, 801);
    struct Entry {
        std::string label;
        MadelungFields mf;
        bool gaussian;
    };
    std::vector<Entry> states;
    states.push_back({"gaussian_sigma_1", gaussian_madelung(grid1, m, hbar, 1.0, 0.0, 0.1), true});
    states.push_back({"gaussian_sigma_2", gaussian_madelung(grid2, m, hbar, 2.0, 0.3, 0.05), true});
    states.push_back({"compact_bump", bump_state(gridb, m, hbar, 1.0), false});

    double law_max = 0.0, eq39_gauss = 0.0, cov_bump = 0.0, cov_gauss = 0.0, eq39_bump = 0.0;
    CsvTable& stab = sink.csv(
        "series/scale.csv",
        {"state", "alpha", "dx2_before", "dp2q_before", "product_before", "dx2_after",
         "dp2q_after", "product_after", "eq_scale_residual", "covariance_residual",
         "gaussian_gap"});
    for (std::size_t is = 0; is < states.size(); ++is) {
        for (double a : alphas) {
            const ScaleCovarianceReport rep =
                scale_covariance_check(states[is].mf, ScaleParameter{a}, hbar);
            law_max = std::max({law_max, std::fabs(rep.dx2_law_residual),
                                std::fabs(rep.dp2_cl_law_residual),
                                std::fabs(rep.qfunc_law_residual)});
            if (states[is].gaussian) {
                eq39_gauss = std::max(eq39_gauss, std::fabs(rep.eq_scale_residual));
                cov_gauss = std::max(cov_gauss, std::fabs(rep.covariance_residual));
            } else {
                cov_bump = std::max(cov_bump, std::fabs(rep.covariance_residual));
                eq39_bump = std::max(eq39_bump, std::fabs(rep.eq_scale_residual));
            }
            stab.rows.push_back({static_cast<double>(is), a, rep.dx2_before, rep.dp2_q_before,
                                 rep.dx2_before * rep.dp2_q_before, rep.dx2_after,
                                 rep.dp2_q_after, rep.dx2_after * rep.dp2_q_after,
                                 rep.eq_scale_residual, rep.covariance_residual,
                                 rep.gaussian_gap});
        }
    }
    sink.check_le("dilation_laws_max", law_max, 1e-12);
    sink.check_le("eq_scale_residual_gaussian_max", eq39_gauss, 1e-8);
    sink.check_le("covariance_residual_gaussian_max", cov_gauss, 1e-8);
    sink.check_le("covariance_residual_bump_max", cov_bump, 1e-6);
    sink.diag("eq_scale_residual_bump_max", eq39_bump);

    {
        const double q1 = quantum_correction_functional(states[0].mf.P, 1.0);
        const double q2 = quantum_correction_functional(states[1].mf.P, 1.0);
        sink.check_le("qfunc_sigma_1", std::fabs(q1 - 0.25), 1e-6);
        sink.check_le("qfunc_sigma_2", std::fabs(q2 - 0.0625), 1e-6);
        const double dx2 = density_variance(states[0].mf.P);
        sink.check_le("gaussian_gap_sigma_1", std::fabs(4.0 * q1 * dx2 - 1.0), 1e-6);
        const double dx2b = density_variance(states[2].mf.P);
        const double qb = quantum_correction_functional(states[2].mf.P, 1.0);
        sink.diag("gaussian_gap_bump", 4.0 * qb * dx2b - 1.0);
    }

    {
        bool rejected = false;
        try {
            (void)dilate_fields(states[2].mf, ScaleParameter{-2.0}, 5.0);
        } catch (const SupportOverflowError&) {
            rejected = true;
        }
        sink.check_flag("rejects_support_overflow", rejected);
    }
}

void run_fisher_identities(const ScenarioConfig& cfg, ScenarioSink& sink) {
    const double m = cfg.physics.mass;
    const double hbar = cfg.physics.hbar;
    const double omega = cfg.physics.omega.value_or(1.0);
    const Grid1D grid = make_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);

    const MadelungFields gauss1 = gaussian_madelung(grid, m, hbar, 1.0, 0.0, 0.0);
    const double sigma_ground = std::sqrt(0.5 * hbar / (m * omega));
    const MadelungFields ground = gaussian_madelung(grid, m, hbar, sigma_ground, 0.0, 0.0);
    MadelungFields bimodal;
    {
        const Grid1D gb = make_grid(-12.0, 12.0, 2401);
        bimodal.m = m;
        bimodal.hbar = hbar;
        bimodal.P = RealField{gb, std::vector<double>(gb.n_points, 0.0)};
        bimodal.S = bimodal.P;
        bimodal.A = bimodal.P;
        const double c = 0.5 / std::sqrt(2.0 * M_PI);
        for (int i = 0; i < gb.n_points; ++i) {
            const double x = grid_x(gb, i);
            bimodal.P.values[i] = c * (std::exp(-0.5 * (x - 3.0) * (x - 3.0)) +
                                       std::exp(-0.5 * (x + 3.0) * (x + 3.0)));
            bimodal.A.values[i] = std::sqrt(bimodal.P.values[i]);
        }
    }
    const MadelungFields drifting = gaussian_madelung(grid, m, hbar, 1.0, 0.3, 0.05);

    {
        CsvTable& ptab = sink.csv("series/pq_identity.csv",
                                  {"state", "pq_integral", "fisher_side", "gap"});
        const MadelungFields* trio[] = {&gauss1, &ground, &bimodal};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            const PqIdentity rep = pq_integral_identity(*trio[i]);
            worst = std::max(worst, std::fabs(rep.pq_integral - rep.fisher_side));
            ptab.rows.push_back({static_cast<double>(i), rep.pq_integral, rep.fisher_side,
                                 rep.pq_integral - rep.fisher_side});
            if (i == 0)
                sink.check_le("pq_gaussian_value", std::fabs(rep.pq_integral - 0.125), 1e-6);
            if (i == 1)
                sink.check_le("pq_ground_value",
                              std::fabs(rep.pq_integral - 0.25 * hbar * omega), 1e-6);
        }
        sink.check_le("pq_identity_max_gap", worst, 1e-5);
    }

    sink.check_le("total_vs_kinetic",
                  std::fabs(total_quantum_hamiltonian(drifting) -
                            kinetic_expectation(recompose(drifting))),
                  1e-6);
    sink.check_le("ground_total_energy",
                  std::fabs(total_quantum_hamiltonian(ground) - 0.25 * hbar * omega), 1e-6);

    {
        CsvTable& utab = sink.csv("series/uncertainty.csv", {"sigma", "dq2", "dp2", "product"});
        const double quarter = 0.25 * hbar * hbar;
        const Grid1D wide = make_grid(-16.0, 16.0, 1601);
        const double sigmas[] = {0.5, 1.0, 2.0};
        const char* names[] = {"uncertainty_gap_sigma_0.5", "uncertainty_gap_sigma_1",
                               "uncertainty_gap_sigma_2"};
        for (int i = 0; i < 3; ++i) {
            const Grid1D& g = sigmas[i] > 1.5 ? wide : grid;
            const MadelungFields mf = gaussian_madelung(g, m, hbar, sigmas[i], 0.0, 0.0);
            const UncertaintyProduct u = exact_uncertainty_check(mf.P, hbar);
            sink.check_le(names[i], std::fabs(u.product - quarter), 1e-8);
            utab.rows.push_back({sigmas[i], u.dq2, u.dp2_fluct, u.product});
        }
        const UncertaintyProduct ub = exact_uncertainty_check(bimodal.P, hbar);
        sink.check_ge("bimodal_product", ub.product, quarter + 0.01);
        utab.rows.push_back({-1.0, ub.dq2, ub.dp2_fluct, ub.product});
    }

    {
        const RealField bare = momentum_fluctuation(gauss1.P, MomentumConvention::bare, hbar);
        const RealField half =
            momentum_fluctuation(gauss1.P, MomentumConvention::half_hbar, hbar);
        double duality = 0.0;
        for (int i = 0; i < grid.n_points; ++i)
            duality = std::max(duality,
                               std::fabs(half.values[i] + 0.5 * hbar * bare.values[i]));
        sink.check_le("convention_duality", duality, 1e-15);
        double gauss_err = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            if (std::fabs(grid_x(grid, i)) > 4.0) continue;
            gauss_err = std::max(gauss_err, std::fabs(bare.values[i] + grid_x(grid, i)));
        }
        sink.check_le("bare_fluctuation_gaussian", gauss_err, 1e-6);
    }

    {
        const double quarter = 0.25 * hbar * hbar;
        sink.check_le("fisher_term_gaussian",
                      std::fabs(fisher_hamiltonian_term(gauss1.P, quarter, m) - 0.125), 1e-6);
        sink.check_le("fisher_term_ground",
                      std::fabs(fisher_hamiltonian_term(ground.P, quarter, m) -
                                0.25 * hbar * omega),
                      1e-6);
    }

    {
        const ClassicalMomentum rest = classical_momentum_uncertainty(ground);
        sink.check_le("rest_momentum_stats",
                      std::fabs(rest.mean_momentum) + std::fabs(rest.dp2_cl), 1e-12);
        const ClassicalMomentum drift = classical_momentum_uncertainty(drifting);
        sink.check_le("drift_mean_momentum", std::fabs(drift.mean_momentum - 0.3), 1e-8);
        sink.check_le("drift_momentum_spread", std::fabs(drift.dp2_cl - 0.01), 1e-8);
    }

    {
        bool rejected = false;
        try {
            (void)momentum_fluctuation(gauss1.P, MomentumConvention::bare, hbar, 1e-3);
        } catch (const DensityFloorError&) {
            rejected = true;
        }
        sink.check_flag("rejects_low_density", rejected);
    }
}

}  // namespace stablab::detail
