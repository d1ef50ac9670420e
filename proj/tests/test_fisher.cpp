#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stablab/fisher.hpp"
#include "stablab/grid.hpp"
#include "stablab/quantum.hpp"

using namespace stablab;

namespace {

MadelungFields gaussian_fields(const Grid1D& g, double sigma, double s1, double s2) {
    MadelungFields mf;
    mf.P = sample_field(g, [&](double x) {
        return std::pow(2.0 * M_PI * sigma * sigma, -0.5) *
               std::exp(-x * x / (2.0 * sigma * sigma));
    });
    mf.S = sample_field(g, [&](double x) { return s1 * x + s2 * x * x; });
    mf.A = mf.P;
    for (double& a : mf.A.values) a = std::sqrt(a);
    return mf;
}

}  // namespace

TEST_CASE("momentum fluctuation conventions") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const MadelungFields mf = gaussian_fields(g, 1.0, 0.0, 0.0);
    const RealField bare = momentum_fluctuation(mf.P, MomentumConvention::bare);
    const RealField half = momentum_fluctuation(mf.P, MomentumConvention::half_hbar, 1.0);
    double gauss_err = 0.0, duality = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        if (std::fabs(grid_x(g, i)) <= 4.0)
            gauss_err = std::max(gauss_err, std::fabs(bare.values[i] + grid_x(g, i)));
        duality = std::max(duality, std::fabs(half.values[i] + 0.5 * bare.values[i]));
    }
    CHECK(gauss_err < 1e-6);   // bare delta-p of a unit Gaussian is -x
    CHECK(duality == 0.0);     // half_hbar = -(hbar/2) * bare exactly

    CHECK_THROWS_AS(momentum_fluctuation(mf.P, MomentumConvention::bare, 1.0, 1e-3),
                    DensityFloorError);
    RealField negative = mf.P;
    negative.values[10] = -1e-8;
    CHECK_THROWS_AS(momentum_fluctuation(negative, MomentumConvention::bare),
                    DensityFloorError);
}

TEST_CASE("Fisher information of Gaussians is 1/sigma^2") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    CHECK(std::fabs(fisher_information(gaussian_fields(g, 1.0, 0.0, 0.0).P) - 1.0) < 1e-8);
    CHECK(std::fabs(fisher_information(gaussian_fields(g, 0.5, 0.0, 0.0).P) - 4.0) < 1e-7);
    CHECK(std::fabs(fisher_hamiltonian_term(gaussian_fields(g, 1.0, 0.0, 0.0).P, 0.25, 1.0) -
                    0.125) < 1e-8);
}

TEST_CASE("integration-by-parts identity for the perturbation action") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const MadelungFields mf = gaussian_fields(g, 1.0, 0.0, 0.0);
    const PqIdentity rep = pq_integral_identity(mf);
    CHECK(std::fabs(rep.pq_integral - 0.125) < 1e-6);
    CHECK(std::fabs(rep.pq_integral - rep.fisher_side) < 1e-7);
    CHECK(!rep.boundary_leak);

    // a tight box leaves visible density at the edges
    const Grid1D tight = make_grid(-3.0, 3.0, 601);
    const PqIdentity leaky = pq_integral_identity(gaussian_fields(tight, 1.0, 0.0, 0.0));
    CHECK(leaky.boundary_leak);
}

TEST_CASE("total quantum Hamiltonian matches the kinetic expectation") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const MadelungFields drifting = gaussian_fields(g, 1.0, 0.3, 0.05);
    const double total = total_quantum_hamiltonian(drifting);
    const double kinetic = kinetic_expectation(recompose(drifting));
    CHECK(std::fabs(total - kinetic) < 1e-6);
    // ground state of the unit oscillator: E - <U> = hbar w / 4
    const MadelungFields ground = gaussian_fields(g, std::sqrt(0.5), 0.0, 0.0);
    CHECK(std::fabs(total_quantum_hamiltonian(ground) - 0.25) < 1e-6);
}

TEST_CASE("exact-uncertainty products") {
    for (double sigma : {0.5, 1.0, 2.0}) {
        const Grid1D g = sigma > 1.5 ? make_grid(-16.0, 16.0, 1601)
                                     : make_grid(-8.0, 8.0, 1601);
        const UncertaintyProduct u = exact_uncertainty_check(gaussian_fields(g, sigma, 0, 0).P,
                                                             1.0);
        CHECK(std::fabs(u.dq2 - sigma * sigma) < 1e-8);
        CHECK(std::fabs(u.product - 0.25) < 1e-8);
    }
    // unnormalized densities are rejected
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    RealField doubled = gaussian_fields(g, 1.0, 0.0, 0.0).P;
    for (double& p : doubled.values) p *= 2.0;
    CHECK_THROWS_AS(exact_uncertainty_check(doubled, 1.0), DomainError);
}

TEST_CASE("admissibility of uncertainty pairs") {
    require_admissible({1.0, 0.25, 1.0});
    require_admissible({2.0, 0.2, 1.0});
    CHECK_THROWS_AS(require_admissible({1.0, 0.2, 1.0}), DomainError);
    CHECK_THROWS_AS(require_admissible({-1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("scale transform properties") {
    const UncertaintyPair u0{1.3, 0.9, 1.0};
    for (double a : {-2.0, -0.5, 0.5, 2.0}) {
        const UncertaintyPair ua = scale_transform(u0, {a});
        CHECK(std::fabs(ua.dx2 - std::exp(-a) * u0.dx2) < 1e-14);
        const double expected_product =
            std::exp(-2.0 * a) * (u0.dx2 * u0.dp2) + 0.25 * (1.0 - std::exp(-2.0 * a));
        CHECK(std::fabs(ua.dx2 * ua.dp2 - expected_product) < 1e-13);
        require_admissible(ua);
        // group property
        const UncertaintyPair uab = scale_transform(ua, {1.0 - a});
        const UncertaintyPair u1 = scale_transform(u0, {1.0});
        CHECK(std::fabs(uab.dx2 - u1.dx2) < 1e-13);
        CHECK(std::fabs(uab.dp2 - u1.dp2) < 1e-13);
    }
    // minimum-uncertainty pairs are fixed points of the product
    const UncertaintyPair fix = scale_transform({0.7, 0.25 / 0.7, 1.0}, {1.7});
    CHECK(std::fabs(fix.dx2 * fix.dp2 - 0.25) < 1e-14);
}

TEST_CASE("field dilation rescales every functional exactly") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const MadelungFields mf = gaussian_fields(g, 1.0, 0.1, 0.2);
    const double alpha = 0.8;
    const MadelungFields out = dilate_fields(mf, {alpha});
    CHECK(out.P.grid.n_points == g.n_points);
    CHECK(out.P.grid.x_max == doctest::Approx(std::exp(-alpha / 2.0) * 8.0).epsilon(1e-14));
    CHECK(std::fabs(integrate(out.P) - integrate(mf.P)) < 1e-13);
    CHECK(std::fabs(quantum_correction_functional(out.P) -
                    std::exp(alpha) * quantum_correction_functional(mf.P)) < 1e-12);
    // S scales by e^{-alpha} sample-by-sample
    CHECK(std::fabs(out.S.values[100] - std::exp(-alpha) * mf.S.values[100]) < 1e-14);

    CHECK_THROWS_AS(dilate_fields(mf, {-2.0}, 10.0), SupportOverflowError);
}

TEST_CASE("classical momentum spread ignores the mean drift") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const ClassicalMomentum rest = classical_momentum_uncertainty(gaussian_fields(g, 1, 0, 0));
    CHECK(std::fabs(rest.mean_momentum) < 1e-12);
    CHECK(std::fabs(rest.dp2_cl) < 1e-12);
    const ClassicalMomentum drift =
        classical_momentum_uncertainty(gaussian_fields(g, 1.0, 0.3, 0.05));
    CHECK(std::fabs(drift.mean_momentum - 0.3) < 1e-8);
    CHECK(std::fabs(drift.dp2_cl - 0.01) < 1e-8);
}

TEST_CASE("quantum correction functional is linear in beta") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const RealField p = gaussian_fields(g, 1.0, 0.0, 0.0).P;
    const double q1 = quantum_correction_functional(p, 1.0);
    CHECK(std::fabs(q1 - 0.25) < 1e-6);
    CHECK(std::fabs(quantum_correction_functional(p, 2.0) - 2.0 * q1) < 1e-14);
}

TEST_CASE("scale covariance report on a Gaussian") {
    const Grid1D g = make_grid(-8.0, 8.0, 1601);
    const MadelungFields mf = gaussian_fields(g, 1.0, 0.0, 0.1);
    const ScaleCovarianceReport rep = scale_covariance_check(mf, {0.7}, 1.0);
    CHECK(std::fabs(rep.dx2_law_residual) < 1e-12);
    CHECK(std::fabs(rep.dp2_cl_law_residual) < 1e-12);
    CHECK(std::fabs(rep.qfunc_law_residual) < 1e-12);
    CHECK(std::fabs(rep.covariance_residual) < 1e-12);
    CHECK(std::fabs(rep.eq_scale_residual) < 1e-8);
    CHECK(std::fabs(rep.gaussian_gap) < 1e-6);
    CHECK(rep.dx2_before == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.dx2_after == doctest::Approx(std::exp(-0.7)).epsilon(1e-6));

    RealField doubled = mf.P;
    for (double& p : doubled.values) p *= 2.0;
    MadelungFields bad = mf;
    bad.P = doubled;
    CHECK_THROWS_AS(scale_covariance_check(bad, {0.7}, 1.0), DomainError);
}
