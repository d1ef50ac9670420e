#include "stablab/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "stablab/errors.hpp"
#include "stablab/linalg.hpp"

namespace stablab {

namespace {

void require_nonnegative_density(const RealField& p) {
    for (std::size_t i = 0; i < p.values.size(); ++i)
        if (p.values[i] < 0.0) throw DensityFloorError("density has a negative sample");
}

void require_normalized(const RealField& p) {
    const double total = integrate(p);
    if (std::fabs(total - 1.0) > 1e-6)
        throw DomainError("density is not normalized to 1");
}

double mean_of(const RealField& p) {
    const Vec x = grid_points(p.grid);
    Vec v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = p.values[i] * x[i];
    return integrate(make_field(p.grid, std::move(v)));
}

double variance_of(const RealField& p) {
    const double mu = mean_of(p);
    const Vec x = grid_points(p.grid);
    Vec v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        v[i] = p.values[i] * (x[i] - mu) * (x[i] - mu);
    return integrate(make_field(p.grid, std::move(v)));
}

}  // namespace

RealField momentum_fluctuation(const RealField& P, MomentumConvention convention, double hbar,
                               double density_floor) {
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    const RealField grad_p = gradient_order4(P);
    const int n = P.grid.n_points;
    Vec v(n);
    const double scale = convention == MomentumConvention::bare ? 1.0 : -0.5 * hbar;
    for (int i = 0; i < n; ++i) {
        if (P.values[i] <= density_floor)
            throw DensityFloorError("density at or below the floor");
        v[i] = scale * grad_p.values[i] / P.values[i];
    }
    return make_field(P.grid, std::move(v));
}

double fisher_information(const RealField& P, double density_floor) {
    const RealField grad_p = gradient_order4(P);
    const int n = P.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        if (P.values[i] <= density_floor)
            throw DensityFloorError("density at or below the floor");
        v[i] = grad_p.values[i] * grad_p.values[i] / P.values[i];
    }
    return integrate(make_field(P.grid, std::move(v)));
}

double fisher_hamiltonian_term(const RealField& P, double c, double m, double density_floor) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    return c / (2.0 * m) * fisher_information(P, density_floor);
}

double total_quantum_hamiltonian(const MadelungFields& mf) {
    if (!(mf.m > 0.0) || !(mf.hbar > 0.0)) throw DomainError("mass and hbar must be positive");
    const RealField grad_s = gradient_order4(mf.S);
    const RealField grad_a = gradient_order4(mf.A);
    const int n = mf.P.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = (mf.P.values[i] * grad_s.values[i] * grad_s.values[i] +
                mf.hbar * mf.hbar * grad_a.values[i] * grad_a.values[i]) /
               (2.0 * mf.m);
    return integrate(make_field(mf.P.grid, std::move(v)));
}

PqIdentity pq_integral_identity(const MadelungFields& mf) {
    PqIdentity out;
    out.pq_integral = perturbation_action(mf);
    out.fisher_side = mf.hbar * mf.hbar / (8.0 * mf.m) * fisher_information(mf.P);
    out.boundary_leak =
        std::max(mf.P.values.front(), mf.P.values.back()) > 1e-8;
    return out;
}

UncertaintyProduct exact_uncertainty_check(const RealField& P, double hbar,
                                           double density_floor) {
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    require_nonnegative_density(P);
    require_normalized(P);
    UncertaintyProduct out;
    out.dq2 = variance_of(P);
    out.dp2_fluct = hbar * hbar / 4.0 * fisher_information(P, density_floor);
    out.product = out.dq2 * out.dp2_fluct;
    return out;
}

void require_admissible(const UncertaintyPair& u) {
    if (!(u.dx2 > 0.0) || !(u.dp2 > 0.0))
        throw DomainError("uncertainty pair must have positive components");
    if (!(u.hbar > 0.0)) throw DomainError("hbar must be positive");
    if (u.dx2 * u.dp2 < u.hbar * u.hbar / 4.0 - 1e-12)
        throw DomainError("uncertainty pair violates the Heisenberg bound");
}

UncertaintyPair scale_transform(const UncertaintyPair& u, const ScaleParameter& s) {
    require_admissible(u);
    const double ea = std::exp(s.alpha);
    const double em = std::exp(-s.alpha);
    UncertaintyPair out;
    out.hbar = u.hbar;
    out.dx2 = em * u.dx2;
    out.dp2 = em * u.dp2 + u.hbar * u.hbar / 4.0 * (ea - em) / u.dx2;
    return out;
}

MadelungFields dilate_fields(const MadelungFields& mf, const ScaleParameter& s,
                             double max_extent) {
    require_same_grid(mf.P.grid, mf.S.grid);
    require_same_grid(mf.P.grid, mf.A.grid);
    const double stretch = std::exp(-0.5 * s.alpha);
    const double half_width =
        stretch * std::max(std::fabs(mf.P.grid.x_min), std::fabs(mf.P.grid.x_max));
    if (max_extent > 0.0 && half_width > max_extent)
        throw SupportOverflowError("dilated grid exceeds the allowed extent");
    const Grid1D grid =
        make_grid(stretch * mf.P.grid.x_min, stretch * mf.P.grid.x_max, mf.P.grid.n_points);
    const double ea2 = std::exp(0.5 * s.alpha);
    const double ea4 = std::exp(0.25 * s.alpha);
    const double em = std::exp(-s.alpha);
    const int n = grid.n_points;
    Vec p(n), sv(n), a(n);
    for (int i = 0; i < n; ++i) {
        p[i] = ea2 * mf.P.values[i];
        sv[i] = em * mf.S.values[i];
        a[i] = ea4 * mf.A.values[i];
    }
    MadelungFields out;
    out.P = make_field(grid, std::move(p));
    out.S = make_field(grid, std::move(sv));
    out.A = make_field(grid, std::move(a));
    out.m = mf.m;
    out.hbar = mf.hbar;
    out.t = mf.t;
    return out;
}

ClassicalMomentum classical_momentum_uncertainty(const MadelungFields& mf) {
    const RealField grad_s = gradient_order4(mf.S);
    const int n = mf.P.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = mf.P.values[i] * grad_s.values[i];
    ClassicalMomentum out;
    out.mean_momentum = integrate(make_field(mf.P.grid, std::move(v)));
    Vec w(n);
    for (int i = 0; i < n; ++i) {
        const double d = grad_s.values[i] - out.mean_momentum;
        w[i] = mf.P.values[i] * d * d;
    }
    out.dp2_cl = integrate(make_field(mf.P.grid, std::move(w)));
    return out;
}

double quantum_correction_functional(const RealField& P, double beta) {
    require_nonnegative_density(P);
    const int n = P.grid.n_points;
    Vec root(n);
    for (int i = 0; i < n; ++i) root[i] = std::sqrt(P.values[i]);
    const RealField grad_root = gradient_order4(make_field(P.grid, std::move(root)));
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = grad_root.values[i] * grad_root.values[i];
    return beta * integrate(make_field(P.grid, std::move(v)));
}

ScaleCovarianceReport scale_covariance_check(const MadelungFields& mf, const ScaleParameter& s,
                                             double hbar) {
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    require_normalized(mf.P);
    const MadelungFields after = dilate_fields(mf, s);
    const double ea = std::exp(s.alpha);
    const double em = std::exp(-s.alpha);

    ScaleCovarianceReport r;
    r.alpha = s.alpha;
    r.dx2_before = variance_of(mf.P);
    r.dx2_after = variance_of(after.P);
    r.dp2_cl_before = classical_momentum_uncertainty(mf).dp2_cl;
    r.dp2_cl_after = classical_momentum_uncertainty(after).dp2_cl;
    r.qfunc_before = quantum_correction_functional(mf.P);
    r.qfunc_after = quantum_correction_functional(after.P);
    r.dp2_q_before = r.dp2_cl_before + hbar * hbar * r.qfunc_before;
    r.dp2_q_after = r.dp2_cl_after + hbar * hbar * r.qfunc_after;
    r.product_before = r.dx2_before * r.dp2_q_before;
    r.product_after = r.dx2_after * r.dp2_q_after;

    r.dx2_law_residual = r.dx2_after - em * r.dx2_before;
    r.dp2_cl_law_residual = r.dp2_cl_after - em * r.dp2_cl_before;
    r.qfunc_law_residual = r.qfunc_after - ea * r.qfunc_before;
    r.covariance_residual =
        r.dp2_q_after - (em * r.dp2_q_before + hbar * hbar * (ea - em) * r.qfunc_before);
    r.eq_scale_residual =
        r.qfunc_after - em * r.qfunc_before - (ea - em) / (4.0 * r.dx2_before);
    r.gaussian_gap = 4.0 * r.qfunc_before * r.dx2_before - 1.0;
    return r;
}

}  // namespace stablab
