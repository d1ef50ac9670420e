#include "stablab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "stablab/errors.hpp"
#include "stablab/linalg.hpp"

namespace stablab {

namespace {

using Cplx = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Relative amplitude floor used when decomposing full evolved states: deep but
// healthy exponential tails (down to ~1e-14 of the peak on wide boxes) must
// pass, while genuine zero samples still fail.
constexpr double kDecomposeFloorRel = 1e-15;

double max_abs(const std::vector<Cplx>& v) {
    double m = 0.0;
    for (const Cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_real(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void require_positive_physics(double m, double hbar) {
    if (!(m > 0.0) || !(hbar > 0.0)) throw DomainError("mass and hbar must be positive");
}

int max_amplitude_index(const Vec& a) {
    int idx = 0;
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] > a[idx]) idx = static_cast<int>(i);
    return idx;
}

}  // namespace

MadelungFields decompose(const WaveField& w) {
    require_positive_physics(w.m, w.hbar);
    const int n = w.psi.grid.n_points;
    const double floor_abs = kDecomposeFloorRel * max_abs(w.psi.values);
    const RealField phase = unwrap_phase(w.psi, floor_abs);
    MadelungFields mf;
    mf.m = w.m;
    mf.hbar = w.hbar;
    mf.t = w.t;
    Vec a(n), p(n), s(n);
    for (int i = 0; i < n; ++i) {
        a[i] = std::abs(w.psi.values[i]);
        p[i] = a[i] * a[i];
        s[i] = w.hbar * phase.values[i];
    }
    mf.A = make_field(w.psi.grid, std::move(a));
    mf.P = make_field(w.psi.grid, std::move(p));
    mf.S = make_field(w.psi.grid, std::move(s));
    return mf;
}

WaveField recompose(const MadelungFields& mf) {
    require_positive_physics(mf.m, mf.hbar);
    require_same_grid(mf.A.grid, mf.S.grid);
    require_same_grid(mf.A.grid, mf.P.grid);
    const int n = mf.A.grid.n_points;
    std::vector<Cplx> psi(n);
    for (int i = 0; i < n; ++i)
        psi[i] = mf.A.values[i] * std::exp(Cplx(0.0, mf.S.values[i] / mf.hbar));
    WaveField w;
    w.psi = make_field(mf.A.grid, std::move(psi));
    w.m = mf.m;
    w.hbar = mf.hbar;
    w.t = mf.t;
    return w;
}

MadelungFields align_phase_to(const MadelungFields& ref, MadelungFields mf) {
    require_same_grid(ref.S.grid, mf.S.grid);
    const int anchor = max_amplitude_index(mf.A.values);
    const double branch = kTwoPi * mf.hbar;
    const double k = std::round((mf.S.values[anchor] - ref.S.values[anchor]) / branch);
    if (k != 0.0)
        for (double& s : mf.S.values) s -= k * branch;
    return mf;
}

namespace {

struct CnWorkspace {
    // (1 + r H) psi' = (1 - r H) psi with H tridiagonal and constant in time;
    // the Thomas factors of (1 + r H) are precomputed once.
    std::vector<Cplx> plus_diag, minus_diag;
    Cplx plus_off, minus_off;
    std::vector<Cplx> thomas_w, thomas_d;
    std::vector<Cplx> rhs, fwd;

    CnWorkspace(const WaveField& w, const RealField& u, double dt) {
        const int n = w.psi.grid.n_points;
        const double dx = w.psi.grid.dx;
        const double kin = w.hbar * w.hbar / (2.0 * w.m * dx * dx);
        const Cplx r(0.0, dt / (2.0 * w.hbar));
        plus_diag.resize(n);
        minus_diag.resize(n);
        for (int i = 0; i < n; ++i) {
            const Cplx h = 2.0 * kin + u.values[i];
            plus_diag[i] = 1.0 + r * h;
            minus_diag[i] = 1.0 - r * h;
        }
        plus_off = r * (-kin);
        minus_off = -plus_off;
        thomas_w.resize(n);
        thomas_d.resize(n);
        thomas_d[0] = plus_diag[0];
        for (int i = 1; i < n; ++i) {
            thomas_w[i] = plus_off / thomas_d[i - 1];
            thomas_d[i] = plus_diag[i] - thomas_w[i] * plus_off;
        }
        rhs.resize(n);
        fwd.resize(n);
    }

    void step(std::vector<Cplx>& psi) {
        const int n = static_cast<int>(psi.size());
        rhs[0] = minus_diag[0] * psi[0] + minus_off * psi[1];
        for (int i = 1; i + 1 < n; ++i)
            rhs[i] = minus_off * psi[i - 1] + minus_diag[i] * psi[i] + minus_off * psi[i + 1];
        rhs[n - 1] = minus_off * psi[n - 2] + minus_diag[n - 1] * psi[n - 1];
        fwd[0] = rhs[0];
        for (int i = 1; i < n; ++i) fwd[i] = rhs[i] - thomas_w[i] * fwd[i - 1];
        psi[n - 1] = fwd[n - 1] / thomas_d[n - 1];
        for (int i = n - 2; i >= 0; --i) psi[i] = (fwd[i] - plus_off * psi[i + 1]) / thomas_d[i];
    }
};

double field_norm(const Grid1D& grid, const std::vector<Cplx>& psi) {
    Vec dens(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) dens[i] = std::norm(psi[i]);
    return std::sqrt(integrate(make_field(grid, std::move(dens))));
}

}  // namespace

std::vector<WaveField> evolve_cn_history(const WaveField& w, const RealField& U, double dt,
                                         int n_steps, int snapshot_stride, CnDiagnostics* diag) {
    require_positive_physics(w.m, w.hbar);
    require_same_grid(w.psi.grid, U.grid);
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (n_steps < 0) throw DomainError("step count must be nonnegative");
    if (snapshot_stride < 1) throw DomainError("snapshot stride must be >= 1");

    const int n = w.psi.grid.n_points;
    CnWorkspace ws(w, U, dt);
    std::vector<Cplx> psi = w.psi.values;

    CnDiagnostics local;
    local.norm_initial = field_norm(w.psi.grid, psi);
    auto edge_ratio = [&](const std::vector<Cplx>& v) {
        const double peak = max_abs(v);
        if (peak == 0.0) return 0.0;
        return std::max(std::abs(v.front()), std::abs(v.back())) / peak;
    };
    local.max_edge_amplitude_ratio = edge_ratio(psi);

    std::vector<WaveField> history;
    auto snapshot = [&](int step) {
        WaveField s;
        s.psi = make_field(w.psi.grid, psi);
        s.m = w.m;
        s.hbar = w.hbar;
        s.t = w.t + step * dt;
        history.push_back(std::move(s));
    };
    snapshot(0);

    for (int k = 1; k <= n_steps; ++k) {
        ws.step(psi);
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(psi[i].real()) || !std::isfinite(psi[i].imag()))
                throw IntegrationDivergedError(k);
        const double nk = field_norm(w.psi.grid, psi);
        local.max_step_norm_drift =
            std::max(local.max_step_norm_drift, std::fabs(nk - local.norm_initial));
        local.max_edge_amplitude_ratio = std::max(local.max_edge_amplitude_ratio, edge_ratio(psi));
        if (k % snapshot_stride == 0 || k == n_steps) snapshot(k);
    }
    local.norm_final = field_norm(w.psi.grid, psi);
    local.boundary_leak = local.max_edge_amplitude_ratio > 1e-6;
    if (diag) *diag = local;
    return history;
}

WaveField evolve_cn(const WaveField& w, const RealField& U, double dt, int n_steps,
                    CnDiagnostics* diag) {
    const int stride = n_steps > 0 ? n_steps : 1;
    return evolve_cn_history(w, U, dt, n_steps, stride, diag).back();
}

RealField quantum_potential(const MadelungFields& mf) {
    require_positive_physics(mf.m, mf.hbar);
    const RealField lap_a = laplacian_order4(mf.A);
    const int n = mf.A.grid.n_points;
    Vec q(n);
    const double c = -mf.hbar * mf.hbar / (2.0 * mf.m);
    for (int i = 0; i < n; ++i) {
        if (mf.A.values[i] == 0.0)
            throw AmplitudeFloorError(i, grid_x(mf.A.grid, i));
        q[i] = c * lap_a.values[i] / mf.A.values[i];
    }
    return make_field(mf.A.grid, std::move(q));
}

RealField quantum_potential_p_form(const MadelungFields& mf) {
    require_positive_physics(mf.m, mf.hbar);
    const RealField grad_p = gradient_order4(mf.P);
    const RealField lap_p = laplacian_order4(mf.P);
    const int n = mf.P.grid.n_points;
    Vec q(n);
    const double c = -mf.hbar * mf.hbar / (4.0 * mf.m);
    for (int i = 0; i < n; ++i) {
        if (mf.P.values[i] == 0.0)
            throw AmplitudeFloorError(i, grid_x(mf.P.grid, i));
        const double gp = grad_p.values[i] / mf.P.values[i];
        q[i] = c * (lap_p.values[i] / mf.P.values[i] - 0.5 * gp * gp);
    }
    return make_field(mf.P.grid, std::move(q));
}

double q_form_agreement(const MadelungFields& mf, double window_rel_floor) {
    const RealField qa = quantum_potential(mf);
    const RealField qp = quantum_potential_p_form(mf);
    const double floor = window_rel_floor * max_abs_real(mf.P.values);
    double worst = 0.0;
    for (int i = 0; i < mf.P.grid.n_points; ++i)
        if (mf.P.values[i] >= floor)
            worst = std::max(worst, std::fabs(qa.values[i] - qp.values[i]));
    return worst;
}

namespace {

void require_snapshot_pair(const MadelungFields& a, const MadelungFields& b, double dt) {
    require_same_grid(a.P.grid, b.P.grid);
    if (!(dt > 0.0)) throw DomainError("snapshot separation must be positive");
    if (a.m != b.m || a.hbar != b.hbar)
        throw DomainError("snapshots carry different physical constants");
}

RealField average_field(const RealField& a, const RealField& b) {
    const int n = a.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = 0.5 * (a.values[i] + b.values[i]);
    return make_field(a.grid, std::move(v));
}

// Q built from the evolver's own 3-point Laplacian. Snapshot-pair residuals
// must use this form: a state that is stationary under the discrete evolution
// satisfies the discrete balance, and the order-4 stencil would break it at
// O(dx^2).
RealField quantum_potential_evolver_form(const MadelungFields& mf) {
    const RealField lap_a = laplacian(mf.A);
    const int n = mf.A.grid.n_points;
    Vec q(n);
    const double c = -mf.hbar * mf.hbar / (2.0 * mf.m);
    for (int i = 0; i < n; ++i) {
        if (mf.A.values[i] == 0.0) throw AmplitudeFloorError(i, grid_x(mf.A.grid, i));
        q[i] = c * lap_a.values[i] / mf.A.values[i];
    }
    return make_field(mf.A.grid, std::move(q));
}

}  // namespace

RealField continuity_residual(const MadelungFields& a, const MadelungFields& b, double dt) {
    require_snapshot_pair(a, b, dt);
    const RealField p_bar = average_field(a.P, b.P);
    const RealField s_bar = average_field(a.S, b.S);
    const RealField grad_s = gradient(s_bar);
    const int n = a.P.grid.n_points;
    Vec flux(n);
    for (int i = 0; i < n; ++i) flux[i] = p_bar.values[i] * grad_s.values[i] / a.m;
    const RealField div_flux = gradient(make_field(a.P.grid, std::move(flux)));
    Vec r(n);
    for (int i = 0; i < n; ++i)
        r[i] = (b.P.values[i] - a.P.values[i]) / dt + div_flux.values[i];
    return make_field(a.P.grid, std::move(r));
}

RealField compression_term(const MadelungFields& mf) {
    const RealField lap_s = laplacian(mf.S);
    const int n = mf.P.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = mf.P.values[i] * lap_s.values[i] / mf.m;
    return make_field(mf.P.grid, std::move(v));
}

RealField amplitude_transport_residual(const MadelungFields& a, const MadelungFields& b,
                                       double dt) {
    require_snapshot_pair(a, b, dt);
    const RealField a_bar = average_field(a.A, b.A);
    const RealField s_bar = average_field(a.S, b.S);
    const RealField grad_a = gradient(a_bar);
    const RealField grad_s = gradient(s_bar);
    const RealField lap_s = laplacian(s_bar);
    const int n = a.A.grid.n_points;
    Vec r(n);
    for (int i = 0; i < n; ++i)
        r[i] = (b.A.values[i] - a.A.values[i]) / dt +
               (grad_a.values[i] * grad_s.values[i] + 0.5 * a_bar.values[i] * lap_s.values[i]) /
                   a.m;
    return make_field(a.A.grid, std::move(r));
}

RealField quantum_hj_residual(const MadelungFields& a, const MadelungFields& b, const RealField& U,
                              double dt) {
    require_snapshot_pair(a, b, dt);
    require_same_grid(a.P.grid, U.grid);
    const MadelungFields b_aligned = align_phase_to(a, b);
    const RealField s_bar = average_field(a.S, b_aligned.S);
    const RealField grad_s = gradient(s_bar);
    const RealField q_bar = average_field(quantum_potential_evolver_form(a),
                                          quantum_potential_evolver_form(b_aligned));
    const int n = a.S.grid.n_points;
    Vec r(n);
    for (int i = 0; i < n; ++i)
        r[i] = (b_aligned.S.values[i] - a.S.values[i]) / dt +
               grad_s.values[i] * grad_s.values[i] / (2.0 * a.m) + U.values[i] + q_bar.values[i];
    return make_field(a.S.grid, std::move(r));
}

RealField chetaev_q_consistency(const MadelungFields& a, const MadelungFields& b,
                                const RealField& U, double dt) {
    RealField r = quantum_hj_residual(a, b, U, dt);
    for (double& v : r.values) v = -v;
    return r;
}

StabilityConditionForms stability_condition_residual(const MadelungFields& mf) {
    const WaveField w = recompose(mf);
    const ComplexField grad_psi = gradient_order4(w.psi);
    const RealField grad_a = gradient_order4(mf.A);
    const int n = mf.A.grid.n_points;
    std::vector<Cplx> inner(n);
    for (int i = 0; i < n; ++i) {
        if (mf.A.values[i] == 0.0)
            throw AmplitudeFloorError(i, grid_x(mf.A.grid, i));
        inner[i] = (grad_psi.values[i] / w.psi.values[i] -
                    Cplx(grad_a.values[i] / mf.A.values[i], 0.0)) /
                   mf.m;
    }
    const ComplexField d_inner = gradient_order4(make_field(mf.A.grid, std::move(inner)));
    StabilityConditionForms out;
    Vec psi_form(n);
    const Cplx hbar_over_i(0.0, -mf.hbar);
    for (int i = 0; i < n; ++i) psi_form[i] = (hbar_over_i * d_inner.values[i]).real();
    out.psi_form = make_field(mf.A.grid, std::move(psi_form));
    const RealField lap_s = laplacian_order4(mf.S);
    Vec lform(n);
    for (int i = 0; i < n; ++i) lform[i] = lap_s.values[i] / mf.m;
    out.laplacian_form = make_field(mf.A.grid, std::move(lform));
    return out;
}

double stability_condition_agreement(const MadelungFields& mf, double window_rel_floor) {
    const StabilityConditionForms f = stability_condition_residual(mf);
    const double floor = window_rel_floor * max_abs_real(mf.P.values);
    double worst = 0.0;
    for (int i = 0; i < mf.P.grid.n_points; ++i)
        if (mf.P.values[i] >= floor)
            worst = std::max(worst,
                             std::fabs(f.psi_form.values[i] - f.laplacian_form.values[i]));
    return worst;
}

BohmTrajectories bohm_trajectories(const std::vector<WaveField>& history,
                                   const std::vector<double>& seeds) {
    if (history.size() < 2) throw DomainError("need at least two snapshots");
    const Grid1D grid = history.front().psi.grid;
    const std::size_t n_snap = history.size();
    std::vector<Vec> velocity(n_snap);
    std::vector<double> times(n_snap);
    for (std::size_t k = 0; k < n_snap; ++k) {
        require_same_grid(grid, history[k].psi.grid);
        const MadelungFields mf = decompose(history[k]);
        RealField gs = gradient(mf.S);
        for (double& v : gs.values) v /= history[k].m;
        velocity[k] = std::move(gs.values);
        times[k] = history[k].t;
        if (k > 0 && !(times[k] > times[k - 1]))
            throw DomainError("snapshot times must increase");
    }

    auto sample_velocity = [&](const Vec& v, double x) {
        if (x < grid.x_min || x > grid.x_max) throw TrajectoryLeftGridError("trajectory left the grid");
        double pos = (x - grid.x_min) / grid.dx;
        int idx = static_cast<int>(pos);
        if (idx > grid.n_points - 2) idx = grid.n_points - 2;
        const double f = pos - idx;
        return (1.0 - f) * v[idx] + f * v[idx + 1];
    };

    BohmTrajectories out;
    out.t = times;
    out.positions.assign(seeds.size(), Vec(n_snap, 0.0));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        double x = seeds[s];
        if (x < grid.x_min || x > grid.x_max) throw TrajectoryLeftGridError("trajectory left the grid");
        out.positions[s][0] = x;
        for (std::size_t k = 0; k + 1 < n_snap; ++k) {
            const double h = times[k + 1] - times[k];
            auto v_blend = [&](double lambda, double xx) {
                return (1.0 - lambda) * sample_velocity(velocity[k], xx) +
                       lambda * sample_velocity(velocity[k + 1], xx);
            };
            const double k1 = v_blend(0.0, x);
            const double k2 = v_blend(0.5, x + 0.5 * h * k1);
            const double k3 = v_blend(0.5, x + 0.5 * h * k2);
            const double k4 = v_blend(1.0, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (x < grid.x_min || x > grid.x_max) throw TrajectoryLeftGridError("trajectory left the grid");
            out.positions[s][k + 1] = x;
        }
    }
    return out;
}

double perturbation_action(const MadelungFields& mf) {
    const RealField q = quantum_potential(mf);
    const int n = mf.P.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = q.values[i] * mf.P.values[i];
    return integrate(make_field(mf.P.grid, std::move(v)));
}

double kinetic_expectation(const WaveField& w) {
    require_positive_physics(w.m, w.hbar);
    const ComplexField g = gradient_order4(w.psi);
    const int n = w.psi.grid.n_points;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = std::norm(g.values[i]);
    return w.hbar * w.hbar / (2.0 * w.m) * integrate(make_field(w.psi.grid, std::move(v)));
}

}  // namespace stablab
