#include "stablab/classical.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace stablab {

namespace {

constexpr double kBranchFloor = 1e-8;
constexpr double kFdRelTol = 1e-6;

double fd_step(double x) { return 1e-5 * (1.0 + std::fabs(x)); }

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * (1.0 + std::fabs(a) + std::fabs(b));
}

void require_shape(const Mat& m, int rows, int cols, const char* what) {
    if (static_cast<int>(m.size()) != rows)
        throw DimensionMismatchError(std::string(what) + ": wrong row count");
    for (const auto& r : m)
        if (static_cast<int>(r.size()) != cols)
            throw DimensionMismatchError(std::string(what) + ": wrong column count");
}

// d²g/dq_k dq_l at q, all k,l, via the analytic callable or central
// differences of dg.
std::vector<std::vector<Mat>> second_metric_derivatives(const HamiltonianSystem& sys,
                                                        const Vec& q) {
    if (sys.d2g) return sys.d2g(q);
    const int n = sys.n;
    std::vector<std::vector<Mat>> out(n, std::vector<Mat>(n));
    for (int l = 0; l < n; ++l) {
        Vec qp = q, qm = q;
        const double h = fd_step(q[l]);
        qp[l] += h;
        qm[l] -= h;
        const std::vector<Mat> dgp = sys.dg(qp);
        const std::vector<Mat> dgm = sys.dg(qm);
        for (int k = 0; k < n; ++k) {
            Mat d(n, Vec(n, 0.0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) d[i][j] = (dgp[k][i][j] - dgm[k][i][j]) / (2.0 * h);
            out[k][l] = std::move(d);
        }
    }
    return out;
}

struct VariationalBlocks {
    Mat g;    // H_pp
    Mat b;    // B_is = sum_k dg_ik/dq_s p_k  (H_pq)
    Mat hqq;  // (1/2) p·d2g·p + s·d2U
};

VariationalBlocks variational_blocks(const HamiltonianSystem& sys, const Vec& q, const Vec& p) {
    const int n = sys.n;
    VariationalBlocks bl;
    bl.g = sys.g(q);
    const std::vector<Mat> dg = sys.dg(q);
    bl.b = Mat(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += dg[s][i][k] * p[k];
            bl.b[i][s] = acc;
        }
    const std::vector<std::vector<Mat>> d2g = second_metric_derivatives(sys, q);
    const Mat d2u = sys.d2U(q);
    const double sign = potential_sign(sys);
    bl.hqq = Mat(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) acc += d2g[i][s][j][k] * p[j] * p[k];
            bl.hqq[i][s] = 0.5 * acc + sign * d2u[i][s];
        }
    return bl;
}

}  // namespace

double potential_sign(const HamiltonianSystem& sys) {
    return sys.sign_convention == SignConvention::T_plus_U ? 1.0 : -1.0;
}

void validate_hamiltonian_system(const HamiltonianSystem& sys, const std::vector<Vec>& probes) {
    if (sys.n < 1) throw DimensionMismatchError("system dimension must be >= 1");
    if (!sys.g || !sys.dg || !sys.U || !sys.dU || !sys.d2U)
        throw DomainError("system callbacks g, dg, U, dU, d2U are all required");
    const int n = sys.n;
    for (const Vec& q : probes) {
        if (static_cast<int>(q.size()) != n)
            throw DimensionMismatchError("probe point has wrong dimension");
        const Mat g = sys.g(q);
        require_shape(g, n, n, "g(q)");
        if (!is_symmetric(g, 1e-9)) throw DomainError("g(q) is not symmetric at a probe point");
        if (!is_positive_definite(g))
            throw DomainError("g(q) is not positive definite at a probe point");

        const std::vector<Mat> dg = sys.dg(q);
        if (static_cast<int>(dg.size()) != n)
            throw DimensionMismatchError("dg(q) must return n matrices");
        for (int k = 0; k < n; ++k) {
            require_shape(dg[k], n, n, "dg(q)[k]");
            Vec qp = q, qm = q;
            const double h = fd_step(q[k]);
            qp[k] += h;
            qm[k] -= h;
            const Mat gp = sys.g(qp), gm = sys.g(qm);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double fd = (gp[i][j] - gm[i][j]) / (2.0 * h);
                    if (!close_rel(dg[k][i][j], fd, kFdRelTol))
                        throw DomainError("dg disagrees with finite differences of g");
                }
        }

        const Vec du = sys.dU(q);
        if (static_cast<int>(du.size()) != n)
            throw DimensionMismatchError("dU(q) has wrong dimension");
        const Mat d2u = sys.d2U(q);
        require_shape(d2u, n, n, "d2U(q)");
        if (!is_symmetric(d2u, 1e-9)) throw DomainError("d2U(q) is not symmetric");
        for (int k = 0; k < n; ++k) {
            Vec qp = q, qm = q;
            const double h = fd_step(q[k]);
            qp[k] += h;
            qm[k] -= h;
            const double fdu = (sys.U(qp) - sys.U(qm)) / (2.0 * h);
            if (!close_rel(du[k], fdu, kFdRelTol))
                throw DomainError("dU disagrees with finite differences of U");
            const Vec dup = sys.dU(qp), dum = sys.dU(qm);
            for (int i = 0; i < n; ++i) {
                const double fd2 = (dup[i] - dum[i]) / (2.0 * h);
                if (!close_rel(d2u[i][k], fd2, kFdRelTol))
                    throw DomainError("d2U disagrees with finite differences of dU");
            }
        }
    }
}

double hamiltonian(const HamiltonianSystem& sys, const Vec& q, const Vec& p) {
    const Mat g = sys.g(q);
    double t = 0.0;
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j) t += g[i][j] * p[i] * p[j];
    return 0.5 * t + potential_sign(sys) * sys.U(q);
}

OdeRhs hamilton_rhs(const HamiltonianSystem& sys) {
    const int n = sys.n;
    return [&sys, n](double, const OdeState& y) {
        const Vec q(y.begin(), y.begin() + n);
        const Vec p(y.begin() + n, y.end());
        const Mat g = sys.g(q);
        const std::vector<Mat> dg = sys.dg(q);
        const Vec du = sys.dU(q);
        const double sign = potential_sign(sys);
        OdeState dy(2 * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dy[i] += g[i][j] * p[j];
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) acc += dg[i][j][k] * p[j] * p[k];
            dy[n + i] = -0.5 * acc - sign * du[i];
        }
        return dy;
    };
}

std::vector<PhasePoint> hamilton_flow(const HamiltonianSystem& sys, const PhasePoint& x0,
                                      const OdeStepperSpec& stepper, int n_steps) {
    if (static_cast<int>(x0.q.size()) != sys.n || static_cast<int>(x0.p.size()) != sys.n)
        throw DimensionMismatchError("phase point dimension differs from the system's");
    OdeState y0(2 * sys.n);
    for (int i = 0; i < sys.n; ++i) {
        y0[i] = x0.q[i];
        y0[sys.n + i] = x0.p[i];
    }
    OdeStepperSpec spec = stepper;
    spec.t0 = x0.t;
    const OdeSolution sol = ode_solve(hamilton_rhs(sys), y0, spec, n_steps);
    std::vector<PhasePoint> traj(sol.states.size());
    for (std::size_t k = 0; k < sol.states.size(); ++k) {
        traj[k].q = Vec(sol.states[k].begin(), sol.states[k].begin() + sys.n);
        traj[k].p = Vec(sol.states[k].begin() + sys.n, sol.states[k].end());
        traj[k].t = sol.t[k];
    }
    return traj;
}

VariationalState variational_rhs(const HamiltonianSystem& sys, const PhasePoint& x,
                                 const VariationalState& v) {
    const int n = sys.n;
    if (static_cast<int>(v.xi.size()) != n || static_cast<int>(v.eta.size()) != n)
        throw DimensionMismatchError("variational state dimension differs from the system's");
    const VariationalBlocks bl = variational_blocks(sys, x.q, x.p);
    VariationalState d{Vec(n, 0.0), Vec(n, 0.0)};
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            d.xi[i] += bl.b[i][s] * v.xi[s] + bl.g[i][s] * v.eta[s];
            d.eta[i] -= bl.hqq[i][s] * v.xi[s] + bl.b[s][i] * v.eta[s];
        }
    return d;
}

OdeRhs joint_variational_rhs(const HamiltonianSystem& sys, int n_solutions) {
    const int n = sys.n;
    return [&sys, n, n_solutions](double, const OdeState& y) {
        const int half = n * (1 + n_solutions);
        const Vec q(y.begin(), y.begin() + n);
        const Vec p(y.begin() + half, y.begin() + half + n);
        const Mat g = sys.g(q);
        const std::vector<Mat> dg = sys.dg(q);
        const Vec du = sys.dU(q);
        const double sign = potential_sign(sys);
        const VariationalBlocks bl = variational_blocks(sys, q, p);
        OdeState dy(y.size(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dy[i] += g[i][j] * p[j];
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) acc += dg[i][j][k] * p[j] * p[k];
            dy[half + i] = -0.5 * acc - sign * du[i];
        }
        for (int s = 0; s < n_solutions; ++s) {
            const int xo = n * (1 + s);       // xi block offset
            const int eo = half + n * (1 + s);  // eta block offset
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    dy[xo + i] += bl.b[i][j] * y[xo + j] + bl.g[i][j] * y[eo + j];
                    dy[eo + i] -= bl.hqq[i][j] * y[xo + j] + bl.b[j][i] * y[eo + j];
                }
        }
        return dy;
    };
}

double bilinear_invariant(const VariationalState& v1, const VariationalState& v2) {
    if (v1.xi.size() != v2.xi.size() || v1.eta.size() != v2.eta.size() ||
        v1.xi.size() != v1.eta.size())
        throw DimensionMismatchError("bilinear invariant needs states of equal dimension");
    double c = 0.0;
    for (std::size_t s = 0; s < v1.xi.size(); ++s)
        c += v1.xi[s] * v2.eta[s] - v1.eta[s] * v2.xi[s];
    return c;
}

double lyapunov_characteristic_value(const std::vector<std::pair<double, double>>& samples,
                                     double t_tail_fraction) {
    if (samples.size() < 2) throw DomainError("characteristic value needs two or more samples");
    if (!(t_tail_fraction > 0.0) || t_tail_fraction > 1.0)
        throw DomainError("tail fraction must lie in (0, 1]");
    const double t_start = samples.front().first;
    const double t_end = samples.back().first;
    if (!(t_end > t_start)) throw DomainError("samples must span increasing times");
    const double t_cut = t_end - t_tail_fraction * (t_end - t_start);
    Vec t, logm;
    for (const auto& [ti, mi] : samples) {
        if (ti < t_cut) continue;
        const double mag = std::fabs(mi);
        if (!(mag > 0.0)) throw DomainError("zero magnitude in the fitted tail");
        t.push_back(ti);
        logm.push_back(std::log(mag));
    }
    if (t.size() < 2) throw DomainError("fitted tail is empty");
    return -least_squares_slope(t, logm);
}

void validate_complete_integral(const CompleteIntegral& ci,
                                const std::vector<std::pair<double, Vec>>& probes) {
    if (ci.n < 1) throw DimensionMismatchError("integral dimension must be >= 1");
    if (!ci.S || !ci.dS_dq || !ci.dS_dt || !ci.d2S_dqdq || !ci.d2S_dqdalpha || !ci.E)
        throw DomainError("complete integral callbacks are all required");
    if (static_cast<int>(ci.alpha.size()) != ci.n)
        throw DimensionMismatchError("alpha vector has wrong dimension");
    const int n = ci.n;
    for (const auto& [t, q] : probes) {
        const Vec sq = ci.dS_dq(t, q, ci.alpha);
        if (static_cast<int>(sq.size()) != n)
            throw DimensionMismatchError("dS_dq has wrong dimension");
        for (int k = 0; k < n; ++k) {
            Vec qp = q, qm = q;
            const double h = fd_step(q[k]);
            qp[k] += h;
            qm[k] -= h;
            const double fd = (ci.S(t, qp, ci.alpha) - ci.S(t, qm, ci.alpha)) / (2.0 * h);
            if (!close_rel(sq[k], fd, kFdRelTol))
                throw DomainError("dS_dq disagrees with finite differences of S");
        }
        {
            const double ht = 1e-5 * (1.0 + std::fabs(t));
            const double fd = (ci.S(t + ht, q, ci.alpha) - ci.S(t - ht, q, ci.alpha)) / (2.0 * ht);
            if (!close_rel(ci.dS_dt(t, q, ci.alpha), fd, kFdRelTol))
                throw DomainError("dS_dt disagrees with finite differences of S");
        }
        const Mat sqq = ci.d2S_dqdq(t, q, ci.alpha);
        require_shape(sqq, n, n, "d2S_dqdq");
        for (int k = 0; k < n; ++k) {
            Vec qp = q, qm = q;
            const double h = fd_step(q[k]);
            qp[k] += h;
            qm[k] -= h;
            const Vec sp = ci.dS_dq(t, qp, ci.alpha), sm = ci.dS_dq(t, qm, ci.alpha);
            for (int i = 0; i < n; ++i) {
                const double fd = (sp[i] - sm[i]) / (2.0 * h);
                if (!close_rel(sqq[i][k], fd, kFdRelTol))
                    throw DomainError("d2S_dqdq disagrees with finite differences of dS_dq");
            }
        }
        const Mat sqa = ci.d2S_dqdalpha(t, q, ci.alpha);
        require_shape(sqa, n, n, "d2S_dqdalpha");
        for (int k = 0; k < n; ++k) {
            Vec ap = ci.alpha, am = ci.alpha;
            const double h = fd_step(ci.alpha[k]);
            ap[k] += h;
            am[k] -= h;
            const Vec sp = ci.dS_dq(t, q, ap), sm = ci.dS_dq(t, q, am);
            for (int i = 0; i < n; ++i) {
                const double fd = (sp[i] - sm[i]) / (2.0 * h);
                if (!close_rel(sqa[i][k], fd, kFdRelTol))
                    throw DomainError("d2S_dqdalpha disagrees with finite differences of dS_dq");
            }
        }
        if (std::fabs(determinant(sqa)) <= 1e-12)
            throw NotIndependentError("det d2S_dqdalpha vanishes at a probe point");
    }
}

CompleteIntegral free_particle_integral(double m, double alpha) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    CompleteIntegral ci;
    ci.n = 1;
    ci.alpha = {alpha};
    ci.S = [m](double t, const Vec& q, const Vec& a) {
        return a[0] * q[0] - a[0] * a[0] / (2.0 * m) * t;
    };
    ci.dS_dq = [](double, const Vec&, const Vec& a) { return Vec{a[0]}; };
    ci.dS_dt = [m](double, const Vec&, const Vec& a) { return -a[0] * a[0] / (2.0 * m); };
    ci.d2S_dqdq = [](double, const Vec&, const Vec&) { return Mat{{0.0}}; };
    ci.d2S_dqdalpha = [](double, const Vec&, const Vec&) { return Mat{{1.0}}; };
    ci.E = [m](const Vec& a) { return a[0] * a[0] / (2.0 * m); };
    return ci;
}

namespace {

double branch_checked(double s_q) {
    if (std::fabs(s_q) < kBranchFloor)
        throw BranchSingularityError("dS/dq vanishes at a turning point");
    return s_q;
}

}  // namespace

CompleteIntegral harmonic_integral(double m, double omega, double alpha, int branch) {
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("mass and frequency must be positive");
    if (!(alpha > 0.0)) throw DomainError("harmonic integral needs energy alpha > 0");
    if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
    const double b = branch;
    auto radicand = [m, omega](const Vec& q, const Vec& a) {
        const double r = 2.0 * m * a[0] - m * m * omega * omega * q[0] * q[0];
        if (r < 0.0) throw DomainError("coordinate beyond the harmonic turning point");
        return r;
    };
    CompleteIntegral ci;
    ci.n = 1;
    ci.alpha = {alpha};
    ci.S = [m, omega, b, radicand](double t, const Vec& q, const Vec& a) {
        const double sq = std::sqrt(radicand(q, a));
        const double w =
            0.5 * q[0] * sq + a[0] / omega * std::asin(q[0] * m * omega / std::sqrt(2.0 * m * a[0]));
        return b * w - a[0] * t;
    };
    ci.dS_dq = [b, radicand](double, const Vec& q, const Vec& a) {
        return Vec{b * std::sqrt(radicand(q, a))};
    };
    ci.dS_dt = [](double, const Vec&, const Vec& a) { return -a[0]; };
    ci.d2S_dqdq = [m, omega, b, radicand](double, const Vec& q, const Vec& a) {
        const double sq = branch_checked(b * std::sqrt(radicand(q, a)));
        return Mat{{-m * m * omega * omega * q[0] / sq}};
    };
    ci.d2S_dqdalpha = [m, b, radicand](double, const Vec& q, const Vec& a) {
        const double sq = branch_checked(b * std::sqrt(radicand(q, a)));
        return Mat{{m / sq}};
    };
    ci.E = [](const Vec& a) { return a[0]; };
    return ci;
}

CompleteIntegral linear_potential_integral(double m, double F, double alpha, int branch) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (F == 0.0) throw DomainError("linear potential needs F != 0");
    if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
    const double b = branch;
    auto radicand = [m, F](const Vec& q, const Vec& a) {
        const double r = 2.0 * m * (a[0] - F * q[0]);
        if (r < 0.0) throw DomainError("coordinate beyond the linear-potential turning point");
        return r;
    };
    CompleteIntegral ci;
    ci.n = 1;
    ci.alpha = {alpha};
    ci.S = [m, F, b, radicand](double t, const Vec& q, const Vec& a) {
        const double r = radicand(q, a);
        return -b * r * std::sqrt(r) / (3.0 * m * F) - a[0] * t;
    };
    ci.dS_dq = [b, radicand](double, const Vec& q, const Vec& a) {
        return Vec{b * std::sqrt(radicand(q, a))};
    };
    ci.dS_dt = [](double, const Vec&, const Vec& a) { return -a[0]; };
    ci.d2S_dqdq = [m, F, b, radicand](double, const Vec& q, const Vec& a) {
        const double sq = branch_checked(b * std::sqrt(radicand(q, a)));
        return Mat{{-m * F / sq}};
    };
    ci.d2S_dqdalpha = [m, b, radicand](double, const Vec& q, const Vec& a) {
        const double sq = branch_checked(b * std::sqrt(radicand(q, a)));
        return Mat{{m / sq}};
    };
    ci.E = [](const Vec& a) { return a[0]; };
    return ci;
}

CompleteIntegral variable_mass_integral(double m, double eps, double alpha, int branch) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (eps < 0.0) throw DomainError("eps must be nonnegative");
    if (!(alpha > 0.0)) throw DomainError("variable-mass integral needs energy alpha > 0");
    if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
    const double b = branch;
    CompleteIntegral ci;
    ci.n = 1;
    ci.alpha = {alpha};
    ci.S = [m, eps, b](double t, const Vec& q, const Vec& a) {
        const double c = std::sqrt(2.0 * a[0] * m);
        const double u = std::sqrt(1.0 + eps * q[0] * q[0]);
        const double w = eps > 0.0
                             ? c * (0.5 * q[0] * u + 0.5 / std::sqrt(eps) * std::asinh(std::sqrt(eps) * q[0]))
                             : c * q[0];
        return b * w - a[0] * t;
    };
    ci.dS_dq = [m, eps, b](double, const Vec& q, const Vec& a) {
        return Vec{b * std::sqrt(2.0 * a[0] * m * (1.0 + eps * q[0] * q[0]))};
    };
    ci.dS_dt = [](double, const Vec&, const Vec& a) { return -a[0]; };
    ci.d2S_dqdq = [m, eps, b](double, const Vec& q, const Vec& a) {
        const double u = std::sqrt(1.0 + eps * q[0] * q[0]);
        return Mat{{b * std::sqrt(2.0 * a[0] * m) * eps * q[0] / u}};
    };
    ci.d2S_dqdalpha = [m, eps, b](double, const Vec& q, const Vec& a) {
        return Mat{{b * std::sqrt(2.0 * a[0] * m * (1.0 + eps * q[0] * q[0])) / (2.0 * a[0])}};
    };
    ci.E = [](const Vec& a) { return a[0]; };
    return ci;
}

namespace {

HamiltonianSystem one_dof_system(std::function<double(double)> g1, std::function<double(double)> dg1,
                                 std::function<double(double)> d2g1, std::function<double(double)> u,
                                 std::function<double(double)> du, std::function<double(double)> d2u,
                                 SignConvention sign) {
    HamiltonianSystem sys;
    sys.n = 1;
    sys.g = [g1](const Vec& q) { return Mat{{g1(q[0])}}; };
    sys.dg = [dg1](const Vec& q) { return std::vector<Mat>{{{dg1(q[0])}}}; };
    sys.d2g = [d2g1](const Vec& q) {
        return std::vector<std::vector<Mat>>{{Mat{{d2g1(q[0])}}}};
    };
    sys.U = [u](const Vec& q) { return u(q[0]); };
    sys.dU = [du](const Vec& q) { return Vec{du(q[0])}; };
    sys.d2U = [d2u](const Vec& q) { return Mat{{d2u(q[0])}}; };
    sys.sign_convention = sign;
    return sys;
}

}  // namespace

HamiltonianSystem free_system(double m, SignConvention sign) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    return one_dof_system([m](double) { return 1.0 / m; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }, [](double) { return 0.0; }, sign);
}

HamiltonianSystem harmonic_system(double m, double omega, SignConvention sign) {
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("mass and frequency must be positive");
    return one_dof_system([m](double) { return 1.0 / m; }, [](double) { return 0.0; },
                          [](double) { return 0.0; },
                          [m, omega](double q) { return 0.5 * m * omega * omega * q * q; },
                          [m, omega](double q) { return m * omega * omega * q; },
                          [m, omega](double) { return m * omega * omega; }, sign);
}

HamiltonianSystem linear_potential_system(double m, double F, SignConvention sign) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    return one_dof_system([m](double) { return 1.0 / m; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }, [F](double q) { return F * q; },
                          [F](double) { return F; }, [](double) { return 0.0; }, sign);
}

HamiltonianSystem variable_mass_system(double m, double eps, SignConvention sign) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (eps < 0.0) throw DomainError("eps must be nonnegative");
    auto g1 = [m, eps](double q) { return 1.0 / (m * (1.0 + eps * q * q)); };
    auto dg1 = [m, eps](double q) {
        const double d = 1.0 + eps * q * q;
        return -2.0 * eps * q / (m * d * d);
    };
    auto d2g1 = [m, eps](double q) {
        const double d = 1.0 + eps * q * q;
        return (6.0 * eps * eps * q * q - 2.0 * eps) / (m * d * d * d);
    };
    return one_dof_system(g1, dg1, d2g1, [](double) { return 0.0; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }, sign);
}

Vec constrain_eta(const CompleteIntegral& ci, double t, const Vec& q, const Vec& xi) {
    return mat_vec(ci.d2S_dqdq(t, q, ci.alpha), xi);
}

Mat reduced_variational_matrix(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                               const Vec& q) {
    if (sys.n != ci.n) throw DimensionMismatchError("system and integral dimensions differ");
    const int n = sys.n;
    const Mat g = sys.g(q);
    const std::vector<Mat> dg = sys.dg(q);
    const Vec sq = ci.dS_dq(t, q, ci.alpha);
    const Mat sqq = ci.d2S_dqdq(t, q, ci.alpha);
    Mat a(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += dg[s][i][j] * sq[j] + g[i][j] * sqq[j][s];
            a[i][s] = acc;
        }
    return a;
}

Vec reduced_variational_rhs(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                            const Vec& q, const Vec& xi) {
    return mat_vec(reduced_variational_matrix(sys, ci, t, q), xi);
}

double stability_divergence(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                            const Vec& q) {
    const Mat a = reduced_variational_matrix(sys, ci, t, q);
    double tr = 0.0;
    for (int i = 0; i < sys.n; ++i) tr += a[i][i];
    return tr;
}

double hj_residual(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                   const Vec& q) {
    if (sys.n != ci.n) throw DimensionMismatchError("system and integral dimensions differ");
    const Mat g = sys.g(q);
    const Vec sq = ci.dS_dq(t, q, ci.alpha);
    double twice_t = 0.0;
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j) twice_t += g[i][j] * sq[i] * sq[j];
    return twice_t - 2.0 * (ci.E(ci.alpha) - potential_sign(sys) * sys.U(q));
}

double wave_equation_residual(const HamiltonianSystem& sys, const CompleteIntegral& ci,
                              const WaveProfile& profile, double t, const Vec& q) {
    const double e = ci.E(ci.alpha);
    if (e == 0.0) throw ZeroEnergyError("wave-equation residual divides by E = 0");
    const double u = ci.S(t, q, ci.alpha);
    return profile.first_derivative(u) * stability_divergence(sys, ci, t, q) +
           profile.second_derivative(u) * hj_residual(sys, ci, t, q);
}

AbelCheck abel_determinant_check(const HamiltonianSystem& sys, const CompleteIntegral& ci,
                                 const std::vector<PhasePoint>& trajectory,
                                 const Mat& xi_columns) {
    const int n = sys.n;
    if (trajectory.size() < 3)
        throw DomainError("Abel check needs a trajectory of three or more samples");
    if (static_cast<int>(xi_columns.size()) != n)
        throw DimensionMismatchError("need exactly n initial xi columns");
    Mat w(n, Vec(n, 0.0));
    for (int j = 0; j < n; ++j) {
        if (static_cast<int>(xi_columns[j].size()) != n)
            throw DimensionMismatchError("xi column has wrong dimension");
        for (int i = 0; i < n; ++i) w[i][j] = xi_columns[j][i];
    }
    const double det0 = determinant(w);
    if (std::fabs(det0) <= 1e-12)
        throw NotIndependentError("initial xi columns are not linearly independent");

    const std::size_t nt = trajectory.size();
    const double dt = trajectory[1].t - trajectory[0].t;
    AbelCheck out;
    out.t.resize(nt);
    out.det_w.resize(nt);
    out.abel_rhs.resize(nt);
    out.rel_err.resize(nt);

    auto a_at = [&](double t, const Vec& q) { return reduced_variational_matrix(sys, ci, t, q); };
    auto interp_mid = [&](std::size_t k) {
        // quadratic through three consecutive trajectory points, evaluated at
        // the half step of interval k
        Vec qm(n, 0.0);
        const bool last = (k + 2 >= nt);
        const Vec& q0 = trajectory[last ? k - 1 : k].q;
        const Vec& q1 = trajectory[last ? k : k + 1].q;
        const Vec& q2 = trajectory[last ? k + 1 : k + 2].q;
        const double c0 = last ? -0.125 : 0.375;
        const double c1 = 0.75;
        const double c2 = last ? 0.375 : -0.125;
        for (int i = 0; i < n; ++i) qm[i] = c0 * q0[i] + c1 * q1[i] + c2 * q2[i];
        return qm;
    };

    double integral_l = 0.0;
    double l_prev = 0.0;
    {
        const Mat a0 = a_at(trajectory[0].t, trajectory[0].q);
        for (int i = 0; i < n; ++i) l_prev += a0[i][i];
    }
    out.t[0] = trajectory[0].t;
    out.det_w[0] = det0;
    out.abel_rhs[0] = det0;
    out.rel_err[0] = 0.0;

    for (std::size_t k = 0; k + 1 < nt; ++k) {
        const Mat a_k = a_at(trajectory[k].t, trajectory[k].q);
        const Mat a_mid = a_at(trajectory[k].t + 0.5 * dt, interp_mid(k));
        const Mat a_next = a_at(trajectory[k + 1].t, trajectory[k + 1].q);

        const Mat k1 = mat_mul(a_k, w);
        Mat tmp = w;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tmp[i][j] = w[i][j] + 0.5 * dt * k1[i][j];
        const Mat k2 = mat_mul(a_mid, tmp);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tmp[i][j] = w[i][j] + 0.5 * dt * k2[i][j];
        const Mat k3 = mat_mul(a_mid, tmp);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tmp[i][j] = w[i][j] + dt * k3[i][j];
        const Mat k4 = mat_mul(a_next, tmp);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w[i][j] += dt / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);

        double l_next = 0.0;
        for (int i = 0; i < n; ++i) l_next += a_next[i][i];
        integral_l += 0.5 * dt * (l_prev + l_next);
        l_prev = l_next;

        out.t[k + 1] = trajectory[k + 1].t;
        out.det_w[k + 1] = determinant(w);
        out.abel_rhs[k + 1] = det0 * std::exp(integral_l);
        const double denom = std::fabs(out.abel_rhs[k + 1]);
        out.rel_err[k + 1] =
            std::fabs(out.det_w[k + 1] - out.abel_rhs[k + 1]) / (denom > 1e-300 ? denom : 1e-300);
        if (out.rel_err[k + 1] > out.max_rel_err) out.max_rel_err = out.rel_err[k + 1];
    }
    return out;
}

double symmetric_period_average(const std::function<double(double)>& f, double t0, double period,
                                int n_samples, const std::vector<double>& exclude_centers,
                                double exclude_halfwidth) {
    if (n_samples < 2) throw DomainError("period average needs two or more samples");
    double acc = 0.0;
    int kept = 0;
    for (int j = 0; j < n_samples; ++j) {
        const double t = t0 + (j + 0.5) * period / n_samples;
        bool excluded = false;
        for (double c : exclude_centers) {
            if (std::fabs(t - c) < exclude_halfwidth) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        acc += f(t);
        ++kept;
    }
    if (kept == 0) throw DomainError("every sample fell inside an excluded window");
    return acc / kept;
}

}  // namespace stablab
