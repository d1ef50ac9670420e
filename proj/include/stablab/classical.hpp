#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "stablab/linalg.hpp"
#include "stablab/ode.hpp"

namespace stablab {

// H = (1/2) p·g(q)·p + s·U(q), with s = +1 for T_plus_U and s = -1 for
// T_minus_U. g is the inverse-mass matrix; dg(q)[k] = dg/dq_k; the optional
// d2g(q)[k][l] = d²g/dq_k dq_l is replaced by central differences of dg when
// absent.
enum class SignConvention { T_minus_U, T_plus_U };

struct HamiltonianSystem {
    int n = 1;
    std::function<Mat(const Vec&)> g;
    std::function<std::vector<Mat>(const Vec&)> dg;
    std::function<std::vector<std::vector<Mat>>(const Vec&)> d2g;  // optional
    std::function<double(const Vec&)> U;
    std::function<Vec(const Vec&)> dU;
    std::function<Mat(const Vec&)> d2U;
    SignConvention sign_convention = SignConvention::T_plus_U;
};

struct PhasePoint {
    Vec q;
    Vec p;
    double t = 0.0;
};

struct VariationalState {
    Vec xi;
    Vec eta;
};

// Checks shapes, symmetry/positive-definiteness of g, and agreement of dg,
// dU, d2U with finite differences (1e-6 relative) at the probe points.
void validate_hamiltonian_system(const HamiltonianSystem& sys, const std::vector<Vec>& probes);

double potential_sign(const HamiltonianSystem& sys);
double hamiltonian(const HamiltonianSystem& sys, const Vec& q, const Vec& p);

// Packed rhs on the state (q | p): dq/dt = g p, dp/dt = -(1/2) p·dg/dq_i·p - s·dU_i.
OdeRhs hamilton_rhs(const HamiltonianSystem& sys);

std::vector<PhasePoint> hamilton_flow(const HamiltonianSystem& sys, const PhasePoint& x0,
                                      const OdeStepperSpec& stepper, int n_steps);

// Poincaré variational equations along the reference phase point:
//   dxi/dt  =  B xi + g eta,        B_is = sum_k dg_ik/dq_s p_k
//   deta/dt = -Hqq xi - Bᵀ eta,     Hqq  = (1/2) p·d2g·p + s·d2U
VariationalState variational_rhs(const HamiltonianSystem& sys, const PhasePoint& x,
                                 const VariationalState& v);

// Packed rhs on (q, xi.. | p, eta..): the joint reference + variational flow,
// ordered positions-first so the leapfrog split applies when B vanishes.
OdeRhs joint_variational_rhs(const HamiltonianSystem& sys, int n_solutions);

// C = sum_s (xi_s eta'_s - eta_s xi'_s); conserved along any two solutions of
// the variational equations.
double bilinear_invariant(const VariationalState& v1, const VariationalState& v2);

// X[f] = -(least-squares slope of log|f| over the trailing t_tail_fraction of
// the time span). Zero magnitudes in the tail or an empty tail raise
// DomainError.
double lyapunov_characteristic_value(const std::vector<std::pair<double, double>>& samples,
                                     double t_tail_fraction = 0.5);

// Complete integral S(t,q,alpha) of the Hamilton-Jacobi equation, with
// analytic derivatives and the energy function E(alpha).
struct CompleteIntegral {
    int n = 1;
    std::function<double(double, const Vec&, const Vec&)> S;
    std::function<Vec(double, const Vec&, const Vec&)> dS_dq;
    std::function<double(double, const Vec&, const Vec&)> dS_dt;
    std::function<Mat(double, const Vec&, const Vec&)> d2S_dqdq;
    std::function<Mat(double, const Vec&, const Vec&)> d2S_dqdalpha;
    std::function<double(const Vec&)> E;
    Vec alpha;
};

// FD-checks the derivative callables (1e-6 relative) and requires
// det(d2S_dqdalpha) != 0 at every probe (t, q); degenerate probes raise
// NotIndependentError.
void validate_complete_integral(const CompleteIntegral& ci,
                                const std::vector<std::pair<double, Vec>>& probes);

// S = alpha q - (alpha²/2m) t, E = alpha²/2m.
CompleteIntegral free_particle_integral(double m, double alpha);

// S = branch·[(q/2)·sqrt(2m·alpha - m²w²q²) + (alpha/w)·asin(q·m·w/sqrt(2m·alpha))] - alpha·t,
// E = alpha; valid between the turning points |q| < sqrt(2 alpha/m)/w. Second
// derivatives diverge at the turning points and raise BranchSingularityError
// when |dS/dq| < 1e-8.
CompleteIntegral harmonic_integral(double m, double omega, double alpha, int branch = +1);

// U = F q: S_q = branch·sqrt(2m(alpha - F q)), E = alpha.
CompleteIntegral linear_potential_integral(double m, double F, double alpha, int branch = +1);

// Position-dependent inverse mass g(q) = 1/(m(1+eps q²)), U = 0:
// S_q = branch·sqrt(2 alpha m (1+eps q²)), E = alpha.
CompleteIntegral variable_mass_integral(double m, double eps, double alpha, int branch = +1);

// Bundled systems matching the integrals above.
HamiltonianSystem free_system(double m, SignConvention sign = SignConvention::T_plus_U);
HamiltonianSystem harmonic_system(double m, double omega,
                                  SignConvention sign = SignConvention::T_plus_U);
HamiltonianSystem linear_potential_system(double m, double F,
                                          SignConvention sign = SignConvention::T_plus_U);
HamiltonianSystem variable_mass_system(double m, double eps,
                                       SignConvention sign = SignConvention::T_plus_U);

// eta_i = sum_j d²S/dq_i dq_j · xi_j: the variation stays tangent to the
// Lagrangian manifold p = dS/dq.
Vec constrain_eta(const CompleteIntegral& ci, double t, const Vec& q, const Vec& xi);

// A_is = d/dq_s ( sum_j g_ij dS/dq_j ) = sum_j ( dg_ij/dq_s S_qj + g_ij S_qj,qs ).
Mat reduced_variational_matrix(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                               const Vec& q);

// dxi/dt = A xi on the Lagrangian manifold; equals the xi-component of
// variational_rhs when eta = constrain_eta(xi).
Vec reduced_variational_rhs(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                            const Vec& q, const Vec& xi);

// L = sum_ij d/dq_i (g_ij dS/dq_j) = trace of the reduced variational matrix.
double stability_divergence(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                            const Vec& q);

// Residual of the time-independent HJ equation:
//   sum_ij g_ij S_qi S_qj - 2(E - s U), i.e. 2T(dS/dq) minus its on-shell value.
double hj_residual(const HamiltonianSystem& sys, const CompleteIntegral& ci, double t,
                   const Vec& q);

struct WaveProfile {
    std::function<double(double)> first_derivative;   // Phi'(u)
    std::function<double(double)> second_derivative;  // Phi''(u)
};

// Chain-rule residual of the classical wave equation for psi = Phi(S):
//   sum_ij d/dq_i (g_ij dPhi/dq_j) - [2(E - sU)/E²]·d²Phi/dt²
//     = Phi'(S)·L + Phi''(S)·hj_residual.
// E = 0 raises ZeroEnergyError.
double wave_equation_residual(const HamiltonianSystem& sys, const CompleteIntegral& ci,
                              const WaveProfile& profile, double t, const Vec& q);

struct AbelCheck {
    std::vector<double> t;
    std::vector<double> det_w;     // det W(t) from integrated columns
    std::vector<double> abel_rhs;  // det W(t0) · exp(∫ L dt)
    std::vector<double> rel_err;
    double max_rel_err = 0.0;
};

// Integrates n columns of dW/dt = A(t, q(t)) W along the supplied trajectory
// (rk4; mid-step coordinates by quadratic interpolation of the trajectory) and
// compares det W(t) with the Liouville/Abel growth law. |det W(0)| <= 1e-12
// raises NotIndependentError.
AbelCheck abel_determinant_check(const HamiltonianSystem& sys, const CompleteIntegral& ci,
                                 const std::vector<PhasePoint>& trajectory,
                                 const Mat& xi_columns);

// Mean of f(t) over [t0, t0+period] on n_samples symmetric midpoints, skipping
// samples within exclude_halfwidth of any excluded center (caustic windows).
double symmetric_period_average(const std::function<double(double)>& f, double t0, double period,
                                int n_samples, const std::vector<double>& exclude_centers,
                                double exclude_halfwidth);

}  // namespace stablab
