#pragma once

#include "stablab/grid.hpp"
#include "stablab/quantum.hpp"

namespace stablab {

enum class MomentumConvention { bare, half_hbar };

// delta-p field: ∇P/P (bare) or -(hbar/2)·∇P/P (half_hbar). Samples with
// P <= density_floor raise DensityFloorError (default floor rejects only
// nonpositive densities).
RealField momentum_fluctuation(const RealField& P, MomentumConvention convention,
                               double hbar = 1.0, double density_floor = 0.0);

// ∫ (∇P)²/P dx.
double fisher_information(const RealField& P, double density_floor = 0.0);

// (c/2m)·∫(∇P)²/P; c = hbar²/4 makes this the quantum term of the total
// Hamiltonian functional.
double fisher_hamiltonian_term(const RealField& P, double c, double m,
                               double density_floor = 0.0);

// ∫ [ P(∇S)²/2m + (hbar²/2m)(∇√P)² ] dx.
double total_quantum_hamiltonian(const MadelungFields& mf);

struct PqIdentity {
    double pq_integral = 0.0;    // ∫ P·Q dx
    double fisher_side = 0.0;    // (hbar²/8m)·∫(∇P)²/P dx
    bool boundary_leak = false;  // P at a grid edge exceeded 1e-8
};

// Both sides of the integration-by-parts identity ∫PQ = (hbar²/8m)∫(∇P)²/P.
PqIdentity pq_integral_identity(const MadelungFields& mf);

struct UncertaintyProduct {
    double dq2 = 0.0;       // variance of P
    double dp2_fluct = 0.0; // ∫ P·(half_hbar delta-p)² = (hbar²/4)·Fisher
    double product = 0.0;
};

// Exact-uncertainty data; product equals hbar²/4 for Gaussian P and is bounded
// below by it in general (Cramér-Rao).
UncertaintyProduct exact_uncertainty_check(const RealField& P, double hbar,
                                           double density_floor = 0.0);

struct UncertaintyPair {
    double dx2 = 1.0;
    double dp2 = 1.0;
    double hbar = 1.0;
};

// Requires dx2, dp2 > 0 and dx2·dp2 >= hbar²/4 - 1e-12.
void require_admissible(const UncertaintyPair& u);

struct ScaleParameter {
    double alpha = 0.0;
};

// dx2' = e^{-a} dx2;  dp2' = e^{-a} dp2 + (hbar²/4)(e^{a} - e^{-a})/dx2.
// Preserves admissibility; the product hbar²/4 is a fixed point.
UncertaintyPair scale_transform(const UncertaintyPair& u, const ScaleParameter& s);

// Space dilatation on a rebuilt grid x' = e^{-a/2} x (same point count):
// P'(x') = e^{a/2} P(x), S'(x') = e^{-a} S(x), A' = √P'. Normalization is
// preserved exactly. The rebuilt half-width must stay within max_extent or
// SupportOverflowError is raised.
MadelungFields dilate_fields(const MadelungFields& mf, const ScaleParameter& s,
                             double max_extent = 0.0 /* 0 = unlimited */);

struct ClassicalMomentum {
    double dp2_cl = 0.0;         // ∫ P (∇S - mean)² dx
    double mean_momentum = 0.0;  // ∫ P ∇S dx, subtracted before squaring
};

ClassicalMomentum classical_momentum_uncertainty(const MadelungFields& mf);

// Q-functional beta·∫(∂√P)² dx; equals 1/(4·Var P) at beta = 1 for Gaussians.
double quantum_correction_functional(const RealField& P, double beta = 1.0);

struct ScaleCovarianceReport {
    double alpha = 0.0;
    double dx2_before = 0.0, dx2_after = 0.0;
    double dp2_cl_before = 0.0, dp2_cl_after = 0.0;
    double qfunc_before = 0.0, qfunc_after = 0.0;    // beta = 1 functional
    double dp2_q_before = 0.0, dp2_q_after = 0.0;    // dp2_cl + hbar²·qfunc
    double product_before = 0.0, product_after = 0.0;
    double dx2_law_residual = 0.0;      // dx2_after - e^{-a}·dx2_before
    double dp2_cl_law_residual = 0.0;   // dp2_cl_after - e^{-a}·dp2_cl_before
    double qfunc_law_residual = 0.0;    // qfunc_after - e^{a}·qfunc_before
    double covariance_residual = 0.0;   // dp2_q_after - [e^{-a}·dp2_q_before
                                        //   + hbar²(e^{a}-e^{-a})·qfunc_before]
    double eq_scale_residual = 0.0;     // qfunc_after - e^{-a}·qfunc_before
                                        //   - (e^{a}-e^{-a})/(4·dx2_before)
    double gaussian_gap = 0.0;          // 4·qfunc_before·dx2_before - 1
};

// Dilates mf by s and reports the uncertainty pairs before/after together
// with the residuals of every covariance law. covariance_residual is exact
// under the change of variables for any state; eq_scale_residual additionally
// assumes the Gaussian identity qfunc = 1/(4·dx2).
ScaleCovarianceReport scale_covariance_check(const MadelungFields& mf, const ScaleParameter& s,
                                             double hbar);

}  // namespace stablab
