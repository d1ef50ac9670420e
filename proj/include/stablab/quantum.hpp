#pragma once

#include <vector>

#include "stablab/calculus.hpp"
#include "stablab/grid.hpp"
#include "stablab/phase.hpp"

namespace stablab {

struct WaveField {
    ComplexField psi;
    double m = 1.0;
    double hbar = 1.0;
    double t = 0.0;
};

struct MadelungFields {
    RealField P;  // probability density A²
    RealField S;  // action: hbar × unwrapped phase
    RealField A;  // amplitude |psi|
    double m = 1.0;
    double hbar = 1.0;
    double t = 0.0;
};

// A = |psi|, S = hbar·unwrap_phase(psi), P = A². Nodes raise AmplitudeFloorError.
MadelungFields decompose(const WaveField& w);

// psi = A·exp(iS/hbar).
WaveField recompose(const MadelungFields& mf);

// Returns mf with S shifted by the integer multiple of 2·pi·hbar that brings
// it closest to ref.S at the maximum-amplitude sample, so that S differences
// between consecutive snapshots are free of whole-branch jumps.
MadelungFields align_phase_to(const MadelungFields& ref, MadelungFields mf);

struct CnDiagnostics {
    double norm_initial = 0.0;
    double norm_final = 0.0;
    double max_step_norm_drift = 0.0;      // max per-step |norm-1| change
    double max_edge_amplitude_ratio = 0.0;  // max over steps of |psi_edge|/max|psi|
    bool boundary_leak = false;             // ratio exceeded 1e-6
};

// Crank-Nicolson: (1 + i·dt/(2·hbar)·H) psi' = (1 - i·dt/(2·hbar)·H) psi with
// H the standard 3-point discretization of -(hbar²/2m)Δ + U and homogeneous
// Dirichlet values beyond the stored samples. Tridiagonal (Thomas) solve;
// unitary up to roundoff.
WaveField evolve_cn(const WaveField& w, const RealField& U, double dt, int n_steps,
                    CnDiagnostics* diag = nullptr);

// Snapshots every snapshot_stride steps (initial state included; the final
// state is appended if it does not land on a stride boundary).
std::vector<WaveField> evolve_cn_history(const WaveField& w, const RealField& U, double dt,
                                         int n_steps, int snapshot_stride,
                                         CnDiagnostics* diag = nullptr);

// Q = -(hbar²/2m)·ΔA/A (amplitude form, order-4 interior stencils).
RealField quantum_potential(const MadelungFields& mf);

// Q = -(hbar²/4m)·[ΔP/P - (1/2)(∇P/P)²] (density form; algebraically equal to
// the amplitude form).
RealField quantum_potential_p_form(const MadelungFields& mf);

// max |Q_A - Q_P| over the window P >= window_rel_floor·max(P); the window
// excludes far tails where stencil roundoff is divided by a vanishing density.
double q_form_agreement(const MadelungFields& mf, double window_rel_floor = 1e-2);

// (P_b - P_a)/dt + ∇·(P̄ ∇S̄ / m) at the midpoint of the two snapshots
// (barred fields are snapshot averages). Divergence form throughout.
RealField continuity_residual(const MadelungFields& a, const MadelungFields& b, double dt);

// The compression term P·ΔS/m that the gradient-only transport form omits.
RealField compression_term(const MadelungFields& mf);

// (A_b - A_a)/dt + (1/2m)(2 ∇Ā·∇S̄ + Ā ΔS̄): amplitude-transport residual.
RealField amplitude_transport_residual(const MadelungFields& a, const MadelungFields& b,
                                       double dt);

// (S_b - S_a)/dt + (∇S̄)²/2m + U + Q̄ with Q̄ the snapshot-averaged quantum
// potential built from the evolver's own 3-point Laplacian (so a state that is
// stationary under the discrete evolution closes the balance); S_b is
// branch-aligned to S_a first.
RealField quantum_hj_residual(const MadelungFields& a, const MadelungFields& b, const RealField& U,
                              double dt);

// Q from the action balance, -∂tS - U - (∇S̄)²/2m, minus Q from the amplitude
// curvature; vanishes on exact Schrödinger solutions.
RealField chetaev_q_consistency(const MadelungFields& a, const MadelungFields& b,
                                const RealField& U, double dt);

struct StabilityConditionForms {
    RealField psi_form;        // Re[ (hbar/i)·d/dx( (1/m)(psi'/psi - A'/A) ) ]
    RealField laplacian_form;  // ΔS/m
};

// The wavefunction form of the stability divergence against its direct form.
StabilityConditionForms stability_condition_residual(const MadelungFields& mf);

// max |psi_form - laplacian_form| over the window P >= window_rel_floor·max(P).
double stability_condition_agreement(const MadelungFields& mf, double window_rel_floor = 1e-2);

struct BohmTrajectories {
    std::vector<double> t;                       // snapshot times
    std::vector<std::vector<double>> positions;  // [seed][snapshot]
};

// dx/dt = (∂S/∂x)/m by rk4 over each snapshot interval; the velocity field is
// linear in x between grid points and linear in t between snapshots. Leaving
// the grid raises TrajectoryLeftGridError.
BohmTrajectories bohm_trajectories(const std::vector<WaveField>& history,
                                   const std::vector<double>& seeds);

// ∫ Q·P dx (the least-action-of-perturbation functional; no minimization).
double perturbation_action(const MadelungFields& mf);

// ⟨psi| -(hbar²/2m)Δ |psi⟩ evaluated by parts as (hbar²/2m)∫|∇psi|².
double kinetic_expectation(const WaveField& w);

}  // namespace stablab
