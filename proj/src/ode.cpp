#include "stablab/ode.hpp"

#include <cmath>
#include <cstddef>

namespace stablab {

namespace {

bool state_ok(const OdeState& y) {
    for (double v : y) {
        if (!std::isfinite(v) || std::fabs(v) > 1e300) return false;
    }
    return true;
}

OdeState axpy(const OdeState& y, double a, const OdeState& d) {
    OdeState out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * d[i];
    return out;
}

void rk4_step(const OdeRhs& rhs, double t, double dt, OdeState& y) {
    const OdeState k1 = rhs(t, y);
    const OdeState k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
    const OdeState k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
    const OdeState k4 = rhs(t + dt, axpy(y, dt, k3));
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Kick-drift-kick: exact for rhs of the separable shape
// d(x)/dt = f(v), d(v)/dt = g(x) with the state packed as (x | v).
void leapfrog_step(const OdeRhs& rhs, double t, double dt, OdeState& y) {
    const std::size_t h = y.size() / 2;
    OdeState d = rhs(t, y);
    for (std::size_t i = 0; i < h; ++i) y[h + i] += 0.5 * dt * d[h + i];
    d = rhs(t + 0.5 * dt, y);
    for (std::size_t i = 0; i < h; ++i) y[i] += dt * d[i];
    d = rhs(t + dt, y);
    for (std::size_t i = 0; i < h; ++i) y[h + i] += 0.5 * dt * d[h + i];
}

}  // namespace

OdeSolution ode_solve(const OdeRhs& rhs, const OdeState& state0, const OdeStepperSpec& stepper,
                      int n_steps) {
    if (!(stepper.dt > 0.0)) throw DomainError("ode_solve requires dt > 0");
    if (n_steps < 0) throw DomainError("ode_solve requires n_steps >= 0");
    if (stepper.method == OdeMethod::leapfrog && state0.size() % 2 != 0)
        throw DimensionMismatchError("leapfrog needs an even state dimension (x | v)");
    if (!state_ok(state0)) throw IntegrationDivergedError(0);

    OdeSolution sol;
    sol.t.reserve(n_steps + 1);
    sol.states.reserve(n_steps + 1);
    OdeState y = state0;
    sol.t.push_back(stepper.t0);
    sol.states.push_back(y);
    for (int step = 1; step <= n_steps; ++step) {
        const double t = stepper.t0 + stepper.dt * (step - 1);
        if (stepper.method == OdeMethod::rk4)
            rk4_step(rhs, t, stepper.dt, y);
        else
            leapfrog_step(rhs, t, stepper.dt, y);
        if (!state_ok(y)) throw IntegrationDivergedError(step);
        sol.t.push_back(stepper.t0 + stepper.dt * step);
        sol.states.push_back(y);
    }
    return sol;
}

}  // namespace stablab
