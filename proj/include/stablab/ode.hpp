#pragma once

#include <functional>
#include <vector>

#include "stablab/errors.hpp"

namespace stablab {

enum class OdeMethod { rk4, leapfrog };

struct OdeStepperSpec {
    OdeMethod method = OdeMethod::rk4;
    double dt = 1e-3;
    double t0 = 0.0;
};

using OdeState = std::vector<double>;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;

struct OdeSolution {
    std::vector<double> t;
    std::vector<OdeState> states;  // n_steps + 1 entries, initial state included
};

// rk4: classical fourth-order Runge-Kutta.
// leapfrog: kick-drift-kick; the state is (x | v) with even dimension and the
// rhs must be separable (dx/dt depends on v only, dv/dt on x only).
// Non-finite or overflowing states raise IntegrationDivergedError with the step index.
OdeSolution ode_solve(const OdeRhs& rhs, const OdeState& state0, const OdeStepperSpec& stepper,
                      int n_steps);

}  // namespace stablab
