#include "stablab/phase.hpp"

#include <algorithm>
#include <cmath>

namespace stablab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_to_pi(double d) { return d - kTwoPi * std::round(d / kTwoPi); }

}  // namespace

RealField unwrap_phase(const ComplexField& psi, double amplitude_floor) {
    const int n = psi.grid.n_points;
    double amax = 0.0;
    int anchor = 0;
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(psi.values[i]);
        if (a > amax) {
            amax = a;
            anchor = i;
        }
    }
    const double floor = amplitude_floor < 0.0 ? 1e-10 * amax : amplitude_floor;
    for (int i = 0; i < n; ++i) {
        if (std::abs(psi.values[i]) < floor) throw AmplitudeFloorError(i, grid_x(psi.grid, i));
    }

    std::vector<double> theta(n);
    theta[anchor] = std::arg(psi.values[anchor]);
    for (int i = anchor + 1; i < n; ++i)
        theta[i] = theta[i - 1] + wrap_to_pi(std::arg(psi.values[i]) - std::arg(psi.values[i - 1]));
    for (int i = anchor - 1; i >= 0; --i)
        theta[i] = theta[i + 1] + wrap_to_pi(std::arg(psi.values[i]) - std::arg(psi.values[i + 1]));
    return RealField{psi.grid, std::move(theta)};
}

}  // namespace stablab
