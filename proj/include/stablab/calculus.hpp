#pragma once

#include <cstddef>
#include <vector>

#include "stablab/errors.hpp"
#include "stablab/grid.hpp"

namespace stablab {

// Central second-order first derivative; one-sided second-order closures at the ends.
template <class T>
std::vector<T> gradient_samples(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 3) throw TooFewPointsError("gradient needs at least 3 samples");
    std::vector<T> out(n);
    const double inv2 = 1.0 / (2.0 * dx);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return out;
}

// Standard 3-point second difference; one-sided second-order closures at the ends.
template <class T>
std::vector<T> laplacian_samples(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 4) throw TooFewPointsError("laplacian needs at least 4 samples");
    std::vector<T> out(n);
    const double inv = 1.0 / (dx * dx);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return out;
}

// Five-point fourth-order interior first derivative; falls back to the
// second-order stencils on the two cells nearest each boundary.
template <class T>
std::vector<T> gradient_samples_order4(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 6) throw TooFewPointsError("order-4 gradient needs at least 6 samples");
    std::vector<T> out(n);
    const double inv2 = 1.0 / (2.0 * dx);
    const double inv12 = 1.0 / (12.0 * dx);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    out[1] = (f[2] - f[0]) * inv2;
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * inv12;
    out[n - 2] = (f[n - 1] - f[n - 3]) * inv2;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return out;
}

// Five-point fourth-order interior second derivative with the same boundary fallback.
template <class T>
std::vector<T> laplacian_samples_order4(const std::vector<T>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 6) throw TooFewPointsError("order-4 laplacian needs at least 6 samples");
    std::vector<T> out(n);
    const double inv = 1.0 / (dx * dx);
    const double inv12 = 1.0 / (12.0 * dx * dx);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    out[1] = (f[2] - 2.0 * f[1] + f[0]) * inv;
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) * inv12;
    out[n - 2] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) * inv;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return out;
}

RealField gradient(const RealField& f);
RealField laplacian(const RealField& f);
ComplexField gradient(const ComplexField& f);
ComplexField laplacian(const ComplexField& f);

RealField gradient_order4(const RealField& f);
RealField laplacian_order4(const RealField& f);
ComplexField gradient_order4(const ComplexField& f);
ComplexField laplacian_order4(const ComplexField& f);

}  // namespace stablab
