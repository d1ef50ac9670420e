#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "stablab/errors.hpp"

namespace stablab {

struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    int n_points = 0;
    double dx = 0.0;
};

// Validates n_points >= 8 and x_max > x_min; dx = (x_max - x_min)/(n_points - 1).
Grid1D make_grid(double x_min, double x_max, int n_points);

inline double grid_x(const Grid1D& g, int i) { return g.x_min + g.dx * i; }

std::vector<double> grid_points(const Grid1D& g);

bool same_grid(const Grid1D& a, const Grid1D& b);
void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where = "field operation");

template <class T>
struct Field {
    Grid1D grid;
    std::vector<T> values;
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

template <class T>
Field<T> make_field(const Grid1D& g, std::vector<T> values) {
    if (static_cast<int>(values.size()) != g.n_points)
        throw GridMismatchError("field has " + std::to_string(values.size()) +
                                " samples on a grid of " + std::to_string(g.n_points) +
                                " points");
    return Field<T>{g, std::move(values)};
}

RealField sample_field(const Grid1D& g, const std::function<double(double)>& f);
ComplexField sample_complex_field(const Grid1D& g,
                                  const std::function<std::complex<double>(double)>& f);

// Trapezoidal quadrature over the grid.
double integrate(const RealField& f);
std::complex<double> integrate(const ComplexField& f);

// sqrt of the trapezoidal L2 norm, ∫|psi|^2 dx.
double norm_l2(const ComplexField& f);

// ∫ conj(a)·b dx.
std::complex<double> inner_product(const ComplexField& a, const ComplexField& b);

void require_finite(const RealField& f, const char* where);

}  // namespace stablab
