#include "stablab/grid.hpp"

#include <cmath>
#include <string>

namespace stablab {

Grid1D make_grid(double x_min, double x_max, int n_points) {
    if (n_points < 8)
        throw TooFewPointsError("grid needs at least 8 points, got " + std::to_string(n_points));
    if (!(x_max > x_min))
        throw DomainError("grid requires x_max > x_min");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw DomainError("grid bounds must be finite");
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = n_points;
    g.dx = (x_max - x_min) / static_cast<double>(n_points - 1);
    return g;
}

std::vector<double> grid_points(const Grid1D& g) {
    std::vector<double> xs(g.n_points);
    for (int i = 0; i < g.n_points; ++i) xs[i] = grid_x(g, i);
    return xs;
}

bool same_grid(const Grid1D& a, const Grid1D& b) {
    return a.n_points == b.n_points && a.x_min == b.x_min && a.x_max == b.x_max;
}

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
    if (!same_grid(a, b)) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

RealField sample_field(const Grid1D& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.n_points);
    for (int i = 0; i < g.n_points; ++i) v[i] = f(grid_x(g, i));
    return RealField{g, std::move(v)};
}

ComplexField sample_complex_field(const Grid1D& g,
                                  const std::function<std::complex<double>(double)>& f) {
    std::vector<std::complex<double>> v(g.n_points);
    for (int i = 0; i < g.n_points; ++i) v[i] = f(grid_x(g, i));
    return ComplexField{g, std::move(v)};
}

namespace {

template <class T>
T trapezoid(const Field<T>& f) {
    const auto& v = f.values;
    const std::size_t n = v.size();
    T acc = 0.5 * (v[0] + v[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += v[i];
    return acc * f.grid.dx;
}

}  // namespace

double integrate(const RealField& f) { return trapezoid(f); }
std::complex<double> integrate(const ComplexField& f) { return trapezoid(f); }

double norm_l2(const ComplexField& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) sq[i] = std::norm(f.values[i]);
    return std::sqrt(integrate(RealField{f.grid, std::move(sq)}));
}

std::complex<double> inner_product(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid, b.grid, "inner_product");
    std::vector<std::complex<double>> prod(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        prod[i] = std::conj(a.values[i]) * b.values[i];
    return integrate(ComplexField{a.grid, std::move(prod)});
}

void require_finite(const RealField& f, const char* where) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw DomainError(std::string(where) + ": non-finite sample");
}

}  // namespace stablab
