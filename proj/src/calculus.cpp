#include "stablab/calculus.hpp"

namespace stablab {

RealField gradient(const RealField& f) {
    return RealField{f.grid, gradient_samples(f.values, f.grid.dx)};
}

RealField laplacian(const RealField& f) {
    return RealField{f.grid, laplacian_samples(f.values, f.grid.dx)};
}

ComplexField gradient(const ComplexField& f) {
    return ComplexField{f.grid, gradient_samples(f.values, f.grid.dx)};
}

ComplexField laplacian(const ComplexField& f) {
    return ComplexField{f.grid, laplacian_samples(f.values, f.grid.dx)};
}

RealField gradient_order4(const RealField& f) {
    return RealField{f.grid, gradient_samples_order4(f.values, f.grid.dx)};
}

RealField laplacian_order4(const RealField& f) {
    return RealField{f.grid, laplacian_samples_order4(f.values, f.grid.dx)};
}

ComplexField gradient_order4(const ComplexField& f) {
    return ComplexField{f.grid, gradient_samples_order4(f.values, f.grid.dx)};
}

ComplexField laplacian_order4(const ComplexField& f) {
    return ComplexField{f.grid, laplacian_samples_order4(f.values, f.grid.dx)};
}

}  // namespace stablab
