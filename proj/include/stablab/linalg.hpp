#pragma once

#include <vector>

#include "stablab/errors.hpp"

namespace stablab {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major, rectangular

Mat identity_matrix(int n);
Vec mat_vec(const Mat& a, const Vec& x);
Mat mat_mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
bool is_symmetric(const Mat& a, double tol);

// Gaussian elimination with partial pivoting.
double determinant(Mat a);

// Cholesky-based test; requires symmetry within tol first.
bool is_positive_definite(const Mat& a);

// Slope of the least-squares line through (t_i, y_i).
double least_squares_slope(const Vec& t, const Vec& y);

}  // namespace stablab
