#include "stablab/linalg.hpp"

#include <cmath>
#include <cstddef>

namespace stablab {

Mat identity_matrix(int n) {
    Mat m(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

Vec mat_vec(const Mat& a, const Vec& x) {
    if (!a.empty() && a[0].size() != x.size())
        throw DimensionMismatchError("mat_vec: shape mismatch");
    Vec out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
    return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (!a.empty() && a[0].size() != k) throw DimensionMismatchError("mat_mul: shape mismatch");
    Mat out(n, Vec(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = a[i][l];
            for (std::size_t j = 0; j < m; ++j) out[i][j] += ail * b[l][j];
        }
    return out;
}

Mat transpose(const Mat& a) {
    const std::size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    Mat out(m, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out[j][i] = a[i][j];
    return out;
}

bool is_symmetric(const Mat& a, double tol) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) return false;
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(a[i][j] - a[j][i]) > tol * (1.0 + std::fabs(a[i][j]))) return false;
    }
    return true;
}

double determinant(Mat a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

bool is_positive_definite(const Mat& a) {
    const std::size_t n = a.size();
    Mat l(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return true;
}

double least_squares_slope(const Vec& t, const Vec& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw DomainError("least_squares_slope needs two or more paired samples");
    const double n = static_cast<double>(t.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    if (den == 0.0) throw DomainError("least_squares_slope: degenerate time span");
    return num / den;
}

}  // namespace stablab
