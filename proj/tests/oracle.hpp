#pragma once

// Brute-force references used to check the factorization-based kernels.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

/// y^T M y.
inline double quadratic(const Matrix& m, const std::vector<double>& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) total += y[i] * m[i][j] * y[j];
    }
    return total;
}

/// Entries of the increment correlation matrix written straight from the
/// definition, without the cancellation-free rewrite used by the library.
inline double increment_entry(std::size_t j, std::size_t k, double h) {
    const double d = std::abs(static_cast<double>(k) - static_cast<double>(j));
    return 0.5 * (std::pow(d + 1.0, 2 * h) + std::pow(std::abs(d - 1.0), 2 * h) -
                  2.0 * std::pow(d, 2 * h));
}

inline double value_entry(std::size_t j, std::size_t k, double h) {
    const double a = static_cast<double>(j), b = static_cast<double>(k);
    return 0.5 * (std::pow(a, 2 * h) + std::pow(b, 2 * h) - std::pow(std::abs(b - a), 2 * h));
}

/// Conditional mean C A^{-1} xi of the last r coordinates of a Gaussian
/// vector with covariance s (dimension m + r), via an explicit inverse.
inline std::vector<double> conditional_mean(const Matrix& s, const std::vector<double>& xi) {
    const std::size_t m = xi.size();
    const std::size_t r = s.size() - m;
    Matrix a(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = s[i][j];
    }
    const Matrix ainv = invert(a);
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) w[i] += ainv[i][j] * xi[j];
    }
    std::vector<double> out(r, 0.0);
    for (std::size_t q = 0; q < r; ++q) {
        for (std::size_t k = 0; k < m; ++k) out[q] += s[m + q][k] * w[k];
    }
    return out;
}

}  // namespace oracle
