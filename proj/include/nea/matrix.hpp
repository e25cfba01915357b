#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nea/errors.hpp"

namespace nea {

// Dense row-major matrix of doubles. All conditional tables (theta, phi,
// factorized-model links, smoothed NEA tables) and embedding matrices use this.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double* operator[](int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* operator[](int r) const {
        return data.data() + static_cast<std::size_t>(r) * cols;
    }

    std::span<double> row(int r) { return {(*this)[r], static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int r) const {
        return {(*this)[r], static_cast<std::size_t>(cols)};
    }

    double& at(int r, int c) { return (*this)[r][c]; }
    double at(int r, int c) const { return (*this)[r][c]; }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double l2_norm(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

inline bool is_row_stochastic(const Matrix& m, double tol = 1e-9) {
    for (int r = 0; r < m.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < m.cols; ++c) {
            double v = m[r][c];
            if (!(v >= 0.0) || !std::isfinite(v)) return false;
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tol) return false;
    }
    return true;
}

inline void require_row_stochastic(const Matrix& m, const std::string& what, double tol = 1e-9) {
    if (!is_row_stochastic(m, tol))
        throw numeric_error(what + ": rows are not a probability distribution");
}

// In-place softmax of each row with max-subtraction.
inline void softmax_rows(Matrix& m) {
    for (int r = 0; r < m.rows; ++r) {
        double* row = m[r];
        double hi = row[0];
        for (int c = 1; c < m.cols; ++c) hi = std::max(hi, row[c]);
        if (!std::isfinite(hi)) throw numeric_error("softmax over non-finite logits");
        double sum = 0.0;
        for (int c = 0; c < m.cols; ++c) {
            row[c] = std::exp(row[c] - hi);
            sum += row[c];
        }
        for (int c = 0; c < m.cols; ++c) row[c] /= sum;
    }
}

// Total variation distance between two distributions of equal length.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

// KL(p || q); both strictly positive where p is positive.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            if (q[i] <= 0.0) throw numeric_error("KL divergence with zero in support");
            s += p[i] * std::log(p[i] / q[i]);
        }
    }
    return s;
}

}  // namespace nea
