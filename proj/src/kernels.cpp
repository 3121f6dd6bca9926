#include "lltk/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lltk {

bool all_finite(const DenseMatrix& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    return m;
}

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "cosine") return Metric::cosine;
    throw std::invalid_argument("unknown metric '" + s + "' (expected euclidean|cosine)");
}

const char* to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "cosine";
}

namespace {

inline double euclidean_pair(const double* u, const double* v, std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = u[c] - v[c];
        s += diff * diff;
    }
    return std::sqrt(s);
}

inline double dot(const double* u, const double* v, std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += u[c] * v[c];
    return s;
}

// 1 - u.v / sqrt((u.u)(v.v)), clamped to [0, 2]. Identical rows give an
// exact 0 because sqrt(x*x) == x for finite positive doubles.
inline double cosine_pair(const double* u, const double* v, std::size_t d,
                          double sq_u, double sq_v) {
    const double c = 1.0 - dot(u, v, d) / std::sqrt(sq_u * sq_v);
    if (c < 0.0) return 0.0;
    if (c > 2.0) return 2.0;
    return c;
}

inline double matmul_entry(const DenseMatrix& a, const DenseMatrix& b,
                           std::size_t i, std::size_t j) {
    double s = 0.0;
    const double* arow = a.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) s += arow[k] * b(k, j);
    return s;
}

std::vector<double> cosine_row_squares(const DenseMatrix& points) {
    std::vector<double> sq(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i) {
        sq[i] = dot(points.row(i), points.row(i), points.cols);
        if (sq[i] == 0.0)
            throw std::invalid_argument("pairwise_distances: zero-norm row " +
                                        std::to_string(i) + " under cosine metric");
    }
    return sq;
}

void check_points(const DenseMatrix& points) {
    if (points.rows < 2)
        throw std::invalid_argument("pairwise_distances: need at least 2 points");
    if (points.cols == 0)
        throw std::invalid_argument("pairwise_distances: zero-dimensional points");
}

}  // namespace

DenseMatrix pairwise_distances(const DenseMatrix& points, Metric metric) {
    check_points(points);
    const std::size_t n = points.rows, d = points.cols;
    DenseMatrix D(n, n, 0.0);
    if (metric == Metric::euclidean) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = euclidean_pair(points.row(i), points.row(j), d);
                D(i, j) = v;
                D(j, i) = v;
            }
        }
    } else {
        const std::vector<double> sq = cosine_row_squares(points);
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = cosine_pair(points.row(i), points.row(j), d, sq[i], sq[j]);
                D(i, j) = v;
                D(j, i) = v;
            }
        }
    }
    return D;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimension mismatch");
    DenseMatrix c(a.rows, b.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i)
        for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = matmul_entry(a, b, i, j);
    return c;
}

DenseMatrix matrix_power(const DenseMatrix& p, unsigned t) {
    if (p.rows != p.cols) throw std::invalid_argument("matrix_power: matrix not square");
    if (t == 0) return DenseMatrix::identity(p.rows);
    DenseMatrix result;
    DenseMatrix base = p;
    bool have_result = false;
    unsigned e = t;
    while (e > 0) {
        if (e & 1u) {
            result = have_result ? matmul(result, base) : base;
            have_result = true;
        }
        e >>= 1u;
        if (e > 0) base = matmul(base, base);
    }
    return result;
}

namespace serial {

DenseMatrix pairwise_distances(const DenseMatrix& points, Metric metric) {
    check_points(points);
    const std::size_t n = points.rows, d = points.cols;
    DenseMatrix D(n, n, 0.0);
    if (metric == Metric::euclidean) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = euclidean_pair(points.row(i), points.row(j), d);
                D(i, j) = v;
                D(j, i) = v;
            }
    } else {
        const std::vector<double> sq = cosine_row_squares(points);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = cosine_pair(points.row(i), points.row(j), d, sq[i], sq[j]);
                D(i, j) = v;
                D(j, i) = v;
            }
    }
    return D;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimension mismatch");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = matmul_entry(a, b, i, j);
    return c;
}

}  // namespace serial

}  // namespace lltk
