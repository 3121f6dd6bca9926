#include "lltk/eigen_sym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lltk {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const DenseMatrix& input, bool want_vectors) {
    const std::size_t n = input.rows;
    if (input.rows != input.cols) throw std::invalid_argument("jacobi_eigen: matrix not square");

    double scale = 0.0;
    for (double v : input.data) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(input(i, j) - input(j, i)) > 1e-9 * std::max(1.0, scale))
                throw std::invalid_argument("jacobi_eigen: matrix not symmetric");

    DenseMatrix a = input;
    DenseMatrix v = want_vectors ? DenseMatrix::identity(n) : DenseMatrix();

    const double tol = 1e-14 * std::max(1.0, scale);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > tol * n; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= tol) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x) > a(y, y);
    });

    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = a(order[j], order[j]);
    if (want_vectors) {
        out.vectors = DenseMatrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t src = order[j];
            // Sign convention: largest-magnitude component positive.
            std::size_t arg = 0;
            double best = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double m = std::fabs(v(i, src));
                if (m > best) {
                    best = m;
                    arg = i;
                }
            }
            const double sgn = v(arg, src) < 0.0 ? -1.0 : 1.0;
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sgn * v(i, src);
        }
    }
    return out;
}

}  // namespace lltk
