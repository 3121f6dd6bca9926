#include "lltk/phate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "lltk/eigen_sym.hpp"
#include "lltk/knn.hpp"

namespace lltk::phate {

AffinityMatrix alpha_decay_kernel(const DenseMatrix& D, std::size_t k, double alpha) {
    const std::size_t n = D.rows;
    if (D.rows != D.cols) throw std::invalid_argument("alpha_decay_kernel: D not square");
    if (alpha <= 0.0) throw std::invalid_argument("alpha_decay_kernel: alpha must be positive");

    const NeighborList nl = knn(D, k);
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i) {
        eps[i] = nl.kth_distance(i);
        if (eps[i] <= 0.0)
            throw std::invalid_argument(
                "alpha_decay_kernel: zero k-NN bandwidth at point " + std::to_string(i) +
                " (at least k+1 coincident points)");
    }

    AffinityMatrix out;
    out.k = k;
    out.alpha = alpha;
    out.A = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) out.A(i, i) = 1.0;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = D(i, j);
            const double a = 0.5 * std::exp(-std::pow(d / eps[i], alpha)) +
                             0.5 * std::exp(-std::pow(d / eps[j], alpha));
            out.A(i, j) = a;
            out.A(j, i) = a;
        }
    }
    return out;
}

DiffusionOperator diffusion_operator(const AffinityMatrix& aff) {
    const DenseMatrix& A = aff.A;
    const std::size_t n = A.rows;
    std::vector<double> rowsum(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += A(i, j);
        if (s <= 0.0)
            throw std::invalid_argument("diffusion_operator: zero row sum at row " +
                                        std::to_string(i));
        rowsum[i] = s;
    }

    DiffusionOperator out;
    out.P = DenseMatrix(n, n);
    DenseMatrix M(n, n);  // symmetric conjugate, same eigenvalues as P
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.P(i, j) = A(i, j) / rowsum[i];
            M(i, j) = A(i, j) / std::sqrt(rowsum[i] * rowsum[j]);
        }
    }

    const SymmetricEigen eig = jacobi_eigen(M, false);
    out.spectrum.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.spectrum[i] = std::fabs(eig.values[i]);
    std::sort(out.spectrum.begin(), out.spectrum.end(), std::greater<double>());
    return out;
}

double von_neumann_entropy(const std::vector<double>& spectrum, unsigned t) {
    if (spectrum.empty()) throw std::invalid_argument("von_neumann_entropy: empty spectrum");
    if (t == 0) throw std::invalid_argument("von_neumann_entropy: t must be >= 1");
    double total = 0.0;
    std::vector<double> powered(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        powered[i] = std::pow(std::fabs(spectrum[i]), static_cast<double>(t));
        total += powered[i];
    }
    if (total <= 0.0) throw std::invalid_argument("von_neumann_entropy: all-zero spectrum");
    double h = 0.0;
    for (double p : powered) {
        if (p <= 0.0) continue;  // 0 log 0 = 0
        const double eta = p / total;
        h -= eta * std::log(eta);
    }
    return h;
}

std::size_t knee_point_index(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 3)
        throw std::invalid_argument("knee_point_index: need >= 3 (x, y) pairs");

    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    const double xspan = *xmax_it - *xmin_it;
    const double yspan = *ymax_it - *ymin_it;
    auto nx = [&](double x) { return xspan > 0.0 ? (x - *xmin_it) / xspan : 0.0; };
    auto ny = [&](double y) { return yspan > 0.0 ? (y - *ymin_it) / yspan : 0.0; };

    const double ax = nx(xs.front()), ay = ny(ys.front());
    const double bx = nx(xs.back()), by = ny(ys.back());
    const double chord = std::hypot(bx - ax, by - ay);

    // ties (within fp noise on the unit square) resolve to the earlier point
    std::size_t best = 0;
    double best_dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double px = nx(xs[i]) - ax, py = ny(ys[i]) - ay;
        const double dist = chord > 0.0 ? std::fabs(px * (by - ay) - py * (bx - ax)) / chord
                                        : std::hypot(px, py);
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

unsigned choose_diffusion_time(const std::vector<double>& spectrum, unsigned t_max) {
    if (t_max < 3) throw std::invalid_argument("choose_diffusion_time: t_max must be >= 3");
    std::vector<double> ts(t_max), hs(t_max);
    for (unsigned t = 1; t <= t_max; ++t) {
        ts[t - 1] = static_cast<double>(t);
        hs[t - 1] = von_neumann_entropy(spectrum, t);
    }
    return static_cast<unsigned>(knee_point_index(ts, hs)) + 1;
}

DenseMatrix potential_distances(const DiffusionOperator& P, unsigned t, double floor) {
    if (t == 0) throw std::invalid_argument("potential_distances: t must be >= 1");
    if (floor <= 0.0) throw std::invalid_argument("potential_distances: floor must be positive");
    const std::size_t n = P.P.rows;

    DenseMatrix Q = matrix_power(P.P, t);
    DenseMatrix L(n, n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        for (std::size_t j = 0; j < n; ++j)
            L(i, j) = std::log(Q(i, j) < floor ? floor : Q(i, j));

    DenseMatrix ID(n, n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            const double* li = L.row(i);
            const double* lj = L.row(j);
            for (std::size_t c = 0; c < n; ++c) {
                const double diff = li[c] - lj[c];
                s += diff * diff;
            }
            const double v = std::sqrt(s);
            ID(i, j) = v;
            ID(j, i) = v;
        }
    }
    return ID;
}

DenseMatrix classical_mds(const DenseMatrix& D, std::size_t dim) {
    const std::size_t n = D.rows;
    if (D.rows != D.cols) throw std::invalid_argument("classical_mds: D not square");
    if (dim == 0 || dim > n) throw std::invalid_argument("classical_mds: bad dimension");

    // B = -1/2 J D^2 J via row/column/grand means of the squared distances.
    DenseMatrix sq(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sq(i, j) = D(i, j) * D(i, j);
    std::vector<double> rmean(n, 0.0);
    double gmean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rmean[i] += sq(i, j);
        rmean[i] /= static_cast<double>(n);
        gmean += rmean[i];
    }
    gmean /= static_cast<double>(n);
    DenseMatrix B(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            B(i, j) = -0.5 * (sq(i, j) - rmean[i] - rmean[j] + gmean);

    const SymmetricEigen eig = jacobi_eigen(B, true);
    DenseMatrix coords(n, dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        const double lambda = std::max(eig.values[d], 0.0);
        const double scale = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) coords(i, d) = scale * eig.vectors(i, d);
    }
    return coords;
}

namespace {

double embedded_stress(const DenseMatrix& D, const DenseMatrix& X, DenseMatrix& dhat) {
    const std::size_t n = D.rows, dim = X.cols;
    double stress = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dhat(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = X(i, c) - X(j, c);
                s += diff * diff;
            }
            const double d = std::sqrt(s);
            dhat(i, j) = d;
            dhat(j, i) = d;
            const double r = D(i, j) - d;
            stress += r * r;
        }
    }
    return stress;
}

}  // namespace

SmacofResult smacof_mds(const DenseMatrix& D, const DenseMatrix& init, std::size_t dim,
                        std::size_t max_iter, double rel_tol) {
    const std::size_t n = D.rows;
    if (D.rows != D.cols) throw std::invalid_argument("smacof_mds: D not square");
    if (init.rows != n || init.cols != dim)
        throw std::invalid_argument("smacof_mds: init shape mismatch");

    SmacofResult res;
    res.coordinates = init;
    DenseMatrix dhat(n, n);
    double stress = embedded_stress(D, res.coordinates, dhat);
    if (!std::isfinite(stress)) throw std::runtime_error("smacof_mds: non-finite stress");
    res.stress_history.push_back(stress);

    DenseMatrix next(n, dim);
    for (std::size_t iter = 0; iter < max_iter && stress > 0.0; ++iter) {
        // Guttman transform X' = (1/n) B(X) X, applied row-wise.
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            double bii = 0.0;
            for (std::size_t c = 0; c < dim; ++c) next(i, c) = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == static_cast<std::size_t>(i) || dhat(i, j) == 0.0) continue;
                const double bij = -D(i, j) / dhat(i, j);
                bii -= bij;
                for (std::size_t c = 0; c < dim; ++c) next(i, c) += bij * res.coordinates(j, c);
            }
            for (std::size_t c = 0; c < dim; ++c)
                next(i, c) = (next(i, c) + bii * res.coordinates(i, c)) / static_cast<double>(n);
        }
        std::swap(res.coordinates, next);

        const double prev = stress;
        stress = embedded_stress(D, res.coordinates, dhat);
        if (!std::isfinite(stress)) throw std::runtime_error("smacof_mds: non-finite stress");
        res.stress_history.push_back(stress);
        if (prev > 0.0 && (prev - stress) / prev < rel_tol) break;
    }
    res.stress = stress;
    return res;
}

namespace {

Potentials potentials_impl(const DenseMatrix& points, const Config& cfg, unsigned* t_used) {
    if (points.rows < cfg.k + 2)
        throw std::invalid_argument("phate: need at least k+2 points");
    const DenseMatrix D = pairwise_distances(points, cfg.metric);
    const AffinityMatrix A = alpha_decay_kernel(D, cfg.k, cfg.alpha);
    const DiffusionOperator P = diffusion_operator(A);
    const unsigned t = cfg.t > 0 ? cfg.t : choose_diffusion_time(P.spectrum, cfg.t_max);
    if (t_used) *t_used = t;
    Potentials out;
    out.t = t;
    out.ID = potential_distances(P, t, cfg.potential_floor);
    return out;
}

}  // namespace

Potentials potentials(const DenseMatrix& points, const Config& cfg) {
    return potentials_impl(points, cfg, nullptr);
}

Embedding embed(const DenseMatrix& points, const Config& cfg) {
    if (cfg.dim != 2 && cfg.dim != 3)
        throw std::invalid_argument("phate: embedding dimension must be 2 or 3");
    unsigned t = 0;
    Potentials pot = potentials_impl(points, cfg, &t);
    const DenseMatrix init = classical_mds(pot.ID, cfg.dim);
    SmacofResult mds = smacof_mds(pot.ID, init, cfg.dim, cfg.mds_max_iter, cfg.mds_rel_tol);

    Embedding e;
    e.coordinates = std::move(mds.coordinates);
    e.stress = mds.stress;
    e.t = t;
    e.potential = std::move(pot.ID);
    return e;
}

}  // namespace lltk::phate
