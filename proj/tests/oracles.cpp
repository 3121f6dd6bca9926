#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

using lltk::DenseMatrix;

DenseMatrix pairwise_euclidean(const DenseMatrix& pts) {
    DenseMatrix D(pts.rows, pts.rows, 0.0);
    for (std::size_t i = 0; i < pts.rows; ++i)
        for (std::size_t j = 0; j < pts.rows; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < pts.cols; ++c)
                s += (pts(i, c) - pts(j, c)) * (pts(i, c) - pts(j, c));
            D(i, j) = std::sqrt(s);
        }
    return D;
}

DenseMatrix pairwise_cosine(const DenseMatrix& pts) {
    DenseMatrix D(pts.rows, pts.rows, 0.0);
    for (std::size_t i = 0; i < pts.rows; ++i)
        for (std::size_t j = 0; j < pts.rows; ++j) {
            if (i == j) continue;
            double uv = 0.0, uu = 0.0, vv = 0.0;
            for (std::size_t c = 0; c < pts.cols; ++c) {
                uv += pts(i, c) * pts(j, c);
                uu += pts(i, c) * pts(i, c);
                vv += pts(j, c) * pts(j, c);
            }
            D(i, j) = 1.0 - uv / (std::sqrt(uu) * std::sqrt(vv));
        }
    return D;
}

std::vector<std::vector<std::pair<std::size_t, double>>> knn_full_sort(const DenseMatrix& D,
                                                                       std::size_t k) {
    std::vector<std::vector<std::pair<std::size_t, double>>> out(D.rows);
    for (std::size_t i = 0; i < D.rows; ++i) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < D.rows; ++j)
            if (j != i) all.emplace_back(D(i, j), j);
        std::sort(all.begin(), all.end());
        for (std::size_t r = 0; r < k; ++r) out[i].emplace_back(all[r].second, all[r].first);
    }
    return out;
}

DenseMatrix alpha_kernel_direct(const DenseMatrix& D, std::size_t k, double alpha) {
    const std::size_t n = D.rows;
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row.push_back(D(i, j));
        std::sort(row.begin(), row.end());
        eps[i] = row[k - 1];
    }
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) = 0.5 * std::exp(-std::pow(D(i, j) / eps[i], alpha)) +
                      0.5 * std::exp(-std::pow(D(i, j) / eps[j], alpha));
    return A;
}

std::vector<double> eigen_spectrum(const DenseMatrix& sym) {
    Eigen::MatrixXd m(sym.rows, sym.cols);
    for (std::size_t i = 0; i < sym.rows; ++i)
        for (std::size_t j = 0; j < sym.cols; ++j) m(i, j) = sym(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    std::vector<double> vals(sym.rows);
    for (std::size_t i = 0; i < sym.rows; ++i) vals[i] = std::fabs(solver.eigenvalues()[i]);
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

DenseMatrix naive_power(const DenseMatrix& p, unsigned t) {
    DenseMatrix q = p;
    for (unsigned step = 1; step < t; ++step) {
        DenseMatrix next(p.rows, p.cols, 0.0);
        for (std::size_t i = 0; i < p.rows; ++i)
            for (std::size_t j = 0; j < p.cols; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < p.cols; ++k) s += q(i, k) * p(k, j);
                next(i, j) = s;
            }
        q = next;
    }
    return q;
}

std::pair<std::size_t, std::size_t> sublevel_betti(
    const std::vector<double>& values, const std::vector<lltk::topo::Edge>& edges,
    const std::vector<std::array<std::size_t, 3>>& triangles, double threshold) {
    const std::size_t n = values.size();
    std::vector<bool> in(n, false);
    std::size_t nv = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (values[v] <= threshold) {
            in[v] = true;
            ++nv;
        }
    if (nv == 0) return {0, 0};

    std::vector<std::pair<std::size_t, std::size_t>> live;
    for (const auto& e : edges)
        if (in[e.u] && in[e.v]) live.emplace_back(e.u, e.v);

    // flood fill for components
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [u, v] : live) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<bool> seen(n, false);
    std::size_t b0 = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (!in[s] || seen[s]) continue;
        ++b0;
        std::vector<std::size_t> stack = {s};
        seen[s] = true;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
    }

    // dense mod-2 elimination over the triangle boundary matrix
    std::vector<std::size_t> edge_id(live.size());
    std::iota(edge_id.begin(), edge_id.end(), std::size_t{0});
    auto find_edge = [&](std::size_t u, std::size_t v) -> std::size_t {
        for (std::size_t i = 0; i < live.size(); ++i)
            if (live[i].first == u && live[i].second == v) return i;
        return SIZE_MAX;
    };
    std::vector<std::vector<std::uint8_t>> rows;  // one row per live triangle
    for (const auto& t : triangles) {
        const double tv = std::max(values[t[0]], std::max(values[t[1]], values[t[2]]));
        if (tv > threshold) continue;
        std::vector<std::uint8_t> row(live.size(), 0);
        row[find_edge(t[0], t[1])] = 1;
        row[find_edge(t[0], t[2])] = 1;
        row[find_edge(t[1], t[2])] = 1;
        rows.push_back(std::move(row));
    }
    std::size_t rank = 0;
    std::size_t col = 0;
    for (; col < live.size() && rank < rows.size(); ++col) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (rows[r][col]) {
                pivot = r;
                break;
            }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r][col])
                for (std::size_t c = 0; c < live.size(); ++c) rows[r][c] ^= rows[rank][c];
        ++rank;
    }
    const std::size_t b1 = live.size() + b0 - nv - rank;
    return {b0, b1};
}

std::size_t betti_from_diagram(const lltk::topo::PersistenceDiagram& d, double threshold) {
    std::size_t count = 0;
    for (const auto& p : d.pairs) {
        if (p.essential) {
            if (p.birth <= threshold) ++count;
        } else if (p.birth <= threshold && threshold < p.death) {
            ++count;
        }
    }
    return count;
}

lltk::nn::ParamVector fd_gradient(const lltk::nn::Mlp& mlp, const lltk::nn::ParamVector& params,
                                  const lltk::DenseMatrix& x, const std::vector<int>& y,
                                  double weight_decay, double h) {
    lltk::nn::ParamVector g(params.size());
    lltk::nn::ParamVector work = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        work[i] = params[i] + h;
        const double up = mlp.evaluate(work, x, y, weight_decay).loss;
        work[i] = params[i] - h;
        const double down = mlp.evaluate(work, x, y, weight_decay).loss;
        work[i] = params[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, lltk::SeededRng& rng) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data) v = rng.normal();
    return m;
}

std::vector<lltk::topo::Edge> random_graph(std::size_t n, double p, lltk::SeededRng& rng) {
    std::vector<lltk::topo::Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rng.uniform01() < p) edges.push_back({u, v});
    return edges;
}

}  // namespace oracle
