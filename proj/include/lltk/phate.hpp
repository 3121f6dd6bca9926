#pragma once

#include <cstddef>
#include <vector>

#include "lltk/dense.hpp"
#include "lltk/kernels.hpp"

namespace lltk::phate {

// Adaptive-bandwidth decaying-kernel affinities. Symmetric, entries in
// (0, 1], unit diagonal.
struct AffinityMatrix {
    DenseMatrix A;
    std::size_t k = 0;
    double alpha = 2.0;
};

// Row-stochastic transition matrix plus the eigenvalue magnitudes of its
// symmetric conjugate, sorted descending. spectrum[0] == 1 for a connected
// graph.
struct DiffusionOperator {
    DenseMatrix P;
    std::vector<double> spectrum;
};

struct Embedding {
    DenseMatrix coordinates;   // n x dim
    double stress = 0.0;       // final metric-MDS stress
    unsigned t = 0;            // diffusion time used
    DenseMatrix potential;     // pairwise potential distances (ID)
};

struct SmacofResult {
    DenseMatrix coordinates;
    double stress = 0.0;
    std::vector<double> stress_history;  // one entry per evaluated iterate
};

struct Config {
    Metric metric = Metric::euclidean;
    std::size_t k = 5;         // kernel bandwidth neighbor count
    double alpha = 2.0;
    std::size_t dim = 2;
    unsigned t = 0;            // 0 = automatic (entropy knee over 1..t_max)
    unsigned t_max = 100;
    double potential_floor = 1e-12;
    std::size_t mds_max_iter = 300;
    double mds_rel_tol = 1e-6;
};

// A[i][j] = exp(-(D_ij/eps_i)^alpha)/2 + exp(-(D_ij/eps_j)^alpha)/2 with
// eps_i the k-NN distance of point i. Throws if some eps_i is zero
// (>= k+1 coincident points), naming the point.
AffinityMatrix alpha_decay_kernel(const DenseMatrix& D, std::size_t k, double alpha);

// Row-normalizes A and computes the spectrum from the symmetric conjugate
// M_ij = A_ij / sqrt(s_i s_j) (s = row sums), which shares P's eigenvalues.
DiffusionOperator diffusion_operator(const AffinityMatrix& A);

// H(t) = -sum eta_i log eta_i with eta_i = |l_i|^t / sum_j |l_j|^t.
double von_neumann_entropy(const std::vector<double>& spectrum, unsigned t);

// Knee of an (x, y) series: the point of maximum perpendicular distance to
// the chord joining the first and last points, after min-max normalizing
// both axes to [0,1]. Ties resolve to the earlier point.
std::size_t knee_point_index(const std::vector<double>& xs, const std::vector<double>& ys);

// Entropy knee over t = 1..t_max; returns the chosen t.
unsigned choose_diffusion_time(const std::vector<double>& spectrum, unsigned t_max);

// ID[i][j] = || log(P^t)_i - log(P^t)_j ||_2 with entries clamped up to
// `floor` before the log.
DenseMatrix potential_distances(const DiffusionOperator& P, unsigned t, double floor = 1e-12);

// Double-centering + top-`dim` eigenpairs; negative eigenvalues among the
// top are clamped to zero.
DenseMatrix classical_mds(const DenseMatrix& D, std::size_t dim);

// Guttman-transform iteration minimizing sum_{i<j} (D_ij - dhat_ij)^2.
// Stress is non-increasing across iterations by construction.
SmacofResult smacof_mds(const DenseMatrix& D, const DenseMatrix& init, std::size_t dim,
                        std::size_t max_iter = 300, double rel_tol = 1e-6);

// Full pipeline: distances -> kernel -> diffusion operator -> time selection
// -> potential distances -> classical-MDS init -> metric MDS. Deterministic
// for a given (points, cfg).
Embedding embed(const DenseMatrix& points, const Config& cfg);

// Pipeline stopped after the potential distances; used when only the
// diffusion geometry is needed (e.g. graph filtration input).
struct Potentials {
    DenseMatrix ID;
    unsigned t = 0;
};
Potentials potentials(const DenseMatrix& points, const Config& cfg);

}  // namespace lltk::phate
