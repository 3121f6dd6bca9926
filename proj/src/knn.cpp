#include "lltk/knn.hpp"

#include <algorithm>
#include <stdexcept>

namespace lltk {

NeighborList knn(const DenseMatrix& D, std::size_t k) {
    const std::size_t n = D.rows;
    if (D.rows != D.cols) throw std::invalid_argument("knn: distance matrix not square");
    if (k == 0) throw std::invalid_argument("knn: k must be positive");
    if (k >= n) throw std::invalid_argument("knn: k must be smaller than the point count");

    NeighborList out;
    out.n = n;
    out.k = k;
    out.flat.resize(n * k);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != static_cast<std::size_t>(i)) cand.emplace_back(D(i, j), j);
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (std::size_t r = 0; r < k; ++r)
            out.flat[i * k + r] = {cand[r].second, cand[r].first};
    }
    return out;
}

}  // namespace lltk
