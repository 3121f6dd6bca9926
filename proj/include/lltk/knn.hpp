#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lltk/dense.hpp"

namespace lltk {

// Per-point ordered neighbor lists, length k each, row-major in `flat`.
// Distances are non-decreasing within a list and a point never lists itself.
struct NeighborList {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::pair<std::size_t, double>> flat;

    const std::pair<std::size_t, double>* row(std::size_t i) const {
        return flat.data() + i * k;
    }
    // Distance to the k-th nearest neighbor of point i.
    double kth_distance(std::size_t i) const { return flat[i * k + (k - 1)].second; }
};

// k smallest off-diagonal entries per row of a symmetric distance matrix,
// ties broken by lower index. Throws if k >= D.rows or k == 0.
NeighborList knn(const DenseMatrix& D, std::size_t k);

}  // namespace lltk
