#pragma once

#include <vector>

#include "lltk/dense.hpp"

namespace lltk {

// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue
// (index tie-break). vectors.col(j) is the j-th eigenvector when requested;
// each vector's sign is fixed so its largest-magnitude component is positive.
struct SymmetricEigen {
    std::vector<double> values;
    DenseMatrix vectors;  // n x n, empty when vectors were not requested
};

// Cyclic Jacobi rotations; deterministic for a given input. Throws if the
// input is not square or not symmetric to within 1e-9 relative scale.
SymmetricEigen jacobi_eigen(const DenseMatrix& a, bool want_vectors);

}  // namespace lltk
