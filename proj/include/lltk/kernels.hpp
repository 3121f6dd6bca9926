#pragma once

#include <string>

#include "lltk/dense.hpp"

namespace lltk {

enum class Metric { euclidean, cosine };

// Symmetric pairwise distance matrix with exact zero diagonal. Cosine
// distance is 1 - u.v/(|u||v|), clamped to [0, 2]; a zero-norm row under
// cosine throws with the row index. OpenMP-parallel over row pairs.
DenseMatrix pairwise_distances(const DenseMatrix& points, Metric metric);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// p^t for t >= 1 by binary exponentiation.
DenseMatrix matrix_power(const DenseMatrix& p, unsigned t);

Metric metric_from_string(const std::string& s);
const char* to_string(Metric m);

// Serial reference kernels, kept for parallel-consistency tests and the
// benchmark target. Same per-element arithmetic as the parallel versions,
// so outputs must match bitwise.
namespace serial {
DenseMatrix pairwise_distances(const DenseMatrix& points, Metric metric);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
}  // namespace serial

}  // namespace lltk
