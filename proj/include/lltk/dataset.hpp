#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lltk/dense.hpp"

namespace lltk::nn {

enum class DatasetKind { two_moons, two_gaussians, ring_vs_blob };
enum class LabelMode { true_labels, randomized };

// Binary-classification toy set. Features standardized to zero mean, unit
// variance using train-split statistics. `randomized` redraws the training
// labels uniformly (test labels untouched).
struct Dataset {
    DenseMatrix train_x;
    std::vector<int> train_y;
    DenseMatrix test_x;
    std::vector<int> test_y;
    DatasetKind kind = DatasetKind::two_moons;
    LabelMode label_mode = LabelMode::true_labels;
    std::uint64_t seed = 0;
    double noise = 0.0;
};

Dataset make_dataset(DatasetKind kind, std::size_t n_train, std::size_t n_test, double noise,
                     std::uint64_t seed, LabelMode label_mode = LabelMode::true_labels);

DatasetKind dataset_kind_from_string(const std::string& s);
const char* to_string(DatasetKind k);

}  // namespace lltk::nn
