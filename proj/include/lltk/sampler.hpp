#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lltk/train.hpp"

namespace lltk::sampler {

using nn::ParamVector;

enum class Method { jr, grid, naive };

struct Direction {
    ParamVector v;
    std::uint64_t seed = 0;
    bool normalized = false;
};

// Component-wise standard normal draw from stream `stream` of the base seed.
Direction random_direction(const nn::ParamLayout& layout, std::uint64_t base_seed,
                           std::uint64_t stream);

// Rescales each filter slice of `d` so its norm matches the optimum's
// corresponding slice; slices with a zero norm on either side become zero.
void filter_normalize(Direction& d, const ParamVector& reference, const nn::ParamLayout& layout);

struct SamplePoint {
    ParamVector params;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_loss = 0.0;
    double test_acc = 0.0;
    // provenance
    std::uint64_t seed = 0;     // direction seed / direction index
    double step_size = 0.0;     // J&R step, naive c, 0 for grid
    std::size_t epoch = 0;      // retrain epoch (J&R) or point index
    double grid_c[3] = {0, 0, 0};
    bool in_budget = true;      // jump-init points are excluded from the budget
};

struct SampleSet {
    Method method = Method::jr;
    std::vector<SamplePoint> points;  // canonical order, see each sampler
    ParamVector optimum;

    std::size_t budget() const;  // points counted toward the sampling budget
};

struct JrOptions {
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    std::vector<double> step_sizes = {0.25, 0.5, 0.75, 1.0};
    std::size_t retrain_epochs = 32;
    std::uint64_t direction_seed = 0;  // base seed for the direction draws
    bool keep_jump_inits = true;
};

// One retraining trajectory per (seed, step size), starting from
// optimum + step * normalized direction and using the given train config
// ("the original optimizer"). Points ordered by (seed, step size, epoch);
// epoch-0 jump-init points are kept but not counted in the budget.
SampleSet jump_and_retrain(const nn::Mlp& mlp, const nn::Dataset& data,
                           const nn::TrainConfig& train_cfg, const ParamVector& optimum,
                           const JrOptions& opt);

struct GridOptions {
    std::size_t per_axis = 9;
    double extent = 1.0;
    std::size_t budget = 640;  // lattice points kept, nearest-origin first
    std::uint64_t direction_seed = 0;
};

// Loss/accuracy on a symmetric 3-D lattice spanned by three normalized
// random directions, origin excluded. When the full lattice exceeds the
// budget the points closest to the origin win (|c| then lexicographic),
// and that selection order is the canonical point order.
SampleSet grid_sample(const nn::Mlp& mlp, const nn::Dataset& data, const ParamVector& optimum,
                      double weight_decay, const GridOptions& opt);

struct NaiveOptions {
    std::size_t n_dirs = 64;
    std::vector<double> steps;  // default: 10 values linearly spaced in (0, 1]
    std::uint64_t direction_seed = 0;
};

// Loss/accuracy at optimum + c * direction for every (direction, c),
// ordered by (direction, c).
SampleSet naive_sample(const nn::Mlp& mlp, const nn::Dataset& data, const ParamVector& optimum,
                       double weight_decay, const NaiveOptions& opt);

// Persists a sample set as trajectory-format files plus an index manifest
// ("<stem>_index.meta"): one file per (seed, step) for J&R, one per
// direction for naive, a single file for grid. Returns the index path.
std::filesystem::path save_sample_set(const std::filesystem::path& dir, const std::string& stem,
                                      const SampleSet& set, const std::string& optimum_ref);
SampleSet load_sample_set(const std::filesystem::path& index_path);

Method method_from_string(const std::string& s);
const char* to_string(Method m);

}  // namespace lltk::sampler
