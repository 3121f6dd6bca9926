#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lltk/dataset.hpp"
#include "lltk/io.hpp"
#include "lltk/mlp.hpp"
#include "lltk/optim.hpp"

namespace lltk::nn {

struct LrSchedule {
    double base = 0.1;
    double factor = 0.1;                     // multiplier applied at each decay epoch
    std::vector<std::size_t> decay_epochs;   // ascending

    double at(std::size_t epoch) const;
};

struct TrainConfig {
    std::vector<std::size_t> arch;
    OptimizerConfig optimizer;
    LrSchedule lr;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    std::uint64_t shuffle_seed = 0;
    double weight_decay = 0.0;
    // Gaussian noise added to training inputs per batch (augmentation
    // stand-in); recorded metrics always use the clean data.
    double input_noise = 0.0;
};

struct TrajectoryRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_loss = 0.0;
    double test_acc = 0.0;
    ParamVector params;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    io::KvDoc meta;  // provenance sidecar content
};

// Full-pass epochs with seeded shuffling; records epoch 0 (the start point)
// and every epoch after its updates. Two runs with identical config and
// start are bitwise identical.
Trajectory train(const Mlp& mlp, const Dataset& data, const TrainConfig& cfg,
                 const ParamVector& start);

// Binary container: magic "LLTK", version 0x01, little-endian u32 record
// count and parameter dimension, then per record u32 epoch + 4 f64 metrics +
// the raw f64 parameters. A UTF-8 key-value sidecar with suffix ".meta"
// carries provenance.
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& path);

std::uint64_t train_config_hash(const TrainConfig& cfg);

}  // namespace lltk::nn
