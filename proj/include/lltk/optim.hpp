#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lltk/mlp.hpp"

namespace lltk::nn {

enum class OptimizerKind { sgd, sgd_momentum, adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::sgd_momentum;
    double momentum = 0.9;   // sgd_momentum
    double beta1 = 0.9;      // adam
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Holds the per-parameter moment buffers; the learning rate arrives per
// step so schedules stay outside.
class Optimizer {
public:
    Optimizer(OptimizerConfig cfg, std::size_t dim);

    void step(ParamVector& params, const ParamVector& grad, double lr);

    const OptimizerConfig& config() const { return cfg_; }
    std::uint64_t step_count() const { return steps_; }

private:
    OptimizerConfig cfg_;
    std::vector<double> m_;  // momentum / first moment
    std::vector<double> v_;  // adam second moment
    std::uint64_t steps_ = 0;
};

OptimizerKind optimizer_from_string(const std::string& s);
const char* to_string(OptimizerKind k);

}  // namespace lltk::nn
