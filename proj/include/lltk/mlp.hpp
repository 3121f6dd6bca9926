#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lltk/dense.hpp"

namespace lltk::nn {

using ParamVector = std::vector<double>;

// One normalization unit of the flat parameter vector. For a fully-connected
// layer every output unit's incoming weight row is one filter; the layer's
// bias vector is its own slice.
struct FilterSlice {
    std::string layer;
    std::size_t offset = 0;
    std::size_t length = 0;
    bool is_bias = false;
};

// Flat-parameter layout for an MLP architecture; identical for every
// ParamVector of that architecture.
struct ParamLayout {
    std::vector<std::size_t> arch;  // layer widths, input first
    std::vector<FilterSlice> slices;
    std::size_t dim = 0;

    static ParamLayout for_mlp(const std::vector<std::size_t>& arch);
};

struct LossGrad {
    double loss = 0.0;
    double accuracy = 0.0;
    ParamVector grad;
};

struct Metrics {
    double loss = 0.0;
    double accuracy = 0.0;
};

// tanh hidden layers, linear output, softmax cross-entropy loss with
// optional L2 weight decay on weights (biases excluded).
class Mlp {
public:
    explicit Mlp(std::vector<std::size_t> arch);

    const ParamLayout& layout() const { return layout_; }
    std::size_t param_count() const { return layout_.dim; }
    std::size_t n_layers() const { return layout_.arch.size() - 1; }
    std::size_t n_classes() const { return layout_.arch.back(); }

    // He-style fan-in scaled uniform weights, zero biases.
    ParamVector init_params(std::uint64_t seed) const;

    DenseMatrix forward(const ParamVector& params, const DenseMatrix& inputs) const;

    // Mean cross-entropy + (lambda/2)|W|^2 with exact backprop gradient.
    // Accuracy counts argmax matches, ties resolved to the lower class.
    LossGrad loss_and_grad(const ParamVector& params, const DenseMatrix& inputs,
                           const std::vector<int>& labels, double weight_decay) const;

    // Loss/accuracy only (no gradient allocation).
    Metrics evaluate(const ParamVector& params, const DenseMatrix& inputs,
                     const std::vector<int>& labels, double weight_decay) const;

private:
    ParamLayout layout_;
    // weight/bias offsets per layer
    std::vector<std::size_t> w_off_, b_off_;

    void check_params(const ParamVector& params) const;
};

}  // namespace lltk::nn
