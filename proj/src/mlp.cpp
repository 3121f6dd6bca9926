#include "lltk/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "lltk/rng.hpp"

namespace lltk::nn {

ParamLayout ParamLayout::for_mlp(const std::vector<std::size_t>& arch) {
    if (arch.size() < 3)
        throw std::invalid_argument("ParamLayout: need at least one hidden layer");
    for (std::size_t w : arch)
        if (w == 0) throw std::invalid_argument("ParamLayout: zero-width layer");

    ParamLayout layout;
    layout.arch = arch;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
        const std::size_t in = arch[l], out = arch[l + 1];
        const std::string name = "fc" + std::to_string(l + 1);
        for (std::size_t u = 0; u < out; ++u) {
            layout.slices.push_back({name, offset, in, false});
            offset += in;
        }
        layout.slices.push_back({name, offset, out, true});
        offset += out;
    }
    layout.dim = offset;
    return layout;
}

Mlp::Mlp(std::vector<std::size_t> arch) : layout_(ParamLayout::for_mlp(arch)) {
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < layout_.arch.size(); ++l) {
        const std::size_t in = layout_.arch[l], out = layout_.arch[l + 1];
        w_off_.push_back(offset);
        offset += in * out;
        b_off_.push_back(offset);
        offset += out;
    }
}

void Mlp::check_params(const ParamVector& params) const {
    if (params.size() != layout_.dim)
        throw std::invalid_argument("Mlp: parameter vector has size " +
                                    std::to_string(params.size()) + ", expected " +
                                    std::to_string(layout_.dim));
}

ParamVector Mlp::init_params(std::uint64_t seed) const {
    ParamVector p(layout_.dim, 0.0);
    SeededRng rng(seed, 0);
    for (std::size_t l = 0; l + 1 < layout_.arch.size(); ++l) {
        const std::size_t in = layout_.arch[l], out = layout_.arch[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(in));
        for (std::size_t i = 0; i < in * out; ++i)
            p[w_off_[l] + i] = limit * (2.0 * rng.uniform01() - 1.0);
        // biases stay zero
    }
    return p;
}

DenseMatrix Mlp::forward(const ParamVector& params, const DenseMatrix& inputs) const {
    check_params(params);
    if (inputs.cols != layout_.arch.front())
        throw std::invalid_argument("Mlp::forward: input width " + std::to_string(inputs.cols) +
                                    " does not match layer map (" +
                                    std::to_string(layout_.arch.front()) + ")");
    const std::size_t L = n_layers();
    DenseMatrix act = inputs;
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t in = layout_.arch[l], out = layout_.arch[l + 1];
        DenseMatrix next(act.rows, out);
        const double* w = params.data() + w_off_[l];
        const double* b = params.data() + b_off_[l];
        for (std::size_t i = 0; i < act.rows; ++i) {
            for (std::size_t u = 0; u < out; ++u) {
                double s = b[u];
                const double* wrow = w + u * in;
                const double* arow = act.row(i);
                for (std::size_t c = 0; c < in; ++c) s += wrow[c] * arow[c];
                next(i, u) = l + 1 < L ? std::tanh(s) : s;
            }
        }
        act = std::move(next);
    }
    return act;
}

LossGrad Mlp::loss_and_grad(const ParamVector& params, const DenseMatrix& inputs,
                            const std::vector<int>& labels, double weight_decay) const {
    check_params(params);
    if (inputs.rows == 0) throw std::invalid_argument("Mlp::loss_and_grad: empty batch");
    if (labels.size() != inputs.rows)
        throw std::invalid_argument("Mlp::loss_and_grad: label count mismatch");

    const std::size_t L = n_layers();
    const std::size_t n = inputs.rows;
    const std::size_t classes = n_classes();

    // forward with cached activations (post-activation per layer)
    std::vector<DenseMatrix> act(L + 1);
    act[0] = inputs;
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t in = layout_.arch[l], out = layout_.arch[l + 1];
        act[l + 1] = DenseMatrix(n, out);
        const double* w = params.data() + w_off_[l];
        const double* b = params.data() + b_off_[l];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t u = 0; u < out; ++u) {
                double s = b[u];
                const double* wrow = w + u * in;
                const double* arow = act[l].row(i);
                for (std::size_t c = 0; c < in; ++c) s += wrow[c] * arow[c];
                act[l + 1](i, u) = l + 1 < L ? std::tanh(s) : s;
            }
        }
    }

    // softmax cross-entropy and output delta
    const DenseMatrix& logits = act[L];
    DenseMatrix delta(n, classes);
    double loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= classes)
            throw std::invalid_argument("Mlp::loss_and_grad: label out of range");
        double mx = logits(i, 0);
        std::size_t arg = 0;
        for (std::size_t c = 1; c < classes; ++c)
            if (logits(i, c) > mx) {
                mx = logits(i, c);
                arg = c;
            }
        if (arg == static_cast<std::size_t>(label)) ++correct;
        double z = 0.0;
        for (std::size_t c = 0; c < classes; ++c) z += std::exp(logits(i, c) - mx);
        const double logz = std::log(z) + mx;
        loss += logz - logits(i, label);
        for (std::size_t c = 0; c < classes; ++c) {
            const double p = std::exp(logits(i, c) - logz);
            delta(i, c) = (p - (static_cast<std::size_t>(label) == c ? 1.0 : 0.0)) /
                          static_cast<double>(n);
        }
    }
    loss /= static_cast<double>(n);

    LossGrad out;
    out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    out.grad.assign(layout_.dim, 0.0);

    // backward
    for (std::size_t l = L; l-- > 0;) {
        const std::size_t in = layout_.arch[l], width = layout_.arch[l + 1];
        double* gw = out.grad.data() + w_off_[l];
        double* gb = out.grad.data() + b_off_[l];
        const double* w = params.data() + w_off_[l];
        for (std::size_t i = 0; i < n; ++i) {
            const double* arow = act[l].row(i);
            const double* drow = delta.row(i);
            for (std::size_t u = 0; u < width; ++u) {
                const double d = drow[u];
                gb[u] += d;
                double* gwrow = gw + u * in;
                for (std::size_t c = 0; c < in; ++c) gwrow[c] += d * arow[c];
            }
        }
        if (l > 0) {
            DenseMatrix prev_delta(n, in);
            for (std::size_t i = 0; i < n; ++i) {
                const double* drow = delta.row(i);
                for (std::size_t c = 0; c < in; ++c) {
                    double s = 0.0;
                    for (std::size_t u = 0; u < width; ++u) s += drow[u] * w[u * in + c];
                    const double a = act[l](i, c);
                    prev_delta(i, c) = s * (1.0 - a * a);  // tanh'
                }
            }
            delta = std::move(prev_delta);
        }
    }

    // weight decay on weights only
    if (weight_decay != 0.0) {
        double wsq = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t count = layout_.arch[l] * layout_.arch[l + 1];
            const double* w = params.data() + w_off_[l];
            double* gw = out.grad.data() + w_off_[l];
            for (std::size_t i = 0; i < count; ++i) {
                wsq += w[i] * w[i];
                gw[i] += weight_decay * w[i];
            }
        }
        loss += 0.5 * weight_decay * wsq;
    }
    out.loss = loss;

    if (!std::isfinite(out.loss)) {
        for (std::size_t l = 0; l < L; ++l)
            for (double v : act[l + 1].data)
                if (!std::isfinite(v))
                    throw std::runtime_error("Mlp: non-finite activation in layer fc" +
                                             std::to_string(l + 1));
        throw std::runtime_error("Mlp: non-finite loss at the output layer");
    }
    return out;
}

Metrics Mlp::evaluate(const ParamVector& params, const DenseMatrix& inputs,
                      const std::vector<int>& labels, double weight_decay) const {
    check_params(params);
    if (inputs.rows == 0) throw std::invalid_argument("Mlp::evaluate: empty batch");
    const DenseMatrix logits = forward(params, inputs);
    const std::size_t n = inputs.rows, classes = n_classes();
    double loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double mx = logits(i, 0);
        std::size_t arg = 0;
        for (std::size_t c = 1; c < classes; ++c)
            if (logits(i, c) > mx) {
                mx = logits(i, c);
                arg = c;
            }
        if (arg == static_cast<std::size_t>(labels[i])) ++correct;
        double z = 0.0;
        for (std::size_t c = 0; c < classes; ++c) z += std::exp(logits(i, c) - mx);
        loss += std::log(z) + mx - logits(i, labels[i]);
    }
    loss /= static_cast<double>(n);
    if (weight_decay != 0.0) {
        double wsq = 0.0;
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const std::size_t count = layout_.arch[l] * layout_.arch[l + 1];
            const double* w = params.data() + w_off_[l];
            for (std::size_t i = 0; i < count; ++i) wsq += w[i] * w[i];
        }
        loss += 0.5 * weight_decay * wsq;
    }
    if (!std::isfinite(loss)) throw std::runtime_error("Mlp: non-finite loss in evaluate");
    return {loss, static_cast<double>(correct) / static_cast<double>(n)};
}

}  // namespace lltk::nn
