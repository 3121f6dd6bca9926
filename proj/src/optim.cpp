#include "lltk/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace lltk::nn {

Optimizer::Optimizer(OptimizerConfig cfg, std::size_t dim) : cfg_(cfg) {
    if (cfg.kind != OptimizerKind::sgd) m_.assign(dim, 0.0);
    if (cfg.kind == OptimizerKind::adam) v_.assign(dim, 0.0);
}

void Optimizer::step(ParamVector& params, const ParamVector& grad, double lr) {
    if (grad.size() != params.size())
        throw std::invalid_argument("Optimizer::step: gradient size mismatch");
    if (!m_.empty() && m_.size() != params.size())
        throw std::invalid_argument("Optimizer::step: moment buffer size mismatch");
    ++steps_;
    switch (cfg_.kind) {
        case OptimizerKind::sgd:
            for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
            break;
        case OptimizerKind::sgd_momentum:
            for (std::size_t i = 0; i < params.size(); ++i) {
                m_[i] = cfg_.momentum * m_[i] + grad[i];
                params[i] -= lr * m_[i];
            }
            break;
        case OptimizerKind::adam: {
            const double t = static_cast<double>(steps_);
            const double bc1 = 1.0 - std::pow(cfg_.beta1, t);
            const double bc2 = 1.0 - std::pow(cfg_.beta2, t);
            for (std::size_t i = 0; i < params.size(); ++i) {
                m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
                v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
                const double mhat = m_[i] / bc1;
                const double vhat = v_[i] / bc2;
                params[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
            break;
        }
    }
}

OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "sgd") return OptimizerKind::sgd;
    if (s == "sgd_momentum") return OptimizerKind::sgd_momentum;
    if (s == "adam") return OptimizerKind::adam;
    throw std::invalid_argument("unknown optimizer '" + s + "' (expected sgd|sgd_momentum|adam)");
}

const char* to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::sgd_momentum: return "sgd_momentum";
        case OptimizerKind::adam: return "adam";
    }
    return "?";
}

}  // namespace lltk::nn
