#include "lltk/dataset.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lltk/rng.hpp"

namespace lltk::nn {

namespace {

// One labelled point in the plane, before noise.
struct RawPoint {
    double x, y;
    int label;
};

RawPoint sample_point(DatasetKind kind, int label, double u, SeededRng& rng) {
    switch (kind) {
        case DatasetKind::two_moons: {
            // interleaved half circles
            const double t = u * std::numbers::pi;
            if (label == 0) return {std::cos(t), std::sin(t), 0};
            return {1.0 - std::cos(t), 0.5 - std::sin(t), 1};
        }
        case DatasetKind::two_gaussians: {
            (void)u;
            const double cx = label == 0 ? -2.0 : 2.0;
            const double cy = label == 0 ? -2.0 : 2.0;
            return {cx + rng.normal(), cy + rng.normal(), label};
        }
        case DatasetKind::ring_vs_blob: {
            if (label == 0) {
                const double t = u * 2.0 * std::numbers::pi;
                return {2.0 * std::cos(t), 2.0 * std::sin(t), 0};
            }
            return {0.3 * rng.normal(), 0.3 * rng.normal(), 1};
        }
    }
    throw std::invalid_argument("make_dataset: unknown kind");
}

void fill_split(DatasetKind kind, std::size_t n, double noise, SeededRng& rng, DenseMatrix& x,
                std::vector<int>& y) {
    x = DenseMatrix(n, 2);
    y.resize(n);
    const std::size_t per_class = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i < per_class ? 0 : 1;
        const double u = static_cast<double>(i % per_class) /
                         static_cast<double>(per_class > 1 ? per_class - 1 : 1);
        RawPoint p = sample_point(kind, label, u, rng);
        x(i, 0) = p.x + noise * rng.normal();
        x(i, 1) = p.y + noise * rng.normal();
        y[i] = p.label;
    }
}

}  // namespace

Dataset make_dataset(DatasetKind kind, std::size_t n_train, std::size_t n_test, double noise,
                     std::uint64_t seed, LabelMode label_mode) {
    if (noise < 0.0) throw std::invalid_argument("make_dataset: noise must be non-negative");
    if (n_train < 4 || n_test < 4)
        throw std::invalid_argument("make_dataset: need at least 2 points per class per split");
    if (n_train % 2 != 0 || n_test % 2 != 0)
        throw std::invalid_argument("make_dataset: split sizes must be even for balanced classes");

    Dataset d;
    d.kind = kind;
    d.label_mode = label_mode;
    d.seed = seed;
    d.noise = noise;

    SeededRng train_rng(seed, 0);
    SeededRng test_rng(seed, 1);
    fill_split(kind, n_train, noise, train_rng, d.train_x, d.train_y);
    fill_split(kind, n_test, noise, test_rng, d.test_x, d.test_y);

    if (label_mode == LabelMode::randomized) {
        SeededRng label_rng(seed, 2);
        for (auto& label : d.train_y) label = static_cast<int>(label_rng.below(2));
    }

    // standardize with train statistics
    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n_train; ++i) mean += d.train_x(i, c);
        mean /= static_cast<double>(n_train);
        double var = 0.0;
        for (std::size_t i = 0; i < n_train; ++i) {
            const double diff = d.train_x(i, c) - mean;
            var += diff * diff;
        }
        var /= static_cast<double>(n_train);
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        for (std::size_t i = 0; i < n_train; ++i) d.train_x(i, c) = (d.train_x(i, c) - mean) / sd;
        for (std::size_t i = 0; i < n_test; ++i) d.test_x(i, c) = (d.test_x(i, c) - mean) / sd;
    }
    return d;
}

DatasetKind dataset_kind_from_string(const std::string& s) {
    if (s == "two_moons") return DatasetKind::two_moons;
    if (s == "two_gaussians") return DatasetKind::two_gaussians;
    if (s == "ring_vs_blob") return DatasetKind::ring_vs_blob;
    throw std::invalid_argument("unknown dataset kind '" + s + "'");
}

const char* to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::two_moons: return "two_moons";
        case DatasetKind::two_gaussians: return "two_gaussians";
        case DatasetKind::ring_vs_blob: return "ring_vs_blob";
    }
    return "?";
}

}  // namespace lltk::nn
