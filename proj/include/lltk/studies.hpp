#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lltk/dense.hpp"
#include "lltk/phate.hpp"
#include "lltk/sampler.hpp"
#include "lltk/topo.hpp"
#include "lltk/train.hpp"

namespace lltk::studies {

struct SweepFactors {
    std::vector<std::size_t> batch_sizes = {16, 32, 64};
    std::vector<double> weight_decays = {0.0, 1e-4, 1e-3};
    std::vector<bool> augmentation = {false, true};  // gaussian input noise on/off
    std::vector<std::size_t> widths = {16};
    std::vector<std::uint64_t> init_seeds = {0, 1};
    double augment_noise = 0.1;  // sigma applied when augmentation is on
};

struct SweepCell {
    std::size_t id = 0;
    std::size_t batch_size = 0;
    double weight_decay = 0.0;
    bool augmented = false;
    std::size_t width = 0;
    std::uint64_t init_seed = 0;
    nn::TrainConfig train_cfg;
    nn::ParamVector optimum;
    double train_loss = 0.0, train_acc = 0.0;
    double test_loss = 0.0, test_acc = 0.0;
    bool diverged = false;
};

struct Sweep {
    std::vector<SweepCell> cells;
};

// Trains one network per factor combination, all cells sharing the base
// config apart from the varied factors. A diverging cell is flagged and the
// sweep continues.
Sweep run_sweep(const SweepFactors& factors, const nn::Dataset& data,
                const nn::TrainConfig& base_cfg);

// Quantile binning by value, lowest bin = class 0; ties and bin boundaries
// resolve by id order, bin sizes differ by at most one.
std::vector<int> assign_classes(const std::vector<double>& values, std::size_t n_classes);

// Fixed-order features of a sample set: all in-budget train losses followed
// by all in-budget train accuracies, in the set's canonical point order.
std::vector<double> feature_vector(const sampler::SampleSet& set);

enum class ClassifierKind { knn5, softmax_regression, gaussian_nb };

// Per-feature standardization fitted on an explicit row subset (the train
// folds); rows outside the subset never influence the parameters.
struct FeatureScaler {
    std::vector<double> mean, scale;
    static FeatureScaler fit(const DenseMatrix& X, const std::vector<std::size_t>& rows);
    std::vector<double> apply(const DenseMatrix& X, std::size_t row) const;
};

// One explicit train/test split: fit the scaler and classifier on the train
// rows, score the test rows.
double fold_accuracy(const DenseMatrix& X, const std::vector<int>& y, ClassifierKind kind,
                     const std::vector<std::size_t>& train_rows,
                     const std::vector<std::size_t>& test_rows);

struct CvResult {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double stderr_mean = 0.0;  // sample std of fold scores / sqrt(#folds)
};

// Stratified k-fold with per-fold feature standardization fitted on the
// train folds only. Fold assignment depends on (seed, class sizes, feature
// content) but not on sample order. Throws if a class is missing from some
// train fold.
CvResult cross_validate(const DenseMatrix& features, const std::vector<int>& labels,
                        ClassifierKind classifier, std::size_t folds, std::uint64_t seed);

// p = (1 + #{permuted >= observed}) / (1 + n_perm) over label permutations.
double permutation_test(const DenseMatrix& features, const std::vector<int>& labels,
                        ClassifierKind classifier, std::size_t n_perm, std::uint64_t seed,
                        std::size_t folds = 10);

// Fraction of consecutive-epoch pairs that are mutual k-nearest neighbors
// in the embedding. `pairs` lists (row a, row b) index pairs.
double trajectory_preservation_score(const DenseMatrix& coordinates,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                     std::size_t k = 10);

// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// One-sided permutation p-value for spearman(a, b) > 0.
double spearman_permutation_p(const std::vector<double>& a, const std::vector<double>& b,
                              std::size_t n_perm, std::uint64_t seed);

ClassifierKind classifier_from_string(const std::string& s);
const char* to_string(ClassifierKind k);

// ---- full sampler-comparison study ----------------------------------------

struct StudyConfig {
    SweepFactors factors;
    nn::TrainConfig base_train;
    sampler::JrOptions jr;
    sampler::GridOptions grid;
    sampler::NaiveOptions naive;
    phate::Config phate_cfg;  // potentials for the loss filtration
    std::size_t generalization_classes = 3;
    std::size_t folds = 10;
    std::uint64_t cv_seed = 1;
    std::size_t n_perm = 200;
    std::size_t topo_k = 20;
    topo::EssentialPolicy policy = topo::EssentialPolicy::cap;
};

struct StudyRow {
    std::string task;        // generalization | weight_decay | augmentation
    std::string sampler;     // jr | grid | naive
    std::string classifier;  // knn5 | softmax_regression | gaussian_nb
    double mean_accuracy = 0.0;
    double stderr_accuracy = 0.0;
    std::size_t folds = 0;
};

struct TaskStats {
    std::string task;
    double chance = 0.0;             // 1 / #classes
    double permutation_p = 1.0;      // J&R features, knn5
    double control_accuracy = 0.0;   // label-shuffled J&R features, mean over classifiers
    // mean over classifiers x folds, per sampler
    double jr_mean = 0.0, grid_mean = 0.0, naive_mean = 0.0;
};

struct PersistenceRow {
    std::size_t network_id = 0;
    std::size_t batch_size = 0;
    double weight_decay = 0.0;
    bool augmented = false;
    std::uint64_t init_seed = 0;
    double test_loss = 0.0;
    double total_persistence_h0 = 0.0;
    double total_persistence_h1 = 0.0;
};

struct StudyReport {
    Sweep sweep;
    std::vector<StudyRow> rows;          // tasks x samplers x classifiers
    std::vector<TaskStats> task_stats;   // one per task
    std::vector<PersistenceRow> persistence;
    double spearman_h0 = 0.0;            // test loss vs H0 total persistence
    double spearman_p = 1.0;             // one-sided permutation p-value
};

// Trains the sweep, runs every sampler on every cell, classifies the three
// tasks with all classifiers under cross-validation, runs the permutation
// controls, and computes per-network diffusion-potential persistence. The
// J&R persistence uses the in-budget retrain points only.
StudyReport run_study(const nn::Dataset& data, const StudyConfig& cfg);

// H0/H1 diagrams of a sample set: kNN graph (k = topo_k) on the diffusion
// potential distances, lower-star filtration by per-point training loss.
struct SampleSetTopology {
    topo::PersistenceDiagram h0, h1;
    unsigned diffusion_time = 0;
};
SampleSetTopology sample_set_topology(const sampler::SampleSet& set, const phate::Config& pc,
                                      std::size_t topo_k, bool in_budget_only);

}  // namespace lltk::studies
