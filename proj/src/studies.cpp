#include "lltk/studies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lltk/io.hpp"
#include "lltk/rng.hpp"

namespace lltk::studies {

Sweep run_sweep(const SweepFactors& factors, const nn::Dataset& data,
                const nn::TrainConfig& base_cfg) {
    if (factors.batch_sizes.empty() || factors.weight_decays.empty() ||
        factors.augmentation.empty() || factors.widths.empty() || factors.init_seeds.empty())
        throw std::invalid_argument("run_sweep: every factor list must be non-empty");

    Sweep sweep;
    std::size_t id = 0;
    for (std::size_t width : factors.widths)
        for (std::size_t batch : factors.batch_sizes)
            for (double wd : factors.weight_decays)
                for (bool aug : factors.augmentation)
                    for (std::uint64_t seed : factors.init_seeds) {
                        SweepCell cell;
                        cell.id = id++;
                        cell.batch_size = batch;
                        cell.weight_decay = wd;
                        cell.augmented = aug;
                        cell.width = width;
                        cell.init_seed = seed;
                        cell.train_cfg = base_cfg;
                        cell.train_cfg.arch = {data.train_x.cols, width, width, 2};
                        cell.train_cfg.batch_size = batch;
                        cell.train_cfg.weight_decay = wd;
                        cell.train_cfg.input_noise = aug ? factors.augment_noise : 0.0;
                        cell.train_cfg.shuffle_seed =
                            io::fnv1a64("sweep;" + std::to_string(base_cfg.shuffle_seed) + ";" +
                                        std::to_string(cell.id));
                        sweep.cells.push_back(std::move(cell));
                    }

    for (SweepCell& cell : sweep.cells) {
        const nn::Mlp mlp(cell.train_cfg.arch);
        const nn::ParamVector start = mlp.init_params(cell.init_seed);
        try {
            const nn::Trajectory traj = nn::train(mlp, data, cell.train_cfg, start);
            const nn::TrajectoryRecord& last = traj.records.back();
            cell.optimum = last.params;
            cell.train_loss = last.train_loss;
            cell.train_acc = last.train_acc;
            cell.test_loss = last.test_loss;
            cell.test_acc = last.test_acc;
        } catch (const std::runtime_error&) {
            cell.diverged = true;
        }
    }
    return sweep;
}

std::vector<int> assign_classes(const std::vector<double>& values, std::size_t n_classes) {
    const std::size_t n = values.size();
    if (n_classes == 0 || n_classes > n)
        throw std::invalid_argument("assign_classes: need 1 <= n_classes <= n");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<int> labels(n);
    const std::size_t base = n / n_classes, extra = n % n_classes;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        const std::size_t size = base + (c < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) labels[order[pos++]] = static_cast<int>(c);
    }
    return labels;
}

std::vector<double> feature_vector(const sampler::SampleSet& set) {
    std::vector<double> f;
    for (const sampler::SamplePoint& p : set.points)
        if (p.in_budget) f.push_back(p.train_loss);
    for (const sampler::SamplePoint& p : set.points)
        if (p.in_budget) f.push_back(p.train_acc);
    return f;
}

namespace {

int n_class_count(const std::vector<int>& labels) {
    int mx = -1;
    for (int y : labels) {
        if (y < 0) throw std::invalid_argument("labels must be non-negative");
        mx = std::max(mx, y);
    }
    return mx + 1;
}

// Stratified fold assignment keyed on (seed, class, per-sample content
// hash); invariant under permutations of the input rows.
std::vector<std::size_t> stratified_folds(const DenseMatrix& X, const std::vector<int>& y,
                                          std::size_t folds, std::uint64_t seed) {
    const int classes = n_class_count(y);
    std::vector<std::size_t> fold_of(y.size());
    for (int c = 0; c < classes; ++c) {
        std::vector<std::pair<std::uint64_t, std::size_t>> members;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == c)
                members.emplace_back(io::fnv1a64(X.row(i), X.cols * sizeof(double)), i);
        std::sort(members.begin(), members.end());
        SeededRng rng(seed, static_cast<std::uint64_t>(c) + 1);
        const std::vector<std::size_t> perm = rng.permutation(members.size());
        for (std::size_t r = 0; r < members.size(); ++r)
            fold_of[members[perm[r]].second] = r % folds;
    }
    return fold_of;
}

}  // namespace

FeatureScaler FeatureScaler::fit(const DenseMatrix& X, const std::vector<std::size_t>& rows) {
    FeatureScaler s;
    s.mean.assign(X.cols, 0.0);
    s.scale.assign(X.cols, 1.0);
    if (rows.empty()) return s;
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < X.cols; ++c) s.mean[c] += X(r, c);
    for (double& m : s.mean) m /= static_cast<double>(rows.size());
    std::vector<double> var(X.cols, 0.0);
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < X.cols; ++c) {
            const double d = X(r, c) - s.mean[c];
            var[c] += d * d;
        }
    for (std::size_t c = 0; c < X.cols; ++c) {
        var[c] /= static_cast<double>(rows.size());
        s.scale[c] = var[c] > 0.0 ? std::sqrt(var[c]) : 1.0;
    }
    return s;
}

std::vector<double> FeatureScaler::apply(const DenseMatrix& X, std::size_t row) const {
    std::vector<double> out(X.cols);
    for (std::size_t c = 0; c < X.cols; ++c) out[c] = (X(row, c) - mean[c]) / scale[c];
    return out;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

int knn_predict(const std::vector<std::vector<double>>& train_x, const std::vector<int>& train_y,
                int classes, const std::vector<double>& x, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d(train_x.size());
    for (std::size_t i = 0; i < train_x.size(); ++i) d[i] = {sq_dist(train_x[i], x), i};
    const std::size_t kk = std::min(k, d.size());
    std::partial_sort(d.begin(), d.begin() + kk, d.end());
    std::vector<int> votes(classes, 0);
    for (std::size_t i = 0; i < kk; ++i) ++votes[train_y[d[i].second]];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

struct SoftmaxModel {
    DenseMatrix w;  // classes x dim
    std::vector<double> b;

    static SoftmaxModel fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                            int classes, std::size_t steps = 500, double lr = 0.1) {
        const std::size_t n = X.size(), d = X.empty() ? 0 : X.front().size();
        SoftmaxModel m;
        m.w = DenseMatrix(classes, d, 0.0);
        m.b.assign(classes, 0.0);
        std::vector<double> logits(classes), p(classes);
        DenseMatrix gw(classes, d);
        std::vector<double> gb(classes);
        for (std::size_t it = 0; it < steps; ++it) {
            std::fill(gw.data.begin(), gw.data.end(), 0.0);
            std::fill(gb.begin(), gb.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double mx = -1e300;
                for (int c = 0; c < classes; ++c) {
                    double s = m.b[c];
                    for (std::size_t j = 0; j < d; ++j) s += m.w(c, j) * X[i][j];
                    logits[c] = s;
                    mx = std::max(mx, s);
                }
                double z = 0.0;
                for (int c = 0; c < classes; ++c) z += std::exp(logits[c] - mx);
                for (int c = 0; c < classes; ++c) {
                    p[c] = std::exp(logits[c] - mx) / z;
                    const double g = (p[c] - (y[i] == c ? 1.0 : 0.0)) / static_cast<double>(n);
                    gb[c] += g;
                    for (std::size_t j = 0; j < d; ++j) gw(c, j) += g * X[i][j];
                }
            }
            for (int c = 0; c < classes; ++c) {
                m.b[c] -= lr * gb[c];
                for (std::size_t j = 0; j < d; ++j) m.w(c, j) -= lr * gw(c, j);
            }
        }
        return m;
    }

    int predict(const std::vector<double>& x) const {
        int best = 0;
        double bs = -1e300;
        for (std::size_t c = 0; c < m_rows(); ++c) {
            double s = b[c];
            for (std::size_t j = 0; j < x.size(); ++j) s += w(c, j) * x[j];
            if (s > bs) {
                bs = s;
                best = static_cast<int>(c);
            }
        }
        return best;
    }
    std::size_t m_rows() const { return w.rows; }
};

struct GaussianNb {
    DenseMatrix mean, var;  // classes x dim
    std::vector<double> log_prior;

    static GaussianNb fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                          int classes) {
        const std::size_t d = X.empty() ? 0 : X.front().size();
        GaussianNb m;
        m.mean = DenseMatrix(classes, d, 0.0);
        m.var = DenseMatrix(classes, d, 0.0);
        m.log_prior.assign(classes, 0.0);
        std::vector<std::size_t> count(classes, 0);
        for (std::size_t i = 0; i < X.size(); ++i) {
            ++count[y[i]];
            for (std::size_t j = 0; j < d; ++j) m.mean(y[i], j) += X[i][j];
        }
        for (int c = 0; c < classes; ++c) {
            if (count[c] == 0) throw std::runtime_error("gaussian_nb: empty class in train fold");
            for (std::size_t j = 0; j < d; ++j) m.mean(c, j) /= static_cast<double>(count[c]);
            m.log_prior[c] = std::log(static_cast<double>(count[c]) /
                                      static_cast<double>(X.size()));
        }
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = X[i][j] - m.mean(y[i], j);
                m.var(y[i], j) += diff * diff;
            }
        for (int c = 0; c < classes; ++c)
            for (std::size_t j = 0; j < d; ++j)
                m.var(c, j) = std::max(m.var(c, j) / static_cast<double>(count[c]), 1e-9);
        return m;
    }

    int predict(const std::vector<double>& x) const {
        int best = 0;
        double bs = -1e300;
        for (std::size_t c = 0; c < mean.rows; ++c) {
            double s = log_prior[c];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double diff = x[j] - mean(c, j);
                s += -0.5 * (std::log(2.0 * 3.141592653589793 * var(c, j)) +
                             diff * diff / var(c, j));
            }
            if (s > bs) {
                bs = s;
                best = static_cast<int>(c);
            }
        }
        return best;
    }
};

}  // namespace

double fold_accuracy(const DenseMatrix& X, const std::vector<int>& y, ClassifierKind kind,
                     const std::vector<std::size_t>& train_rows,
                     const std::vector<std::size_t>& test_rows) {
    const int classes = n_class_count(y);
    const FeatureScaler st = FeatureScaler::fit(X, train_rows);
    std::vector<std::vector<double>> train_x;
    std::vector<int> train_y;
    train_x.reserve(train_rows.size());
    for (std::size_t r : train_rows) {
        train_x.push_back(st.apply(X, r));
        train_y.push_back(y[r]);
    }
    std::vector<bool> present(classes, false);
    for (int c : train_y) present[c] = true;
    for (int c = 0; c < classes; ++c)
        if (!present[c])
            throw std::runtime_error("cross_validate: class " + std::to_string(c) +
                                     " absent from a train fold (reduce folds or add data)");

    std::size_t correct = 0;
    if (kind == ClassifierKind::knn5) {
        for (std::size_t r : test_rows)
            if (knn_predict(train_x, train_y, classes, st.apply(X, r), 5) == y[r]) ++correct;
    } else if (kind == ClassifierKind::softmax_regression) {
        const SoftmaxModel m = SoftmaxModel::fit(train_x, train_y, classes);
        for (std::size_t r : test_rows)
            if (m.predict(st.apply(X, r)) == y[r]) ++correct;
    } else {
        const GaussianNb m = GaussianNb::fit(train_x, train_y, classes);
        for (std::size_t r : test_rows)
            if (m.predict(st.apply(X, r)) == y[r]) ++correct;
    }
    return test_rows.empty() ? 0.0
                             : static_cast<double>(correct) / static_cast<double>(test_rows.size());
}

CvResult cross_validate(const DenseMatrix& features, const std::vector<int>& labels,
                        ClassifierKind classifier, std::size_t folds, std::uint64_t seed) {
    const std::size_t n = features.rows;
    if (labels.size() != n) throw std::invalid_argument("cross_validate: label count mismatch");
    if (folds < 2 || folds > n)
        throw std::invalid_argument("cross_validate: need 2 <= folds <= n");

    const std::vector<std::size_t> fold_of = stratified_folds(features, labels, folds, seed);
    CvResult res;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < n; ++i)
            (fold_of[i] == f ? test_rows : train_rows).push_back(i);
        if (test_rows.empty()) continue;  // tiny data: fewer effective folds
        res.fold_accuracies.push_back(
            fold_accuracy(features, labels, classifier, train_rows, test_rows));
    }
    const std::size_t m = res.fold_accuracies.size();
    for (double a : res.fold_accuracies) res.mean += a;
    res.mean /= static_cast<double>(m);
    double var = 0.0;
    for (double a : res.fold_accuracies) var += (a - res.mean) * (a - res.mean);
    if (m > 1) var /= static_cast<double>(m - 1);
    res.stderr_mean = std::sqrt(var / static_cast<double>(m));
    return res;
}

double permutation_test(const DenseMatrix& features, const std::vector<int>& labels,
                        ClassifierKind classifier, std::size_t n_perm, std::uint64_t seed,
                        std::size_t folds) {
    const double observed = cross_validate(features, labels, classifier, folds, seed).mean;
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        SeededRng rng(seed, p + 1);
        const std::vector<std::size_t> perm = rng.permutation(labels.size());
        std::vector<int> shuffled(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) shuffled[i] = labels[perm[i]];
        const double acc = cross_validate(features, shuffled, classifier, folds, seed).mean;
        if (acc >= observed) ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(1 + n_perm);
}

double trajectory_preservation_score(const DenseMatrix& coordinates,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                     std::size_t k) {
    if (pairs.empty()) throw std::invalid_argument("trajectory_preservation_score: no pairs");
    const std::size_t n = coordinates.rows;
    const std::size_t kk = std::min(k, n - 1);

    // rank of each point's neighbors once; mutual test via membership sets
    std::vector<std::vector<std::size_t>> nbrs(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        std::vector<std::pair<double, std::size_t>> d;
        d.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == static_cast<std::size_t>(i)) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < coordinates.cols; ++c) {
                const double diff = coordinates(i, c) - coordinates(j, c);
                s += diff * diff;
            }
            d.emplace_back(s, j);
        }
        std::partial_sort(d.begin(), d.begin() + kk, d.end());
        nbrs[i].reserve(kk);
        for (std::size_t r = 0; r < kk; ++r) nbrs[i].push_back(d[r].second);
    }
    auto contains = [](const std::vector<std::size_t>& v, std::size_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::size_t mutual = 0;
    for (const auto& [a, b] : pairs)
        if (contains(nbrs[a], b) && contains(nbrs[b], a)) ++mutual;
    return static_cast<double>(mutual) / static_cast<double>(pairs.size());
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("spearman: need two equal-length series of size >= 2");
    return pearson(average_ranks(a), average_ranks(b));
}

double spearman_permutation_p(const std::vector<double>& a, const std::vector<double>& b,
                              std::size_t n_perm, std::uint64_t seed) {
    const double observed = spearman(a, b);
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        SeededRng rng(seed, p + 1);
        const std::vector<std::size_t> perm = rng.permutation(b.size());
        std::vector<double> shuffled(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) shuffled[i] = b[perm[i]];
        if (spearman(a, shuffled) >= observed) ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(1 + n_perm);
}

SampleSetTopology sample_set_topology(const sampler::SampleSet& set, const phate::Config& pc,
                                      std::size_t topo_k, bool in_budget_only) {
    std::vector<const sampler::SamplePoint*> pts;
    for (const sampler::SamplePoint& p : set.points)
        if (!in_budget_only || p.in_budget) pts.push_back(&p);
    if (pts.size() < topo_k + 1)
        throw std::invalid_argument("sample_set_topology: fewer points than topo_k + 1");

    DenseMatrix params(pts.size(), pts.front()->params.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t c = 0; c < params.cols; ++c) params(i, c) = pts[i]->params[c];

    const phate::Potentials pot = phate::potentials(params, pc);

    topo::FilteredComplex fc;
    fc.values.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) fc.values[i] = pts[i]->train_loss;
    fc.edges = topo::build_knn_graph(pot.ID, topo_k);
    fc.triangles = topo::flag_fill_triangles(pts.size(), fc.edges);

    SampleSetTopology out;
    out.h0 = topo::persistence_h0(fc);
    out.h1 = topo::persistence_h1(fc);
    out.diffusion_time = pot.t;
    return out;
}

namespace {

struct Task {
    std::string name;
    std::vector<int> labels;  // per usable cell
    double chance = 0.0;
};

DenseMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
    DenseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

StudyReport run_study(const nn::Dataset& data, const StudyConfig& cfg) {
    StudyReport report;
    report.sweep = run_sweep(cfg.factors, data, cfg.base_train);

    std::vector<const SweepCell*> cells;
    for (const SweepCell& c : report.sweep.cells)
        if (!c.diverged) cells.push_back(&c);
    if (cells.size() < cfg.folds)
        throw std::runtime_error("run_study: fewer usable cells than folds");

    // sample every cell with every method and collect the feature rows
    std::vector<std::vector<double>> jr_rows, grid_rows, naive_rows;
    for (const SweepCell* cell : cells) {
        const nn::Mlp mlp(cell->train_cfg.arch);

        sampler::SampleSet jr =
            sampler::jump_and_retrain(mlp, data, cell->train_cfg, cell->optimum, cfg.jr);
        jr_rows.push_back(feature_vector(jr));

        const sampler::SampleSet grid =
            sampler::grid_sample(mlp, data, cell->optimum, cell->weight_decay, cfg.grid);
        grid_rows.push_back(feature_vector(grid));

        const sampler::SampleSet naive =
            sampler::naive_sample(mlp, data, cell->optimum, cell->weight_decay, cfg.naive);
        naive_rows.push_back(feature_vector(naive));

        const SampleSetTopology topology =
            sample_set_topology(jr, cfg.phate_cfg, cfg.topo_k, true);
        PersistenceRow row;
        row.network_id = cell->id;
        row.batch_size = cell->batch_size;
        row.weight_decay = cell->weight_decay;
        row.augmented = cell->augmented;
        row.init_seed = cell->init_seed;
        row.test_loss = cell->test_loss;
        row.total_persistence_h0 = topo::total_persistence(topology.h0, cfg.policy);
        row.total_persistence_h1 = topo::total_persistence(topology.h1, cfg.policy);
        report.persistence.push_back(row);
    }

    const DenseMatrix jr_x = to_matrix(jr_rows);
    const DenseMatrix grid_x = to_matrix(grid_rows);
    const DenseMatrix naive_x = to_matrix(naive_rows);

    // classification tasks
    std::vector<Task> tasks(3);
    tasks[0].name = "generalization";
    {
        std::vector<double> losses;
        for (const SweepCell* c : cells) losses.push_back(c->test_loss);
        tasks[0].labels = assign_classes(losses, cfg.generalization_classes);
        tasks[0].chance = 1.0 / static_cast<double>(cfg.generalization_classes);
    }
    tasks[1].name = "weight_decay";
    {
        for (const SweepCell* c : cells) {
            const auto& wds = cfg.factors.weight_decays;
            const auto it = std::find(wds.begin(), wds.end(), c->weight_decay);
            tasks[1].labels.push_back(static_cast<int>(it - wds.begin()));
        }
        tasks[1].chance = 1.0 / static_cast<double>(cfg.factors.weight_decays.size());
    }
    tasks[2].name = "augmentation";
    {
        for (const SweepCell* c : cells) tasks[2].labels.push_back(c->augmented ? 1 : 0);
        tasks[2].chance = 0.5;
    }

    const std::vector<std::pair<std::string, const DenseMatrix*>> samplers = {
        {"jr", &jr_x}, {"grid", &grid_x}, {"naive", &naive_x}};
    const std::vector<ClassifierKind> classifiers = {
        ClassifierKind::knn5, ClassifierKind::softmax_regression, ClassifierKind::gaussian_nb};

    for (const Task& task : tasks) {
        TaskStats stats;
        stats.task = task.name;
        stats.chance = task.chance;
        for (const auto& [sampler_name, X] : samplers) {
            std::vector<double> pooled;
            for (ClassifierKind ck : classifiers) {
                const CvResult cv = cross_validate(*X, task.labels, ck, cfg.folds, cfg.cv_seed);
                StudyRow row;
                row.task = task.name;
                row.sampler = sampler_name;
                row.classifier = to_string(ck);
                row.mean_accuracy = cv.mean;
                row.stderr_accuracy = cv.stderr_mean;
                row.folds = cv.fold_accuracies.size();
                report.rows.push_back(row);
                pooled.insert(pooled.end(), cv.fold_accuracies.begin(),
                              cv.fold_accuracies.end());
            }
            double mean = 0.0;
            for (double a : pooled) mean += a;
            mean /= static_cast<double>(pooled.size());
            if (sampler_name == "jr")
                stats.jr_mean = mean;
            else if (sampler_name == "grid")
                stats.grid_mean = mean;
            else
                stats.naive_mean = mean;
        }

        stats.permutation_p =
            permutation_test(jr_x, task.labels, ClassifierKind::knn5, cfg.n_perm,
                             cfg.cv_seed, cfg.folds);

        // scrambled-label control: mean accuracy over classifiers
        SeededRng rng(cfg.cv_seed, io::fnv1a64(task.name));
        const auto perm = rng.permutation(task.labels.size());
        std::vector<int> shuffled(task.labels.size());
        for (std::size_t i = 0; i < task.labels.size(); ++i)
            shuffled[i] = task.labels[perm[i]];
        double control = 0.0;
        for (ClassifierKind ck : classifiers)
            control += cross_validate(jr_x, shuffled, ck, cfg.folds, cfg.cv_seed).mean;
        stats.control_accuracy = control / static_cast<double>(classifiers.size());

        report.task_stats.push_back(stats);
    }

    // persistence vs generalization trend
    std::vector<double> test_losses, tp0;
    for (const PersistenceRow& r : report.persistence) {
        test_losses.push_back(r.test_loss);
        tp0.push_back(r.total_persistence_h0);
    }
    report.spearman_h0 = spearman(test_losses, tp0);
    report.spearman_p = spearman_permutation_p(test_losses, tp0, cfg.n_perm, cfg.cv_seed);
    return report;
}

ClassifierKind classifier_from_string(const std::string& s) {
    if (s == "knn5") return ClassifierKind::knn5;
    if (s == "softmax_regression") return ClassifierKind::softmax_regression;
    if (s == "gaussian_nb") return ClassifierKind::gaussian_nb;
    throw std::invalid_argument("unknown classifier '" + s + "'");
}

const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn5: return "knn5";
        case ClassifierKind::softmax_regression: return "softmax_regression";
        case ClassifierKind::gaussian_nb: return "gaussian_nb";
    }
    return "?";
}

}  // namespace lltk::studies
