// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line each. Criteria marked "soft" report their result
// without failing the binary; every other failure makes the exit code 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lltk/io.hpp"
#include "lltk/phate.hpp"
#include "lltk/sampler.hpp"
#include "lltk/studies.hpp"
#include "lltk/threads.hpp"
#include "lltk/topo.hpp"
#include "lltk/train.hpp"
#include "oracles.hpp"

using namespace lltk;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const std::string& name, bool pass, double seconds, double budget_s,
            const std::string& detail, bool soft = false) {
    const bool in_budget = budget_s <= 0.0 || seconds <= budget_s;
    const bool ok = pass && in_budget;
    const char* tag = ok ? (soft ? "PASS (soft)" : "PASS") : (soft ? "REPORT (soft)" : "FAIL");
    if (!ok && !soft) ++g_failures;
    std::printf("[%-11s] %2d. %-28s %6.1fs  %s%s\n", tag, id, name.c_str(), seconds,
                detail.c_str(), in_budget ? "" : "  [over runtime budget]");
    std::fflush(stdout);
}

// ---- 1. gradient exactness -------------------------------------------------

void criterion_gradients() {
    Timer timer;
    double worst = 0.0;
    SeededRng rng(2024);
    for (const std::vector<std::size_t>& arch :
         {std::vector<std::size_t>{2, 8, 2}, std::vector<std::size_t>{2, 16, 16, 2}}) {
        for (double lambda : {0.0, 1e-3}) {
            const nn::Mlp mlp(arch);
            const nn::ParamVector params = mlp.init_params(rng.next_u64());
            DenseMatrix x(10, 2);
            for (double& v : x.data) v = rng.normal();
            std::vector<int> y(10);
            for (int& v : y) v = static_cast<int>(rng.below(2));
            const nn::LossGrad lg = mlp.loss_and_grad(params, x, y, lambda);
            const nn::ParamVector fd = oracle::fd_gradient(mlp, params, x, y, lambda);
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double scale = std::max({std::fabs(lg.grad[i]), std::fabs(fd[i]), 1e-8});
                worst = std::max(worst, std::fabs(lg.grad[i] - fd[i]) / scale);
            }
        }
    }
    report(1, "gradient exactness", worst < 1e-5, timer.seconds(), 5.0,
           "max rel err = " + io::format_double(worst));
}

// ---- 2. kernel / operator invariants ----------------------------------------

void criterion_operator_invariants() {
    Timer timer;
    bool ok = true;
    std::string detail = "200 point sets ok";
    SeededRng rng(7);
    for (int rep = 0; rep < 200 && ok; ++rep) {
        const std::size_t n = 8 + rng.below(53);  // 8..60
        DenseMatrix pts(n, 3);
        for (double& v : pts.data) v = rng.normal();
        const DenseMatrix D = pairwise_distances(pts, Metric::euclidean);
        const phate::AffinityMatrix A = phate::alpha_decay_kernel(D, 3, 2.0);
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (A.A(i, i) != 1.0) ok = false;
            for (std::size_t j = 0; j < n; ++j)
                if (A.A(i, j) != A.A(j, i)) ok = false;
        }
        const phate::DiffusionOperator P = phate::diffusion_operator(A);
        for (std::size_t i = 0; i < n && ok; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += P.P(i, j);
            if (std::fabs(s - 1.0) >= 1e-9) ok = false;
        }
        double prev = phate::von_neumann_entropy(P.spectrum, 1);
        for (unsigned t = 2; t <= 100 && ok; ++t) {
            const double h = phate::von_neumann_entropy(P.spectrum, t);
            if (h > prev + 1e-12) ok = false;
            prev = h;
        }
        if (!ok) detail = "violation in set " + std::to_string(rep);
    }
    report(2, "kernel/operator invariants", ok, timer.seconds(), 30.0, detail);
}

// ---- 3. potential-distance oracle -------------------------------------------

void criterion_potentials() {
    Timer timer;
    bool ok = true;
    double worst_power = 0.0, worst_triangle = 0.0;
    SeededRng rng(11);
    for (int rep = 0; rep < 10 && ok; ++rep) {
        const std::size_t n = 8 + rng.below(13);  // 8..20
        DenseMatrix pts(n, 4);
        for (double& v : pts.data) v = rng.normal();
        const phate::AffinityMatrix A =
            phate::alpha_decay_kernel(pairwise_distances(pts, Metric::euclidean), 3, 2.0);
        const phate::DiffusionOperator P = phate::diffusion_operator(A);
        for (unsigned t = 1; t <= 8; ++t) {
            const double diff = max_abs_diff(matrix_power(P.P, t), oracle::naive_power(P.P, t));
            worst_power = std::max(worst_power, diff);
            if (diff >= 1e-9) ok = false;
        }
        const DenseMatrix ID = phate::potential_distances(P, 4);
        for (std::size_t i = 0; i < n; ++i) {
            if (ID(i, i) != 0.0) ok = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (ID(i, j) != ID(j, i)) ok = false;
                for (std::size_t k = 0; k < n; ++k)
                    worst_triangle = std::max(worst_triangle, ID(i, j) - ID(i, k) - ID(k, j));
            }
        }
        if (worst_triangle > 1e-9) ok = false;
    }
    report(3, "potential-distance oracle", ok, timer.seconds(), 10.0,
           "max power diff = " + io::format_double(worst_power) +
               ", triangle slack = " + io::format_double(worst_triangle));
}

// ---- 4. MDS ------------------------------------------------------------------

void criterion_mds() {
    Timer timer;
    bool monotone_ok = true;
    SeededRng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 8 + rng.below(9);
        DenseMatrix D(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = 0.1 + rng.uniform01();
                D(i, j) = v;
                D(j, i) = v;
            }
        const phate::SmacofResult res = phate::smacof_mds(D, phate::classical_mds(D, 2), 2);
        for (std::size_t i = 1; i < res.stress_history.size(); ++i)
            if (res.stress_history[i] > res.stress_history[i - 1] * (1.0 + 1e-12))
                monotone_ok = false;
    }

    double worst_stress = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        DenseMatrix pts(12, 2);
        for (double& v : pts.data) v = rng.normal();
        const DenseMatrix D = pairwise_distances(pts, Metric::euclidean);
        const phate::SmacofResult res = phate::smacof_mds(D, phate::classical_mds(D, 2), 2);
        worst_stress = std::max(worst_stress, res.stress);
    }
    report(4, "metric MDS", monotone_ok && worst_stress < 1e-8, timer.seconds(), 10.0,
           "planar recovery stress = " + io::format_double(worst_stress));
}

// ---- 5. persistence oracle equivalence ---------------------------------------

void criterion_persistence() {
    Timer timer;
    bool ok = true;
    std::string detail;
    SeededRng rng(17);
    int checked = 0;
    for (int rep = 0; rep < 500 && ok; ++rep) {
        const std::size_t n = 4 + rng.below(9);  // 4..12
        std::vector<double> values(n);
        for (double& v : values)
            v = rep % 3 == 0 ? 0.125 * static_cast<double>(rng.below(8)) : rng.uniform01();
        const std::vector<topo::Edge> edges = oracle::random_graph(n, 0.2 + 0.5 * rng.uniform01(), rng);
        topo::FilteredComplex fc;
        fc.values = values;
        fc.edges = edges;
        fc.triangles = topo::flag_fill_triangles(n, edges);

        const topo::PersistenceDiagram d0 = topo::persistence_h0(fc);
        const topo::PersistenceDiagram d1 = topo::persistence_h1(fc);

        std::vector<double> probes = values;
        std::sort(probes.begin(), probes.end());
        probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
        std::vector<double> all = {probes.front() - 1.0, probes.back() + 1.0};
        for (std::size_t i = 0; i < probes.size(); ++i) {
            all.push_back(probes[i]);
            if (i + 1 < probes.size()) all.push_back(0.5 * (probes[i] + probes[i + 1]));
        }
        for (double t : all) {
            const auto [b0, b1] = oracle::sublevel_betti(values, edges, fc.triangles, t);
            if (oracle::betti_from_diagram(d0, t) != b0 ||
                oracle::betti_from_diagram(d1, t) != b1) {
                ok = false;
                detail = "mismatch in complex " + std::to_string(rep) + " at threshold " +
                         io::format_double(t);
                break;
            }
            ++checked;
        }
    }
    if (ok) detail = std::to_string(checked) + " threshold checks, exact match";
    report(5, "persistence oracle equivalence", ok, timer.seconds(), 60.0, detail);
}

// ---- 6. total persistence -----------------------------------------------------

void criterion_total_persistence() {
    Timer timer;
    topo::PersistenceDiagram d;
    d.pairs = {{0.0, 1.0, false}, {0.0, 2.0, false}};
    bool ok = topo::total_persistence(d, topo::EssentialPolicy::cap) == 5.0;

    SeededRng rng(19);
    for (int rep = 0; rep < 100 && ok; ++rep) {
        topo::PersistenceDiagram r;
        const std::size_t m = 1 + rng.below(12);
        for (std::size_t i = 0; i < m; ++i) {
            const double b = rng.uniform01();
            r.pairs.push_back({b, b + rng.uniform01(), rng.below(3) == 0});
        }
        if (topo::total_persistence(r, topo::EssentialPolicy::cap) <
            topo::total_persistence(r, topo::EssentialPolicy::drop))
            ok = false;
    }
    report(6, "total persistence formula", ok, timer.seconds(), 5.0,
           "{(0,1),(0,2)} = 5.0, cap >= drop on 100 random diagrams");
}

// ---- 7/8/9. jump-and-retrain block --------------------------------------------

struct JrArtifacts {
    nn::Dataset data;
    nn::TrainConfig cfg;
    nn::ParamVector optimum;
    double optimum_train_loss = 0.0;
    double optimum_train_acc = 0.0;
    sampler::SampleSet set;  // 5 seeds x 4 steps x 32 epochs + jump-inits
};

JrArtifacts make_jr_artifacts() {
    JrArtifacts art;
    art.data = nn::make_dataset(nn::DatasetKind::two_moons, 200, 200, 0.15, 7);
    art.cfg.arch = {2, 16, 16, 2};
    art.cfg.optimizer.kind = nn::OptimizerKind::sgd_momentum;
    art.cfg.lr.base = 0.1;
    art.cfg.epochs = 200;
    art.cfg.batch_size = 32;
    art.cfg.shuffle_seed = 1;
    const nn::Mlp mlp(art.cfg.arch);
    const nn::Trajectory traj = nn::train(mlp, art.data, art.cfg, mlp.init_params(3));
    art.optimum = traj.records.back().params;
    art.optimum_train_loss = traj.records.back().train_loss;
    art.optimum_train_acc = traj.records.back().train_acc;

    sampler::JrOptions jr;  // defaults: seeds {0..4}, steps {0.25,0.5,0.75,1}, 32 epochs
    art.set = sampler::jump_and_retrain(mlp, art.data, art.cfg, art.optimum, jr);
    return art;
}

void criterion_jr_sanity(const JrArtifacts& art, double setup_seconds) {
    Timer timer;
    bool converged = art.optimum_train_acc >= 0.99;
    std::size_t init_above = 0, descended = 0, trajectories = 0;
    for (std::uint64_t seed = 0; seed <= 4; ++seed)
        for (double step : {0.25, 0.5, 0.75, 1.0}) {
            double init_loss = -1.0, final_loss = -1.0;
            for (const sampler::SamplePoint& p : art.set.points) {
                if (p.seed != seed || p.step_size != step) continue;
                if (p.epoch == 0) init_loss = p.train_loss;
                if (p.epoch == 32) final_loss = p.train_loss;
            }
            ++trajectories;
            if (init_loss >= art.optimum_train_loss) ++init_above;
            if (final_loss <= 0.1 * init_loss) ++descended;
        }
    const bool ok = converged && trajectories == 20 && init_above == 20 &&
                    descended >= static_cast<std::size_t>(0.95 * 20);
    report(7, "jump-and-retrain sanity", ok, setup_seconds + timer.seconds(), 180.0,
           "init above optimum " + std::to_string(init_above) + "/20, descended " +
               std::to_string(descended) + "/20");
}

void criterion_budgets(const JrArtifacts& art) {
    Timer timer;
    const nn::Mlp mlp(art.cfg.arch);

    const std::size_t jr_budget = art.set.budget();

    sampler::GridOptions grid;  // per_axis 9, budget 640
    const sampler::SampleSet gset =
        sampler::grid_sample(mlp, art.data, art.optimum, art.cfg.weight_decay, grid);

    sampler::NaiveOptions naive;  // 64 dirs x 10 steps
    const sampler::SampleSet nset =
        sampler::naive_sample(mlp, art.data, art.optimum, art.cfg.weight_decay, naive);

    const bool ok = jr_budget == 640 && gset.budget() == 640 && nset.budget() == 640;
    report(8, "640-point budgets", ok, timer.seconds(), 60.0,
           "jr = " + std::to_string(jr_budget) + ", grid = " + std::to_string(gset.budget()) +
               ", naive = " + std::to_string(nset.budget()));
}

void criterion_trajectory_preservation(const JrArtifacts& art) {
    Timer timer;
    DenseMatrix params(art.set.points.size(), art.optimum.size());
    for (std::size_t i = 0; i < art.set.points.size(); ++i)
        for (std::size_t c = 0; c < art.optimum.size(); ++c)
            params(i, c) = art.set.points[i].params[c];

    phate::Config pc;
    pc.metric = Metric::cosine;
    const phate::Embedding emb = phate::embed(params, pc);

    // consecutive-epoch pairs within each (seed, step) trajectory
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i + 1 < art.set.points.size(); ++i) {
        const auto& a = art.set.points[i];
        const auto& b = art.set.points[i + 1];
        if (a.seed == b.seed && a.step_size == b.step_size && b.epoch == a.epoch + 1)
            pairs.emplace_back(i, i + 1);
    }
    const double observed = studies::trajectory_preservation_score(emb.coordinates, pairs, 10);

    std::vector<double> baseline;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        SeededRng rng(rep + 1);
        const auto perm = rng.permutation(emb.coordinates.rows);
        DenseMatrix moved(emb.coordinates.rows, emb.coordinates.cols);
        for (std::size_t i = 0; i < moved.rows; ++i)
            for (std::size_t c = 0; c < moved.cols; ++c)
                moved(i, c) = emb.coordinates(perm[i], c);
        baseline.push_back(studies::trajectory_preservation_score(moved, pairs, 10));
    }
    std::sort(baseline.begin(), baseline.end());
    const double p95 = baseline[47];
    report(9, "trajectory preservation", observed > p95, timer.seconds(), 120.0,
           "score = " + io::format_double(observed) +
               " vs shuffled 95th pct = " + io::format_double(p95) + " (" +
               std::to_string(pairs.size()) + " pairs, t = " + std::to_string(emb.t) + ")");
}

// ---- 10/11. study block ---------------------------------------------------------

void criterion_study() {
    Timer timer;
    nn::Dataset data = nn::make_dataset(nn::DatasetKind::two_moons, 200, 200, 0.15, 7);

    studies::StudyConfig sc;
    sc.factors.batch_sizes = {16, 32, 64};
    sc.factors.weight_decays = {0.0, 1e-4, 1e-3};
    sc.factors.augmentation = {false, true};
    sc.factors.widths = {16};
    sc.factors.init_seeds = {0, 1};
    sc.base_train.arch = {2, 16, 16, 2};
    sc.base_train.optimizer.kind = nn::OptimizerKind::sgd_momentum;
    sc.base_train.lr.base = 0.1;
    sc.base_train.lr.decay_epochs = {100};
    sc.base_train.epochs = 150;
    sc.base_train.shuffle_seed = 5;
    sc.phate_cfg.metric = Metric::cosine;

    const studies::StudyReport report_data = studies::run_study(data, sc);

    const studies::TaskStats* wd = nullptr;
    for (const auto& t : report_data.task_stats)
        if (t.task == "weight_decay") wd = &t;

    const bool cells_ok = report_data.sweep.cells.size() == 36;
    const bool beats_chance = wd && wd->jr_mean > wd->chance && wd->permutation_p < 0.05;
    report(10, "sampler-comparison study", cells_ok && beats_chance, timer.seconds(), 900.0,
           "36 cells, weight-decay jr = " + io::format_double(wd ? wd->jr_mean : 0.0) +
               " (chance 0.333), perm p = " + io::format_double(wd ? wd->permutation_p : 1.0));

    const bool ordering = wd && wd->jr_mean >= wd->grid_mean && wd->jr_mean >= wd->naive_mean;
    report(10, "  j&r >= grid, naive (soft)", ordering, 0.0, 0.0,
           "jr = " + io::format_double(wd ? wd->jr_mean : 0.0) +
               ", grid = " + io::format_double(wd ? wd->grid_mean : 0.0) +
               ", naive = " + io::format_double(wd ? wd->naive_mean : 0.0),
           true);

    const bool trend = report_data.spearman_h0 > 0.0 && report_data.spearman_p < 0.05;
    report(11, "persistence vs generalization", trend, 0.0, 0.0,
           "spearman = " + io::format_double(report_data.spearman_h0) +
               ", perm p = " + io::format_double(report_data.spearman_p),
           true);
}

// ---- 12. determinism ---------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& dir) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + LLTK_CLI_PATH + "' " + args +
                            " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

void criterion_determinism() {
    Timer timer;
    const fs::path dir = fs::temp_directory_path() / "lltk_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    io::write_file(dir / "det.cfg",
                   "seed = 11\n[dataset]\nkind = two_moons\nn_train = 100\nn_test = 100\n"
                   "noise = 0.15\n[model]\narch = 2,12,12,2\n[train]\noptimizer = sgd_momentum\n"
                   "lr = 0.1\nepochs = 80\nbatch_size = 16\nshuffle_seed = 1\ninit_seed = 3\n"
                   "[sample]\nmethod = jr\nseeds = 0,1\nstep_sizes = 0.5,1.0\nretrain_epochs = 6\n"
                   "[phate]\nmetric = cosine\nk = 5\n[persist]\nk = 10\npolicy = cap\n");

    bool ok = run_cli("pipeline --config det.cfg --out a", dir) == 0 &&
              run_cli("pipeline --config det.cfg --out b", dir) == 0;

    std::size_t compared = 0;
    std::string mismatch;
    if (ok) {
        for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
            if (!entry.is_regular_file()) continue;
            const fs::path rel = fs::relative(entry.path(), dir / "a");
            if (rel.filename().string().find("_manifest.txt") != std::string::npos)
                continue;  // manifests carry timestamps by design
            const fs::path other = dir / "b" / rel;
            if (!fs::exists(other) ||
                io::fnv1a64_file(entry.path()) != io::fnv1a64_file(other)) {
                ok = false;
                mismatch = rel.string();
                break;
            }
            ++compared;
        }
    }
    report(12, "pipeline determinism", ok, timer.seconds(), 300.0,
           ok ? std::to_string(compared) + " data files byte-identical"
              : "mismatch at " + mismatch);
    fs::remove_all(dir);
}

}  // namespace

int main() {
    configure_threads_from_env(0);
    std::puts("lltk acceptance suite");
    std::puts("---------------------");

    criterion_gradients();
    criterion_operator_invariants();
    criterion_potentials();
    criterion_mds();
    criterion_persistence();
    criterion_total_persistence();

    Timer jr_timer;
    const JrArtifacts art = make_jr_artifacts();
    const double setup = jr_timer.seconds();
    criterion_jr_sanity(art, setup);
    criterion_budgets(art);
    criterion_trajectory_preservation(art);

    criterion_study();
    criterion_determinism();

    std::printf("---------------------\n%s (%d hard failure%s)\n",
                g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures,
                g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
