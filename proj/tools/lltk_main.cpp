// lltk - loss-landscape sampling, embedding and topology toolkit.
//
// Subcommands: train, sample, embed, persist, study, plot, pipeline.
// Exit codes: 0 success, 2 usage/config error, 1 runtime error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "lltk/io.hpp"
#include "lltk/manifest.hpp"
#include "lltk/phate.hpp"
#include "lltk/sampler.hpp"
#include "lltk/studies.hpp"
#include "lltk/svg.hpp"
#include "lltk/threads.hpp"
#include "lltk/topo.hpp"
#include "lltk/train.hpp"

namespace fs = std::filesystem;
using lltk::io::KvDoc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::string policy;   // empty = from config
    std::string metric;   // empty = from config
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "key = value configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "base seed for section seeds left unset")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    cmd->add_option("--policy", opts.policy, "essential-class policy: cap|drop")
        ->check(CLI::IsMember({"cap", "drop"}));
    cmd->add_option("--metric", opts.metric, "distance metric: euclidean|cosine")
        ->check(CLI::IsMember({"euclidean", "cosine"}));
}

KvDoc load_config(const CommonOpts& opts) {
    if (!fs::exists(opts.config_path))
        throw std::invalid_argument("config file not found: " + opts.config_path);
    KvDoc cfg = KvDoc::load(opts.config_path);
    if (opts.seed_given) cfg.set_u64("seed", opts.seed);
    if (!opts.metric.empty()) cfg.set("phate.metric", opts.metric);
    if (!opts.policy.empty()) cfg.set("persist.policy", opts.policy);
    return cfg;
}

std::uint64_t base_seed(const KvDoc& cfg) { return cfg.get_u64_or("seed", 0); }

// ---- config section builders ----

lltk::nn::Dataset dataset_from(const KvDoc& cfg) {
    return lltk::nn::make_dataset(
        lltk::nn::dataset_kind_from_string(cfg.get_or("dataset.kind", "two_moons")),
        cfg.get_u64_or("dataset.n_train", 200), cfg.get_u64_or("dataset.n_test", 200),
        cfg.get_double_or("dataset.noise", 0.15), cfg.get_u64_or("dataset.seed", base_seed(cfg)),
        cfg.get_or("dataset.label_mode", "true") == "randomized"
            ? lltk::nn::LabelMode::randomized
            : lltk::nn::LabelMode::true_labels);
}

std::vector<std::size_t> arch_from(const KvDoc& cfg) {
    std::vector<std::size_t> arch;
    for (std::uint64_t w : cfg.get_u64s("model.arch")) arch.push_back(w);
    return arch;
}

lltk::nn::TrainConfig train_config_from(const KvDoc& cfg) {
    lltk::nn::TrainConfig tc;
    tc.arch = arch_from(cfg);
    tc.optimizer.kind =
        lltk::nn::optimizer_from_string(cfg.get_or("train.optimizer", "sgd_momentum"));
    tc.optimizer.momentum = cfg.get_double_or("train.momentum", 0.9);
    tc.optimizer.beta1 = cfg.get_double_or("train.beta1", 0.9);
    tc.optimizer.beta2 = cfg.get_double_or("train.beta2", 0.999);
    tc.optimizer.eps = cfg.get_double_or("train.eps", 1e-8);
    tc.lr.base = cfg.get_double_or("train.lr", 0.1);
    tc.lr.factor = cfg.get_double_or("train.lr_decay_factor", 0.1);
    if (cfg.has("train.lr_decay_epochs"))
        for (std::uint64_t e : cfg.get_u64s("train.lr_decay_epochs"))
            tc.lr.decay_epochs.push_back(e);
    tc.epochs = cfg.get_u64("train.epochs");
    tc.batch_size = cfg.get_u64_or("train.batch_size", 32);
    tc.shuffle_seed = cfg.get_u64_or("train.shuffle_seed", base_seed(cfg));
    tc.weight_decay = cfg.get_double_or("train.weight_decay", 0.0);
    tc.input_noise = cfg.get_double_or("train.input_noise", 0.0);
    return tc;
}

lltk::phate::Config phate_config_from(const KvDoc& cfg) {
    lltk::phate::Config pc;
    pc.metric = lltk::metric_from_string(cfg.get_or("phate.metric", "cosine"));
    pc.k = cfg.get_u64_or("phate.k", 5);
    pc.alpha = cfg.get_double_or("phate.alpha", 2.0);
    pc.dim = cfg.get_u64_or("phate.dim", 2);
    pc.t = static_cast<unsigned>(cfg.get_u64_or("phate.t", 0));
    pc.t_max = static_cast<unsigned>(cfg.get_u64_or("phate.t_max", 100));
    pc.potential_floor = cfg.get_double_or("phate.potential_floor", 1e-12);
    pc.mds_max_iter = cfg.get_u64_or("phate.mds_max_iter", 300);
    pc.mds_rel_tol = cfg.get_double_or("phate.mds_rel_tol", 1e-6);
    return pc;
}

lltk::sampler::JrOptions jr_options_from(const KvDoc& cfg) {
    lltk::sampler::JrOptions jr;
    if (cfg.has("sample.seeds")) jr.seeds = cfg.get_u64s("sample.seeds");
    if (cfg.has("sample.step_sizes")) jr.step_sizes = cfg.get_doubles("sample.step_sizes");
    jr.retrain_epochs = cfg.get_u64_or("sample.retrain_epochs", 32);
    jr.direction_seed = cfg.get_u64_or("sample.direction_seed", base_seed(cfg));
    jr.keep_jump_inits = cfg.get_or("sample.keep_jump_inits", "true") == "true";
    return jr;
}

lltk::sampler::GridOptions grid_options_from(const KvDoc& cfg) {
    lltk::sampler::GridOptions g;
    g.per_axis = cfg.get_u64_or("sample.per_axis", 9);
    g.extent = cfg.get_double_or("sample.extent", 1.0);
    g.budget = cfg.get_u64_or("sample.budget", 640);
    g.direction_seed = cfg.get_u64_or("sample.direction_seed", base_seed(cfg));
    return g;
}

lltk::sampler::NaiveOptions naive_options_from(const KvDoc& cfg) {
    lltk::sampler::NaiveOptions n;
    n.n_dirs = cfg.get_u64_or("sample.n_dirs", 64);
    if (cfg.has("sample.steps")) n.steps = cfg.get_doubles("sample.steps");
    n.direction_seed = cfg.get_u64_or("sample.direction_seed", base_seed(cfg));
    return n;
}

lltk::nn::ParamVector load_optimum(const fs::path& file) {
    const lltk::nn::Trajectory t = lltk::nn::load_trajectory(file);
    if (t.records.empty()) throw std::runtime_error("optimum file has no records");
    return t.records.back().params;
}

// ---- csv helpers ----

std::string embedding_csv(const lltk::sampler::SampleSet& set,
                          const lltk::phate::Embedding& emb) {
    std::string out = "index,x,y";
    if (emb.coordinates.cols == 3) out += ",z";
    out += ",train_loss,train_acc,test_loss,test_acc,seed,step_size,epoch,in_budget\n";
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        const auto& p = set.points[i];
        out += std::to_string(i);
        for (std::size_t c = 0; c < emb.coordinates.cols; ++c)
            out += "," + lltk::io::format_double(emb.coordinates(i, c));
        out += "," + lltk::io::format_double(p.train_loss);
        out += "," + lltk::io::format_double(p.train_acc);
        out += "," + lltk::io::format_double(p.test_loss);
        out += "," + lltk::io::format_double(p.test_acc);
        out += "," + std::to_string(p.seed);
        out += "," + lltk::io::format_double(p.step_size);
        out += "," + std::to_string(p.epoch);
        out += p.in_budget ? ",1\n" : ",0\n";
    }
    return out;
}

std::string matrix_csv(const lltk::DenseMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) out += ',';
            out += lltk::io::format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

lltk::DenseMatrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    for (const std::string& line : lltk::io::split(text, '\n')) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const std::string& cell : lltk::io::split(line, ','))
            row.push_back(lltk::io::parse_double(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("matrix csv is empty");
    lltk::DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols) throw std::runtime_error("matrix csv is ragged");
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

// Column extraction from a headered csv.
std::vector<double> csv_column(const std::string& text, const std::string& column) {
    const std::vector<std::string> lines = lltk::io::split(text, '\n');
    if (lines.empty()) throw std::runtime_error("csv is empty");
    const std::vector<std::string> header = lltk::io::split(lines.front(), ',');
    std::size_t idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) idx = i;
    if (idx == header.size())
        throw std::invalid_argument("csv has no column '" + column + "'");
    std::vector<double> out;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        if (lines[l].empty()) continue;
        out.push_back(lltk::io::parse_double(lltk::io::split(lines[l], ',').at(idx)));
    }
    return out;
}

// ---- subcommands ----

int cmd_train(const CommonOpts& opts) {
    const KvDoc cfg = load_config(opts);
    lltk::RunManifest manifest("train");
    manifest.set_config(cfg);
    manifest.add_input(opts.config_path);

    const lltk::nn::Dataset data = dataset_from(cfg);
    const lltk::nn::TrainConfig tc = train_config_from(cfg);
    const lltk::nn::Mlp mlp(tc.arch);
    const std::uint64_t init_seed = cfg.get_u64_or("train.init_seed", base_seed(cfg));
    const lltk::nn::Trajectory traj = lltk::nn::train(mlp, data, tc, mlp.init_params(init_seed));

    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    lltk::nn::save_trajectory(out / "trajectory.traj", traj);

    lltk::nn::Trajectory optimum;
    optimum.records.push_back(traj.records.back());
    optimum.meta = traj.meta;
    optimum.meta.set_u64("init_seed", init_seed);
    lltk::nn::save_trajectory(out / "optimum.traj", optimum);

    for (const char* f : {"trajectory.traj", "trajectory.traj.meta", "optimum.traj",
                          "optimum.traj.meta"})
        manifest.add_output(out / f);
    manifest.save(out);

    const auto& last = traj.records.back();
    std::printf("trained %zu epochs: train_loss=%.6g train_acc=%.4f test_loss=%.6g test_acc=%.4f\n",
                tc.epochs, last.train_loss, last.train_acc, last.test_loss, last.test_acc);
    return 0;
}

int cmd_sample(const CommonOpts& opts, const std::string& method_flag,
               const std::string& optimum_flag) {
    const KvDoc cfg = load_config(opts);
    const std::string method_name =
        !method_flag.empty() ? method_flag : cfg.get_or("sample.method", "jr");
    const lltk::sampler::Method method = lltk::sampler::method_from_string(method_name);
    const std::string optimum_path =
        !optimum_flag.empty() ? optimum_flag : cfg.get("sample.optimum");

    lltk::RunManifest manifest("sample");
    manifest.set_config(cfg);
    manifest.set("method", method_name);
    manifest.add_input(opts.config_path);
    manifest.add_input(optimum_path);

    const lltk::nn::Dataset data = dataset_from(cfg);
    const lltk::nn::TrainConfig tc = train_config_from(cfg);
    const lltk::nn::Mlp mlp(tc.arch);
    const lltk::nn::ParamVector optimum = load_optimum(optimum_path);

    lltk::sampler::SampleSet set;
    switch (method) {
        case lltk::sampler::Method::jr:
            set = lltk::sampler::jump_and_retrain(mlp, data, tc, optimum, jr_options_from(cfg));
            break;
        case lltk::sampler::Method::grid:
            set = lltk::sampler::grid_sample(mlp, data, optimum, tc.weight_decay,
                                             grid_options_from(cfg));
            break;
        case lltk::sampler::Method::naive:
            set = lltk::sampler::naive_sample(mlp, data, optimum, tc.weight_decay,
                                              naive_options_from(cfg));
            break;
    }

    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    // reference the optimum relative to the index so artifacts do not
    // depend on where the output tree lives
    const fs::path optimum_ref = fs::proximate(optimum_path, out);
    const fs::path index = lltk::sampler::save_sample_set(out, "samples_" + method_name, set,
                                                          optimum_ref.string());
    const KvDoc index_doc = KvDoc::load(index);
    for (const std::string& f : index_doc.get_strings("files")) {
        manifest.add_output(out / f);
        manifest.add_output(out / (f + ".meta"));
    }
    manifest.add_output(index);
    manifest.save(out);

    std::printf("method = %s\nbudget = %zu\npoints = %zu\nindex = %s\n", method_name.c_str(),
                set.budget(), set.points.size(), index.string().c_str());
    return 0;
}

int cmd_embed(const CommonOpts& opts, const std::string& samples_flag) {
    const KvDoc cfg = load_config(opts);
    const std::string samples_path =
        !samples_flag.empty() ? samples_flag : cfg.get("embed.samples");

    lltk::RunManifest manifest("embed");
    manifest.set_config(cfg);
    manifest.add_input(opts.config_path);
    manifest.add_input(samples_path);

    const lltk::sampler::SampleSet set = lltk::sampler::load_sample_set(samples_path);
    const bool in_budget_only = cfg.get_or("embed.in_budget_only", "false") == "true";

    std::vector<const lltk::sampler::SamplePoint*> pts;
    for (const auto& p : set.points)
        if (!in_budget_only || p.in_budget) pts.push_back(&p);
    if (pts.empty()) throw std::runtime_error("sample set has no points to embed");

    lltk::DenseMatrix params(pts.size(), pts.front()->params.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t c = 0; c < params.cols; ++c) params(i, c) = pts[i]->params[c];

    const lltk::phate::Config pc = phate_config_from(cfg);
    const lltk::phate::Embedding emb = lltk::phate::embed(params, pc);

    lltk::sampler::SampleSet used;
    used.method = set.method;
    for (const auto* p : pts) used.points.push_back(*p);

    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    lltk::io::write_file(out / "embedding.csv", embedding_csv(used, emb));
    lltk::io::write_file(out / "potentials.csv", matrix_csv(emb.potential));
    KvDoc meta;
    meta.set("metric", lltk::to_string(pc.metric));
    meta.set_u64("diffusion_time", emb.t);
    meta.set_double("final_stress", emb.stress);
    meta.set_u64("points", pts.size());
    meta.save(out / "embedding.meta");

    manifest.add_output(out / "embedding.csv");
    manifest.add_output(out / "potentials.csv");
    manifest.add_output(out / "embedding.meta");
    manifest.save(out);

    std::printf("embedded %zu points, metric=%s, t=%u, stress=%.6g\n", pts.size(),
                lltk::to_string(pc.metric), emb.t, emb.stress);
    return 0;
}

int cmd_persist(const CommonOpts& opts, const std::string& potentials_flag,
                const std::string& losses_flag) {
    const KvDoc cfg = load_config(opts);
    const std::string potentials_path =
        !potentials_flag.empty() ? potentials_flag : cfg.get("persist.potentials");
    const std::string losses_path =
        !losses_flag.empty() ? losses_flag : cfg.get("persist.losses");
    const std::string loss_column = cfg.get_or("persist.loss_column", "train_loss");
    const std::size_t k = cfg.get_u64_or("persist.k", 20);
    const lltk::topo::EssentialPolicy policy =
        lltk::topo::policy_from_string(cfg.get_or("persist.policy", "cap"));

    lltk::RunManifest manifest("persist");
    manifest.set_config(cfg);
    manifest.add_input(opts.config_path);
    manifest.add_input(potentials_path);
    manifest.add_input(losses_path);

    const lltk::DenseMatrix ID = matrix_from_csv(lltk::io::read_file(potentials_path));
    lltk::topo::FilteredComplex fc;
    fc.values = csv_column(lltk::io::read_file(losses_path), loss_column);
    if (fc.values.size() != ID.rows)
        throw std::runtime_error("loss column length does not match the potentials matrix");
    fc.edges = lltk::topo::build_knn_graph(ID, k);
    fc.triangles = lltk::topo::flag_fill_triangles(fc.values.size(), fc.edges);

    const lltk::topo::PersistenceDiagram h0 = lltk::topo::persistence_h0(fc);
    const lltk::topo::PersistenceDiagram h1 = lltk::topo::persistence_h1(fc);

    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    lltk::io::write_file(out / "diagrams.csv", lltk::topo::diagrams_to_csv({h0, h1}));

    KvDoc totals;
    totals.set("policy", lltk::topo::to_string(policy));
    totals.set_u64("knn_k", k);
    totals.set_double("total_persistence_h0", lltk::topo::total_persistence(h0, policy));
    totals.set_double("total_persistence_h1", lltk::topo::total_persistence(h1, policy));
    totals.set_double("total_persistence_h0_cap",
                      lltk::topo::total_persistence(h0, lltk::topo::EssentialPolicy::cap));
    totals.set_double("total_persistence_h0_drop",
                      lltk::topo::total_persistence(h0, lltk::topo::EssentialPolicy::drop));
    totals.set_double("total_persistence_h1_cap",
                      lltk::topo::total_persistence(h1, lltk::topo::EssentialPolicy::cap));
    totals.set_double("total_persistence_h1_drop",
                      lltk::topo::total_persistence(h1, lltk::topo::EssentialPolicy::drop));
    totals.save(out / "totals.meta");

    manifest.add_output(out / "diagrams.csv");
    manifest.add_output(out / "totals.meta");
    manifest.save(out);

    std::size_t h0_essential = 0;
    for (const auto& p : h0.pairs) h0_essential += p.essential;
    std::printf("h0 pairs = %zu (essential %zu), h1 pairs = %zu\n", h0.pairs.size(), h0_essential,
                h1.pairs.size());
    std::printf("total_persistence_h0 = %s\ntotal_persistence_h1 = %s\n",
                totals.get("total_persistence_h0").c_str(),
                totals.get("total_persistence_h1").c_str());
    return 0;
}

lltk::studies::StudyConfig study_config_from(const KvDoc& cfg) {
    lltk::studies::StudyConfig sc;
    if (cfg.has("study.batch_sizes")) {
        sc.factors.batch_sizes.clear();
        for (std::uint64_t b : cfg.get_u64s("study.batch_sizes"))
            sc.factors.batch_sizes.push_back(b);
    }
    if (cfg.has("study.weight_decays"))
        sc.factors.weight_decays = cfg.get_doubles("study.weight_decays");
    if (cfg.has("study.augmentation")) {
        sc.factors.augmentation.clear();
        for (const std::string& a : cfg.get_strings("study.augmentation"))
            sc.factors.augmentation.push_back(a == "on" || a == "true" || a == "1");
    }
    if (cfg.has("study.widths")) {
        sc.factors.widths.clear();
        for (std::uint64_t w : cfg.get_u64s("study.widths")) sc.factors.widths.push_back(w);
    }
    if (cfg.has("study.init_seeds")) sc.factors.init_seeds = cfg.get_u64s("study.init_seeds");
    sc.factors.augment_noise = cfg.get_double_or("study.augment_noise", 0.1);

    sc.base_train = train_config_from(cfg);
    sc.jr = jr_options_from(cfg);
    sc.grid = grid_options_from(cfg);
    sc.naive = naive_options_from(cfg);
    sc.phate_cfg = phate_config_from(cfg);
    sc.generalization_classes = cfg.get_u64_or("study.classes_generalization", 3);
    sc.folds = cfg.get_u64_or("study.folds", 10);
    sc.cv_seed = cfg.get_u64_or("study.cv_seed", base_seed(cfg) + 1);
    sc.n_perm = cfg.get_u64_or("study.n_perm", 200);
    sc.topo_k = cfg.get_u64_or("persist.k", 20);
    sc.policy = lltk::topo::policy_from_string(cfg.get_or("persist.policy", "cap"));
    return sc;
}

int cmd_study(const CommonOpts& opts) {
    const KvDoc cfg = load_config(opts);
    lltk::RunManifest manifest("study");
    manifest.set_config(cfg);
    manifest.add_input(opts.config_path);

    const lltk::nn::Dataset data = dataset_from(cfg);
    const lltk::studies::StudyConfig sc = study_config_from(cfg);
    const lltk::studies::StudyReport report = lltk::studies::run_study(data, sc);

    const fs::path out(opts.out_dir);
    fs::create_directories(out);

    std::string rows_csv = "task,sampler,classifier,mean_accuracy,stderr,folds\n";
    for (const auto& r : report.rows)
        rows_csv += r.task + "," + r.sampler + "," + r.classifier + "," +
                    lltk::io::format_double(r.mean_accuracy) + "," +
                    lltk::io::format_double(r.stderr_accuracy) + "," + std::to_string(r.folds) +
                    "\n";
    lltk::io::write_file(out / "study_report.csv", rows_csv);

    std::string pers_csv =
        "network_id,batch_size,weight_decay,augmented,init_seed,test_loss,"
        "total_persistence_h0,total_persistence_h1\n";
    for (const auto& r : report.persistence)
        pers_csv += std::to_string(r.network_id) + "," + std::to_string(r.batch_size) + "," +
                    lltk::io::format_double(r.weight_decay) + "," +
                    (r.augmented ? "1," : "0,") + std::to_string(r.init_seed) + "," +
                    lltk::io::format_double(r.test_loss) + "," +
                    lltk::io::format_double(r.total_persistence_h0) + "," +
                    lltk::io::format_double(r.total_persistence_h1) + "\n";
    lltk::io::write_file(out / "persistence_table.csv", pers_csv);

    std::string summary;
    summary += "sweep cells: " + std::to_string(report.sweep.cells.size()) + "\n\n";
    for (const auto& t : report.task_stats) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "%-14s chance=%.3f  jr=%.3f grid=%.3f naive=%.3f  perm_p=%.4f "
                      "control=%.3f\n",
                      t.task.c_str(), t.chance, t.jr_mean, t.grid_mean, t.naive_mean,
                      t.permutation_p, t.control_accuracy);
        summary += buf;
    }
    {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "\nspearman(test_loss, H0 total persistence) = %.4f (p = %.4f)\n",
                      report.spearman_h0, report.spearman_p);
        summary += buf;
    }
    lltk::io::write_file(out / "study_summary.txt", summary);

    manifest.add_output(out / "study_report.csv");
    manifest.add_output(out / "persistence_table.csv");
    manifest.add_output(out / "study_summary.txt");
    manifest.save(out);

    std::fputs(summary.c_str(), stdout);
    return 0;
}

int cmd_plot(const CommonOpts& opts, const std::string& kind, const std::string& data_flag,
             const std::string& color_flag, const std::string& out_flag) {
    KvDoc cfg;
    if (!opts.config_path.empty()) cfg = load_config(opts);
    const std::string data_path = !data_flag.empty() ? data_flag : cfg.get("plot.data");
    const std::string color_by =
        !color_flag.empty() ? color_flag : cfg.get_or("plot.color_by", "epoch");

    lltk::RunManifest manifest("plot");
    manifest.set("kind", kind);
    manifest.add_input(data_path);

    std::string svg_text;
    if (kind == "embedding_scatter") {
        const std::string csv = lltk::io::read_file(data_path);
        const std::vector<double> xs = csv_column(csv, "x");
        const std::vector<double> ys = csv_column(csv, "y");
        std::vector<double> color;
        lltk::svg::ColorBy mode = lltk::svg::ColorBy::epoch;
        if (color_by == "seed") {
            color = csv_column(csv, "seed");
            mode = lltk::svg::ColorBy::seed;
        } else if (color_by == "loss") {
            color = csv_column(csv, "train_loss");
            mode = lltk::svg::ColorBy::loss;
        } else if (color_by == "loss_log") {
            color = csv_column(csv, "train_loss");
            mode = lltk::svg::ColorBy::loss_log;
        } else {
            color = csv_column(csv, "epoch");
        }
        const std::vector<double> epochs = csv_column(csv, "epoch");
        std::vector<lltk::svg::ScatterPoint> pts(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            pts[i] = {xs[i], ys[i], color[i], epochs[i] == 0.0};
        svg_text = lltk::svg::embedding_scatter(pts, mode, "embedding (" + color_by + ")");
    } else if (kind == "persistence_diagram") {
        const auto diagrams = lltk::topo::diagrams_from_csv(lltk::io::read_file(data_path));
        svg_text = lltk::svg::persistence_diagram(diagrams, "loss-level filtration");
    } else if (kind == "total_persistence_scatter") {
        const std::string csv = lltk::io::read_file(data_path);
        const std::vector<double> loss = csv_column(csv, "test_loss");
        const std::vector<double> tp = csv_column(csv, "total_persistence_h0");
        const std::vector<double> wd = csv_column(csv, "weight_decay");
        std::vector<lltk::svg::PersScatterRow> rows(loss.size());
        for (std::size_t i = 0; i < loss.size(); ++i) rows[i] = {loss[i], tp[i], wd[i]};
        svg_text = lltk::svg::total_persistence_scatter(rows, "total persistence vs test loss");
    } else {
        throw std::invalid_argument("unknown plot kind '" + kind + "'");
    }

    const fs::path out_file =
        !out_flag.empty() ? fs::path(out_flag) : fs::path(opts.out_dir) / (kind + ".svg");
    lltk::io::write_file(out_file, svg_text);
    manifest.add_output(out_file);
    manifest.save(out_file.has_parent_path() ? out_file.parent_path() : fs::path("."));
    std::printf("wrote %s\n", out_file.string().c_str());
    return 0;
}

int cmd_pipeline(const CommonOpts& opts) {
    const KvDoc cfg = load_config(opts);
    const fs::path out(opts.out_dir);
    fs::create_directories(out);

    CommonOpts stage = opts;

    stage.out_dir = (out / "train").string();
    cmd_train(stage);

    stage.out_dir = (out / "sample").string();
    const std::string method = cfg.get_or("sample.method", "jr");
    cmd_sample(stage, method, (out / "train" / "optimum.traj").string());

    stage.out_dir = (out / "embed").string();
    cmd_embed(stage, (out / "sample" / ("samples_" + method + "_index.meta")).string());

    stage.out_dir = (out / "persist").string();
    cmd_persist(stage, (out / "embed" / "potentials.csv").string(),
                (out / "embed" / "embedding.csv").string());

    if (cfg.has("study.batch_sizes") || cfg.has("study.init_seeds")) {
        stage.out_dir = (out / "study").string();
        cmd_study(stage);
    } else {
        std::puts("pipeline: no [study] section, stopping after persist");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loss-landscape sampling, embedding and topology toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string method_flag, optimum_flag, samples_flag, potentials_flag, losses_flag;
    std::string plot_kind, plot_data, plot_color, plot_out;

    CLI::App* train = app.add_subcommand("train", "train a network, write optimum + trajectory");
    add_common(train, opts);

    CLI::App* sample = app.add_subcommand("sample", "sample the landscape around an optimum");
    add_common(sample, opts);
    sample->add_option("--method", method_flag, "jr|grid|naive (overrides config)");
    sample->add_option("--optimum", optimum_flag, "optimum trajectory file (overrides config)");

    CLI::App* embed = app.add_subcommand("embed", "embed a sample set");
    add_common(embed, opts);
    embed->add_option("--samples", samples_flag, "sample-set index file (overrides config)");

    CLI::App* persist = app.add_subcommand("persist", "persistence diagrams of a sample set");
    add_common(persist, opts);
    persist->add_option("--potentials", potentials_flag, "potential-distance csv");
    persist->add_option("--losses", losses_flag, "csv providing the vertex loss column");

    CLI::App* study = app.add_subcommand("study", "sweep + sampler comparison + persistence");
    add_common(study, opts);

    CLI::App* plot = app.add_subcommand("plot", "render an svg from csv artifacts");
    add_common(plot, opts, false);
    plot->add_option("--kind", plot_kind,
                     "embedding_scatter|persistence_diagram|total_persistence_scatter")
        ->required();
    plot->add_option("--data", plot_data, "input csv");
    plot->add_option("--color-by", plot_color, "epoch|seed|loss|loss_log");
    plot->add_option("--svg", plot_out, "output svg path");

    CLI::App* pipeline = app.add_subcommand("pipeline", "train, sample, embed, persist, study");
    add_common(pipeline, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        lltk::configure_threads_from_env(opts.threads);
        if (train->parsed()) return cmd_train(opts);
        if (sample->parsed()) return cmd_sample(opts, method_flag, optimum_flag);
        if (embed->parsed()) return cmd_embed(opts, samples_flag);
        if (persist->parsed()) return cmd_persist(opts, potentials_flag, losses_flag);
        if (study->parsed()) return cmd_study(opts);
        if (plot->parsed()) return cmd_plot(opts, plot_kind, plot_data, plot_color, plot_out);
        if (pipeline->parsed()) return cmd_pipeline(opts);
    } catch (const lltk::io::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
