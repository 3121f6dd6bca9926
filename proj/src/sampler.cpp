#include "lltk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lltk/rng.hpp"

namespace lltk::sampler {

Direction random_direction(const nn::ParamLayout& layout, std::uint64_t base_seed,
                           std::uint64_t stream) {
    SeededRng rng(base_seed, stream);
    Direction d;
    d.seed = stream;
    d.v.resize(layout.dim);
    for (double& x : d.v) x = rng.normal();
    return d;
}

void filter_normalize(Direction& d, const ParamVector& reference, const nn::ParamLayout& layout) {
    if (d.v.size() != layout.dim || reference.size() != layout.dim)
        throw std::invalid_argument("filter_normalize: shape mismatch");
    for (const nn::FilterSlice& s : layout.slices) {
        double nd = 0.0, nr = 0.0;
        for (std::size_t i = s.offset; i < s.offset + s.length; ++i) {
            nd += d.v[i] * d.v[i];
            nr += reference[i] * reference[i];
        }
        nd = std::sqrt(nd);
        nr = std::sqrt(nr);
        if (nd == 0.0 || nr == 0.0) {
            for (std::size_t i = s.offset; i < s.offset + s.length; ++i) d.v[i] = 0.0;
        } else {
            const double scale = nr / nd;
            for (std::size_t i = s.offset; i < s.offset + s.length; ++i) d.v[i] *= scale;
        }
    }
    d.normalized = true;
}

std::size_t SampleSet::budget() const {
    std::size_t n = 0;
    for (const SamplePoint& p : points)
        if (p.in_budget) ++n;
    return n;
}

namespace {

SamplePoint evaluate_point(const nn::Mlp& mlp, const nn::Dataset& data, double weight_decay,
                           ParamVector params) {
    SamplePoint pt;
    const nn::Metrics train_m = mlp.evaluate(params, data.train_x, data.train_y, weight_decay);
    const nn::Metrics test_m = mlp.evaluate(params, data.test_x, data.test_y, weight_decay);
    pt.train_loss = train_m.loss;
    pt.train_acc = train_m.accuracy;
    pt.test_loss = test_m.loss;
    pt.test_acc = test_m.accuracy;
    pt.params = std::move(params);
    return pt;
}

}  // namespace

SampleSet jump_and_retrain(const nn::Mlp& mlp, const nn::Dataset& data,
                           const nn::TrainConfig& train_cfg, const ParamVector& optimum,
                           const JrOptions& opt) {
    if (optimum.size() != mlp.param_count())
        throw std::invalid_argument("jump_and_retrain: optimum does not match architecture");

    SampleSet set;
    set.method = Method::jr;
    set.optimum = optimum;

    nn::TrainConfig retrain_cfg = train_cfg;
    retrain_cfg.epochs = opt.retrain_epochs;

    for (std::uint64_t seed : opt.seeds) {
        Direction dir = random_direction(mlp.layout(), opt.direction_seed, seed);
        filter_normalize(dir, optimum, mlp.layout());
        for (double step : opt.step_sizes) {
            ParamVector jump_init(optimum.size());
            for (std::size_t i = 0; i < optimum.size(); ++i)
                jump_init[i] = optimum[i] + step * dir.v[i];

            // retraining shuffles must differ across (seed, step) pairs but
            // stay reproducible
            nn::TrainConfig cfg = retrain_cfg;
            cfg.shuffle_seed = io::fnv1a64("jr;" + std::to_string(train_cfg.shuffle_seed) + ";" +
                                           std::to_string(seed) + ";" + io::format_double(step));
            const nn::Trajectory traj = nn::train(mlp, data, cfg, jump_init);

            for (const nn::TrajectoryRecord& r : traj.records) {
                SamplePoint pt;
                pt.params = r.params;
                pt.train_loss = r.train_loss;
                pt.train_acc = r.train_acc;
                pt.test_loss = r.test_loss;
                pt.test_acc = r.test_acc;
                pt.seed = seed;
                pt.step_size = step;
                pt.epoch = r.epoch;
                pt.in_budget = r.epoch > 0;  // jump-init excluded
                if (r.epoch > 0 || opt.keep_jump_inits) set.points.push_back(std::move(pt));
            }
        }
    }
    return set;
}

SampleSet grid_sample(const nn::Mlp& mlp, const nn::Dataset& data, const ParamVector& optimum,
                      double weight_decay, const GridOptions& opt) {
    if (opt.per_axis == 0) throw std::invalid_argument("grid_sample: per_axis must be positive");
    const std::size_t lattice = opt.per_axis * opt.per_axis * opt.per_axis - 1;
    if (opt.budget > lattice)
        throw std::invalid_argument("grid_sample: budget exceeds lattice size " +
                                    std::to_string(lattice));

    std::vector<Direction> basis;
    for (std::uint64_t axis = 0; axis < 3; ++axis) {
        Direction d = random_direction(mlp.layout(), opt.direction_seed, axis);
        filter_normalize(d, optimum, mlp.layout());
        basis.push_back(std::move(d));
    }

    // symmetric lattice values in [-extent, extent]
    std::vector<double> axis_values(opt.per_axis);
    if (opt.per_axis == 1) {
        axis_values[0] = 0.0;
    } else {
        for (std::size_t i = 0; i < opt.per_axis; ++i)
            axis_values[i] = -opt.extent + 2.0 * opt.extent * static_cast<double>(i) /
                                               static_cast<double>(opt.per_axis - 1);
    }

    struct Cell {
        double norm;
        double c[3];
    };
    std::vector<Cell> cells;
    cells.reserve(lattice);
    for (double c0 : axis_values)
        for (double c1 : axis_values)
            for (double c2 : axis_values) {
                if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0) continue;  // origin excluded
                cells.push_back({std::sqrt(c0 * c0 + c1 * c1 + c2 * c2), {c0, c1, c2}});
            }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        if (a.c[0] != b.c[0]) return a.c[0] < b.c[0];
        if (a.c[1] != b.c[1]) return a.c[1] < b.c[1];
        return a.c[2] < b.c[2];
    });
    cells.resize(opt.budget);

    SampleSet set;
    set.method = Method::grid;
    set.optimum = optimum;
    set.points.resize(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(cells.size()); ++idx) {
        const Cell& cell = cells[idx];
        ParamVector p = optimum;
        for (int a = 0; a < 3; ++a)
            if (cell.c[a] != 0.0)
                for (std::size_t i = 0; i < p.size(); ++i) p[i] += cell.c[a] * basis[a].v[i];
        SamplePoint pt = evaluate_point(mlp, data, weight_decay, std::move(p));
        pt.epoch = static_cast<std::size_t>(idx);
        pt.grid_c[0] = cell.c[0];
        pt.grid_c[1] = cell.c[1];
        pt.grid_c[2] = cell.c[2];
        set.points[idx] = std::move(pt);
    }
    return set;
}

SampleSet naive_sample(const nn::Mlp& mlp, const nn::Dataset& data, const ParamVector& optimum,
                       double weight_decay, const NaiveOptions& opt) {
    std::vector<double> steps = opt.steps;
    if (steps.empty()) {
        steps.resize(10);
        for (std::size_t i = 0; i < 10; ++i) steps[i] = static_cast<double>(i + 1) / 10.0;
    }
    for (double c : steps)
        if (c == 0.0) throw std::invalid_argument("naive_sample: step 0 samples the optimum");

    SampleSet set;
    set.method = Method::naive;
    set.optimum = optimum;
    set.points.resize(opt.n_dirs * steps.size());

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(opt.n_dirs); ++d) {
        Direction dir = random_direction(mlp.layout(), opt.direction_seed, d);
        filter_normalize(dir, optimum, mlp.layout());
        for (std::size_t s = 0; s < steps.size(); ++s) {
            ParamVector p(optimum.size());
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = optimum[i] + steps[s] * dir.v[i];
            SamplePoint pt = evaluate_point(mlp, data, weight_decay, std::move(p));
            pt.seed = static_cast<std::uint64_t>(d);
            pt.step_size = steps[s];
            pt.epoch = s;
            set.points[d * steps.size() + s] = std::move(pt);
        }
    }
    return set;
}

namespace {

nn::Trajectory points_to_trajectory(const std::vector<const SamplePoint*>& pts) {
    nn::Trajectory traj;
    for (const SamplePoint* p : pts) {
        nn::TrajectoryRecord r;
        r.epoch = p->epoch;
        r.train_loss = p->train_loss;
        r.train_acc = p->train_acc;
        r.test_loss = p->test_loss;
        r.test_acc = p->test_acc;
        r.params = p->params;
        traj.records.push_back(std::move(r));
    }
    return traj;
}

}  // namespace

std::filesystem::path save_sample_set(const std::filesystem::path& dir, const std::string& stem,
                                      const SampleSet& set, const std::string& optimum_ref) {
    std::filesystem::create_directories(dir);
    io::KvDoc index;
    index.set("format", "lltk-sampleset");
    index.set("method", to_string(set.method));
    index.set_u64("budget", set.budget());
    index.set("optimum", optimum_ref);

    std::vector<std::string> files;
    if (set.method == Method::jr) {
        // preserve (seed, step) group order as stored
        std::vector<std::pair<std::uint64_t, double>> groups;
        for (const SamplePoint& p : set.points) {
            const std::pair<std::uint64_t, double> g{p.seed, p.step_size};
            if (groups.empty() || groups.back() != g) groups.push_back(g);
        }
        std::size_t gi = 0;
        for (const auto& [seed, step] : groups) {
            std::vector<const SamplePoint*> pts;
            for (const SamplePoint& p : set.points)
                if (p.seed == seed && p.step_size == step) pts.push_back(&p);
            nn::Trajectory traj = points_to_trajectory(pts);
            traj.meta.set("format", "lltk-trajectory");
            traj.meta.set_u64("jr_seed", seed);
            traj.meta.set_double("jr_step_size", step);
            const std::string name = stem + "_g" + std::to_string(gi++) + ".traj";
            nn::save_trajectory(dir / name, traj);
            files.push_back(name);
        }
    } else if (set.method == Method::grid) {
        std::vector<const SamplePoint*> pts;
        for (const SamplePoint& p : set.points) pts.push_back(&p);
        nn::Trajectory traj = points_to_trajectory(pts);
        traj.meta.set("format", "lltk-trajectory");
        for (std::size_t i = 0; i < set.points.size(); ++i) {
            const auto& c = set.points[i].grid_c;
            traj.meta.set("c" + std::to_string(i), io::format_double(c[0]) + "," +
                                                       io::format_double(c[1]) + "," +
                                                       io::format_double(c[2]));
        }
        const std::string name = stem + ".traj";
        nn::save_trajectory(dir / name, traj);
        files.push_back(name);
    } else {
        std::vector<std::uint64_t> dirs;
        for (const SamplePoint& p : set.points)
            if (dirs.empty() || dirs.back() != p.seed) dirs.push_back(p.seed);
        for (std::uint64_t d : dirs) {
            std::vector<const SamplePoint*> pts;
            std::string steps;
            for (const SamplePoint& p : set.points)
                if (p.seed == d) {
                    pts.push_back(&p);
                    steps += (steps.empty() ? "" : ",") + io::format_double(p.step_size);
                }
            nn::Trajectory traj = points_to_trajectory(pts);
            traj.meta.set("format", "lltk-trajectory");
            traj.meta.set_u64("direction", d);
            traj.meta.set("steps", steps);
            const std::string name = stem + "_d" + std::to_string(d) + ".traj";
            nn::save_trajectory(dir / name, traj);
            files.push_back(name);
        }
    }

    std::string joined;
    for (const std::string& f : files) joined += (joined.empty() ? "" : ",") + f;
    index.set("files", joined);
    const std::filesystem::path index_path = dir / (stem + "_index.meta");
    index.save(index_path);
    return index_path;
}

SampleSet load_sample_set(const std::filesystem::path& index_path) {
    const io::KvDoc index = io::KvDoc::load(index_path);
    if (index.get_or("format", "") != "lltk-sampleset")
        throw std::runtime_error("not a sample-set index: " + index_path.string());
    const std::filesystem::path dir = index_path.parent_path();

    SampleSet set;
    set.method = method_from_string(index.get("method"));
    for (const std::string& name : index.get_strings("files")) {
        const nn::Trajectory traj = nn::load_trajectory(dir / name);
        for (std::size_t i = 0; i < traj.records.size(); ++i) {
            const nn::TrajectoryRecord& r = traj.records[i];
            SamplePoint pt;
            pt.params = r.params;
            pt.train_loss = r.train_loss;
            pt.train_acc = r.train_acc;
            pt.test_loss = r.test_loss;
            pt.test_acc = r.test_acc;
            pt.epoch = r.epoch;
            if (set.method == Method::jr) {
                pt.seed = traj.meta.get_u64("jr_seed");
                pt.step_size = traj.meta.get_double("jr_step_size");
                pt.in_budget = r.epoch > 0;
            } else if (set.method == Method::naive) {
                pt.seed = traj.meta.get_u64("direction");
                pt.step_size = traj.meta.get_doubles("steps").at(i);
            } else {
                const auto c = traj.meta.get_doubles("c" + std::to_string(i));
                pt.grid_c[0] = c.at(0);
                pt.grid_c[1] = c.at(1);
                pt.grid_c[2] = c.at(2);
            }
            set.points.push_back(std::move(pt));
        }
    }

    const std::string opt_ref = index.get_or("optimum", "");
    if (!opt_ref.empty()) {
        const std::filesystem::path p =
            std::filesystem::path(opt_ref).is_absolute() ? std::filesystem::path(opt_ref)
                                                         : dir / opt_ref;
        if (std::filesystem::exists(p)) {
            const nn::Trajectory t = nn::load_trajectory(p);
            if (!t.records.empty()) set.optimum = t.records.back().params;
        }
    }
    return set;
}

Method method_from_string(const std::string& s) {
    if (s == "jr") return Method::jr;
    if (s == "grid") return Method::grid;
    if (s == "naive") return Method::naive;
    throw std::invalid_argument("unknown sampling method '" + s + "' (expected jr|grid|naive)");
}

const char* to_string(Method m) {
    switch (m) {
        case Method::jr: return "jr";
        case Method::grid: return "grid";
        case Method::naive: return "naive";
    }
    return "?";
}

}  // namespace lltk::sampler
