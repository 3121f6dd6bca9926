#include "lltk/train.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "lltk/rng.hpp"

namespace lltk::nn {

double LrSchedule::at(std::size_t epoch) const {
    double lr = base;
    for (std::size_t d : decay_epochs)
        if (epoch >= d) lr *= factor;
    return lr;
}

namespace {

TrajectoryRecord make_record(const Mlp& mlp, const Dataset& data, const TrainConfig& cfg,
                             std::size_t epoch, const ParamVector& params) {
    TrajectoryRecord rec;
    rec.epoch = epoch;
    const Metrics train_m = mlp.evaluate(params, data.train_x, data.train_y, cfg.weight_decay);
    const Metrics test_m = mlp.evaluate(params, data.test_x, data.test_y, cfg.weight_decay);
    rec.train_loss = train_m.loss;
    rec.train_acc = train_m.accuracy;
    rec.test_loss = test_m.loss;
    rec.test_acc = test_m.accuracy;
    rec.params = params;
    return rec;
}

}  // namespace

Trajectory train(const Mlp& mlp, const Dataset& data, const TrainConfig& cfg,
                 const ParamVector& start) {
    if (cfg.batch_size == 0) throw std::invalid_argument("train: batch_size must be positive");
    if (start.size() != mlp.param_count())
        throw std::invalid_argument("train: start point does not match architecture");

    Trajectory traj;
    traj.records.reserve(cfg.epochs + 1);
    traj.records.push_back(make_record(mlp, data, cfg, 0, start));

    ParamVector params = start;
    Optimizer opt(cfg.optimizer, params.size());
    SeededRng shuffle_rng(cfg.shuffle_seed, 0);
    SeededRng noise_rng(cfg.shuffle_seed, 1);

    const std::size_t n = data.train_x.rows;
    DenseMatrix batch_x;
    std::vector<int> batch_y;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double lr = cfg.lr.at(epoch);
        const std::vector<std::size_t> order = shuffle_rng.permutation(n);
        for (std::size_t b = 0; b < n; b += cfg.batch_size) {
            const std::size_t sz = std::min(cfg.batch_size, n - b);
            batch_x = DenseMatrix(sz, data.train_x.cols);
            batch_y.resize(sz);
            for (std::size_t i = 0; i < sz; ++i) {
                const std::size_t src = order[b + i];
                for (std::size_t c = 0; c < data.train_x.cols; ++c) {
                    double v = data.train_x(src, c);
                    if (cfg.input_noise > 0.0) v += cfg.input_noise * noise_rng.normal();
                    batch_x(i, c) = v;
                }
                batch_y[i] = data.train_y[src];
            }
            const LossGrad lg = mlp.loss_and_grad(params, batch_x, batch_y, cfg.weight_decay);
            opt.step(params, lg.grad, lr);
        }
        traj.records.push_back(make_record(mlp, data, cfg, epoch, params));
    }

    traj.meta.set("format", "lltk-trajectory");
    traj.meta.set("arch", [&] {
        std::string s;
        for (std::size_t i = 0; i < cfg.arch.size(); ++i)
            s += (i ? "," : "") + std::to_string(cfg.arch[i]);
        return s;
    }());
    traj.meta.set("optimizer", to_string(cfg.optimizer.kind));
    traj.meta.set_double("lr", cfg.lr.base);
    traj.meta.set_double("weight_decay", cfg.weight_decay);
    traj.meta.set_u64("epochs", cfg.epochs);
    traj.meta.set_u64("batch_size", cfg.batch_size);
    traj.meta.set_u64("shuffle_seed", cfg.shuffle_seed);
    traj.meta.set_double("input_noise", cfg.input_noise);
    traj.meta.set_u64("config_hash", train_config_hash(cfg));
    return traj;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

struct Reader {
    const std::string& s;
    std::size_t pos = 0;
    std::uint32_t u32() {
        if (pos + 4 > s.size()) throw std::runtime_error("trajectory file truncated");
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos++])) << (8 * b);
        return v;
    }
    double f64() {
        if (pos + 8 > s.size()) throw std::runtime_error("trajectory file truncated");
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[pos++])) << (8 * b);
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
};

}  // namespace

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    if (traj.records.empty()) throw std::invalid_argument("save_trajectory: no records");
    const std::size_t dim = traj.records.front().params.size();
    std::string out = "LLTK";
    out.push_back(0x01);
    put_u32(out, static_cast<std::uint32_t>(traj.records.size()));
    put_u32(out, static_cast<std::uint32_t>(dim));
    for (const TrajectoryRecord& r : traj.records) {
        if (r.params.size() != dim)
            throw std::invalid_argument("save_trajectory: inconsistent parameter dimension");
        put_u32(out, static_cast<std::uint32_t>(r.epoch));
        put_f64(out, r.train_loss);
        put_f64(out, r.train_acc);
        put_f64(out, r.test_loss);
        put_f64(out, r.test_acc);
        for (double p : r.params) put_f64(out, p);
    }
    io::write_file(path, out);
    std::filesystem::path meta = path;
    meta += ".meta";
    traj.meta.save(meta);
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    const std::string s = io::read_file(path);
    if (s.size() < 13 || s.compare(0, 4, "LLTK") != 0)
        throw std::runtime_error("not a trajectory file: " + path.string());
    if (s[4] != 0x01)
        throw std::runtime_error("unsupported trajectory version in " + path.string());
    Reader rd{s, 5};
    const std::uint32_t count = rd.u32();
    const std::uint32_t dim = rd.u32();
    Trajectory traj;
    traj.records.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        TrajectoryRecord& r = traj.records[i];
        r.epoch = rd.u32();
        r.train_loss = rd.f64();
        r.train_acc = rd.f64();
        r.test_loss = rd.f64();
        r.test_acc = rd.f64();
        r.params.resize(dim);
        for (std::uint32_t j = 0; j < dim; ++j) r.params[j] = rd.f64();
    }
    std::filesystem::path meta = path;
    meta += ".meta";
    if (std::filesystem::exists(meta)) traj.meta = io::KvDoc::load(meta);
    return traj;
}

std::uint64_t train_config_hash(const TrainConfig& cfg) {
    std::string repr = "arch=";
    for (std::size_t w : cfg.arch) repr += std::to_string(w) + ",";
    repr += ";opt=";
    repr += to_string(cfg.optimizer.kind);
    repr += ";mom=" + io::format_double(cfg.optimizer.momentum);
    repr += ";b1=" + io::format_double(cfg.optimizer.beta1);
    repr += ";b2=" + io::format_double(cfg.optimizer.beta2);
    repr += ";eps=" + io::format_double(cfg.optimizer.eps);
    repr += ";lr=" + io::format_double(cfg.lr.base);
    repr += ";factor=" + io::format_double(cfg.lr.factor);
    repr += ";decay=";
    for (std::size_t d : cfg.lr.decay_epochs) repr += std::to_string(d) + ",";
    repr += ";epochs=" + std::to_string(cfg.epochs);
    repr += ";batch=" + std::to_string(cfg.batch_size);
    repr += ";seed=" + std::to_string(cfg.shuffle_seed);
    repr += ";wd=" + io::format_double(cfg.weight_decay);
    repr += ";noise=" + io::format_double(cfg.input_noise);
    return io::fnv1a64(repr);
}

}  // namespace lltk::nn
