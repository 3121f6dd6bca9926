// End-to-end checks of the command-line tool. LLTK_CLI_PATH is injected by
// the build.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <string>

#include "lltk/io.hpp"
#include "lltk/topo.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path log = workdir / "cli_output.log";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + LLTK_CLI_PATH + "' " + args +
                            " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(status);
    if (fs::exists(log)) r.output = lltk::io::read_file(log);
    return r;
}

fs::path make_workdir() {
    const fs::path dir = fs::temp_directory_path() / "lltk_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    lltk::io::write_file(dir / "demo.cfg",
                         "seed = 7\n"
                         "[dataset]\n"
                         "kind = two_moons\n"
                         "n_train = 80\n"
                         "n_test = 80\n"
                         "noise = 0.15\n"
                         "[model]\n"
                         "arch = 2,10,10,2\n"
                         "[train]\n"
                         "optimizer = sgd_momentum\n"
                         "lr = 0.1\n"
                         "epochs = 60\n"
                         "batch_size = 16\n"
                         "shuffle_seed = 1\n"
                         "init_seed = 3\n"
                         "[sample]\n"
                         "method = jr\n"
                         "seeds = 0,1\n"
                         "step_sizes = 0.5,1.0\n"
                         "retrain_epochs = 5\n"
                         "[phate]\n"
                         "metric = cosine\n"
                         "k = 5\n"
                         "[persist]\n"
                         "k = 8\n"
                         "policy = cap\n");
    return dir;
}

std::uint64_t hash_file(const fs::path& p) { return lltk::io::fnv1a64_file(p); }

}  // namespace

TEST_CASE("cli: train, sample, embed, persist chain with correct artifacts") {
    const fs::path dir = make_workdir();

    RunResult train = run_cli("train --config demo.cfg --out t1", dir);
    CHECK(train.code == 0);
    CHECK(fs::exists(dir / "t1" / "optimum.traj"));
    CHECK(fs::exists(dir / "t1" / "trajectory.traj"));
    CHECK(fs::exists(dir / "t1" / "train_manifest.txt"));

    // deterministic rerun: identical data artifacts
    RunResult train2 = run_cli("train --config demo.cfg --out t2", dir);
    CHECK(train2.code == 0);
    CHECK(hash_file(dir / "t1" / "trajectory.traj") == hash_file(dir / "t2" / "trajectory.traj"));
    CHECK(hash_file(dir / "t1" / "optimum.traj") == hash_file(dir / "t2" / "optimum.traj"));

    RunResult sample = run_cli("sample --config demo.cfg --out s1 --optimum t1/optimum.traj", dir);
    CHECK(sample.code == 0);
    CHECK(sample.output.find("budget = 10") != std::string::npos);  // 2x2x5 retrain points
    // one trajectory file per (seed, step) group
    CHECK(fs::exists(dir / "s1" / "samples_jr_g0.traj"));
    CHECK(fs::exists(dir / "s1" / "samples_jr_g3.traj"));
    CHECK(fs::exists(dir / "s1" / "samples_jr_index.meta"));

    RunResult embed =
        run_cli("embed --config demo.cfg --out e1 --samples s1/samples_jr_index.meta", dir);
    CHECK(embed.code == 0);
    const std::string emb_csv = lltk::io::read_file(dir / "e1" / "embedding.csv");
    std::size_t rows = 0;
    for (const std::string& line : lltk::io::split(emb_csv, '\n'))
        if (!line.empty()) ++rows;
    CHECK(rows == 1 + 14);  // header + 10 retrain + 4 jump-init points

    RunResult persist = run_cli(
        "persist --config demo.cfg --out p1 --potentials e1/potentials.csv "
        "--losses e1/embedding.csv",
        dir);
    CHECK(persist.code == 0);
    CHECK(fs::exists(dir / "p1" / "diagrams.csv"));

    // totals recompute exactly from the emitted diagram csv
    const auto diagrams =
        lltk::topo::diagrams_from_csv(lltk::io::read_file(dir / "p1" / "diagrams.csv"));
    const lltk::io::KvDoc totals = lltk::io::KvDoc::load(dir / "p1" / "totals.meta");
    CHECK(lltk::topo::total_persistence(diagrams[0], lltk::topo::EssentialPolicy::cap) ==
          totals.get_double("total_persistence_h0_cap"));
    CHECK(lltk::topo::total_persistence(diagrams[1], lltk::topo::EssentialPolicy::drop) ==
          totals.get_double("total_persistence_h1_drop"));
    CHECK(totals.get_double("total_persistence_h0_drop") <=
          totals.get_double("total_persistence_h0_cap"));

    // h0 essential count equals the component count of the knn graph
    std::size_t essential = 0;
    for (const auto& p : diagrams[0].pairs) essential += p.essential;
    CHECK(essential >= 1);

    RunResult plot = run_cli(
        "plot --kind embedding_scatter --data e1/embedding.csv --color-by seed --svg e1/e.svg",
        dir);
    CHECK(plot.code == 0);
    CHECK(lltk::io::read_file(dir / "e1" / "e.svg").find("</svg>") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("cli: exit codes for usage problems") {
    const fs::path dir = make_workdir();

    CHECK(run_cli("train --config nope.cfg", dir).code == 2);

    lltk::io::write_file(dir / "bad.cfg", "this is not a key value line\n");
    RunResult bad = run_cli("train --config bad.cfg", dir);
    CHECK(bad.code == 2);
    CHECK(bad.output.find("line 1") != std::string::npos);

    lltk::io::write_file(dir / "nokey.cfg", "[model]\narch = 2,8,2\n");
    RunResult nokey = run_cli("train --config nokey.cfg", dir);
    CHECK(nokey.code == 2);
    CHECK(nokey.output.find("train.epochs") != std::string::npos);

    RunResult method = run_cli("sample --config demo.cfg --method bogus --optimum x.traj", dir);
    CHECK(method.code == 2);

    CHECK(run_cli("", dir).code == 2);
    CHECK(run_cli("--help", dir).code == 0);
    fs::remove_all(dir);
}
