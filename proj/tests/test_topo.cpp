#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>

#include "lltk/kernels.hpp"
#include "lltk/rng.hpp"
#include "lltk/topo.hpp"
#include "oracles.hpp"

using namespace lltk;
using namespace lltk::topo;

namespace {

FilteredComplex make_complex(std::vector<double> values, std::vector<Edge> edges,
                             bool fill = true) {
    FilteredComplex fc;
    fc.values = std::move(values);
    fc.edges = std::move(edges);
    if (fill) fc.triangles = flag_fill_triangles(fc.values.size(), fc.edges);
    return fc;
}

// All thresholds worth probing: below min, every distinct value, midpoints,
// above max.
std::vector<double> probe_thresholds(const FilteredComplex& fc) {
    std::vector<double> vals = fc.values;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<double> probes;
    probes.push_back(vals.front() - 1.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        probes.push_back(vals[i]);
        if (i + 1 < vals.size()) probes.push_back(0.5 * (vals[i] + vals[i + 1]));
    }
    probes.push_back(vals.back() + 1.0);
    return probes;
}

FilteredComplex random_complex(std::size_t n, double p, SeededRng& rng, bool grid_values) {
    std::vector<double> values(n);
    for (double& v : values)
        v = grid_values ? 0.125 * static_cast<double>(rng.below(8)) : rng.uniform01();
    return make_complex(std::move(values), oracle::random_graph(n, p, rng));
}

}  // namespace

TEST_CASE("knn graph: k = n-1 gives the complete graph") {
    DenseMatrix ID(3, 3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) ID(i, i) = 0.0;
    const std::vector<Edge> edges = build_knn_graph(ID, 2);
    CHECK(edges.size() == 3);
}

TEST_CASE("knn graph: collinear points, union of directed relations") {
    DenseMatrix pts(4, 1);
    pts(0, 0) = 0.0;
    pts(1, 0) = 1.0;
    pts(2, 0) = 2.0;
    pts(3, 0) = 10.0;
    const DenseMatrix D = pairwise_distances(pts, Metric::euclidean);
    const std::vector<Edge> edges = build_knn_graph(D, 1);
    const std::vector<Edge> expected = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(edges == expected);
}

TEST_CASE("knn graph: matches the per-pair membership definition") {
    SeededRng rng(55);
    const DenseMatrix pts = oracle::random_matrix(25, 3, rng);
    const DenseMatrix D = pairwise_distances(pts, Metric::euclidean);
    const std::size_t k = 4;
    const std::vector<Edge> edges = build_knn_graph(D, k);

    const auto nl = oracle::knn_full_sort(D, k);
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < 25; ++i)
        for (const auto& [j, dist] : nl[i])
            expected.emplace(std::min(i, j), std::max(i, j));

    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const Edge& e : edges) {
        CHECK(e.u < e.v);
        got.emplace(e.u, e.v);
    }
    CHECK(got == expected);
}

TEST_CASE("flag fill: triangle graph and square") {
    const auto tri = flag_fill_triangles(3, {{0, 1}, {0, 2}, {1, 2}});
    REQUIRE(tri.size() == 1);
    CHECK(tri[0] == std::array<std::size_t, 3>{0, 1, 2});

    const auto square = flag_fill_triangles(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(square.empty());
}

TEST_CASE("flag fill: matches triple-loop clique enumeration") {
    SeededRng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 10;
        const std::vector<Edge> edges = oracle::random_graph(n, 0.5, rng);
        std::set<std::pair<std::size_t, std::size_t>> eset;
        for (const Edge& e : edges) eset.emplace(e.u, e.v);
        auto has = [&](std::size_t a, std::size_t b) {
            return eset.count({std::min(a, b), std::max(a, b)}) > 0;
        };
        std::vector<std::array<std::size_t, 3>> expected;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c)
                    if (has(a, b) && has(a, c) && has(b, c)) expected.push_back({a, b, c});
        CHECK(flag_fill_triangles(n, edges) == expected);
    }
}

TEST_CASE("h0: path graph with increasing values") {
    const FilteredComplex fc = make_complex({0.0, 1.0, 2.0}, {{0, 1}, {1, 2}});
    const PersistenceDiagram d = persistence_h0(fc);
    REQUIRE(d.pairs.size() == 3);
    // sorted by (birth, death): essential (0, 2), then (1,1), (2,2)
    CHECK(d.pairs[0].birth == 0.0);
    CHECK(d.pairs[0].essential);
    CHECK(d.pairs[0].death == 2.0);
    CHECK(d.pairs[1].birth == 1.0);
    CHECK(d.pairs[1].death == 1.0);
    CHECK(!d.pairs[1].essential);
    CHECK(d.pairs[2].birth == 2.0);
    CHECK(d.pairs[2].death == 2.0);
}

TEST_CASE("h0: two vertices joined by one edge") {
    const FilteredComplex fc = make_complex({0.0, 5.0}, {{0, 1}});
    const PersistenceDiagram d = persistence_h0(fc);
    REQUIRE(d.pairs.size() == 2);
    CHECK(d.pairs[0].birth == 0.0);
    CHECK(d.pairs[0].essential);
    CHECK(d.pairs[1].birth == 5.0);
    CHECK(d.pairs[1].death == 5.0);
    CHECK(!d.pairs[1].essential);
}

TEST_CASE("h0: every vertex accounted for exactly once") {
    SeededRng rng(91);
    for (int rep = 0; rep < 25; ++rep) {
        const FilteredComplex fc = random_complex(12, 0.25, rng, rep % 2 == 0);
        const PersistenceDiagram d = persistence_h0(fc);
        CHECK(d.pairs.size() == fc.vertex_count());
    }
}

TEST_CASE("h0: diagram invariant under input edge order") {
    SeededRng rng(92);
    FilteredComplex fc = random_complex(10, 0.3, rng, true);
    const PersistenceDiagram a = persistence_h0(fc);
    // shuffle the edge list; the internal filtration order is canonical
    const auto perm = rng.permutation(fc.edges.size());
    std::vector<Edge> shuffled(fc.edges.size());
    for (std::size_t i = 0; i < fc.edges.size(); ++i) shuffled[i] = fc.edges[perm[i]];
    fc.edges = shuffled;
    const PersistenceDiagram b = persistence_h0(fc);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(a.pairs[i].birth == b.pairs[i].birth);
        CHECK(a.pairs[i].death == b.pairs[i].death);
        CHECK(a.pairs[i].essential == b.pairs[i].essential);
    }
}

TEST_CASE("h1: filled triangle is born and dies at the max vertex value") {
    const FilteredComplex fc = make_complex({0.0, 0.0, 0.0}, {{0, 1}, {0, 2}, {1, 2}});
    const PersistenceDiagram d = persistence_h1(fc);
    REQUIRE(d.pairs.size() == 1);
    CHECK(d.pairs[0].birth == 0.0);
    CHECK(d.pairs[0].death == 0.0);
    CHECK(!d.pairs[0].essential);
}

TEST_CASE("h1: empty square cycle is essential") {
    const FilteredComplex fc =
        make_complex({0.0, 0.0, 0.0, 0.0}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const PersistenceDiagram d = persistence_h1(fc);
    REQUIRE(d.pairs.size() == 1);
    CHECK(d.pairs[0].birth == 0.0);
    CHECK(d.pairs[0].essential);
}

TEST_CASE("diagrams match the sublevel flood-fill + rank oracle at every threshold") {
    SeededRng rng(101);
    int checked = 0;
    for (int rep = 0; rep < 120; ++rep) {
        const std::size_t n = 4 + rng.below(9);  // 4..12
        const double p = 0.15 + 0.5 * rng.uniform01();
        const FilteredComplex fc = random_complex(n, p, rng, rep % 3 == 0);
        const PersistenceDiagram d0 = persistence_h0(fc);
        const PersistenceDiagram d1 = persistence_h1(fc);
        for (double t : probe_thresholds(fc)) {
            const auto [b0, b1] = oracle::sublevel_betti(fc.values, fc.edges, fc.triangles, t);
            CHECK(oracle::betti_from_diagram(d0, t) == b0);
            CHECK(oracle::betti_from_diagram(d1, t) == b1);
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("betti_at agrees with the oracle and spec cases") {
    // empty sublevel
    const FilteredComplex path = make_complex({0.0, 1.0, 2.0}, {{0, 1}, {1, 2}});
    CHECK(betti_at(path, -0.5) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(betti_at(path, 2.0) == std::pair<std::size_t, std::size_t>{1, 0});

    const FilteredComplex square =
        make_complex({0.0, 0.0, 0.0, 0.0}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(betti_at(square, 0.0) == std::pair<std::size_t, std::size_t>{1, 1});

    SeededRng rng(103);
    for (int rep = 0; rep < 20; ++rep) {
        const FilteredComplex fc = random_complex(11, 0.35, rng, rep % 2 == 1);
        for (double t : probe_thresholds(fc))
            CHECK(betti_at(fc, t) ==
                  oracle::sublevel_betti(fc.values, fc.edges, fc.triangles, t));
    }
}

TEST_CASE("diagram stability: values perturbed by <= 1e-3 move pairs by <= 1e-3") {
    SeededRng rng(107);
    const double delta = 1e-3;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rng.below(7);
        // distinct vertex values with gaps >> 2*delta keep the pairing fixed
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = 0.01 * static_cast<double>(i + 1);
        const auto perm = rng.permutation(n);
        std::vector<double> shuffled(n);
        for (std::size_t i = 0; i < n; ++i) shuffled[i] = values[perm[i]];

        const std::vector<Edge> edges = oracle::random_graph(n, 0.4, rng);
        const FilteredComplex base = make_complex(shuffled, edges);

        std::vector<double> perturbed = shuffled;
        for (double& v : perturbed) v += delta * (2.0 * rng.uniform01() - 1.0);
        FilteredComplex moved = base;
        moved.values = perturbed;
        moved.triangles = flag_fill_triangles(n, edges);

        for (auto diagram : {&persistence_h0, &persistence_h1}) {
            const PersistenceDiagram a = diagram(base);
            const PersistenceDiagram b = diagram(moved);
            REQUIRE(a.pairs.size() == b.pairs.size());
            for (std::size_t i = 0; i < a.pairs.size(); ++i) {
                CHECK(std::fabs(a.pairs[i].birth - b.pairs[i].birth) <= delta);
                CHECK(std::fabs(a.pairs[i].death - b.pairs[i].death) <= delta);
            }
        }
    }
}

TEST_CASE("total persistence: direct arithmetic and policies") {
    PersistenceDiagram d;
    d.dimension = 0;
    d.pairs = {{0.0, 1.0, false}, {0.0, 2.0, false}};
    CHECK(total_persistence(d, EssentialPolicy::cap) == 5.0);
    CHECK(total_persistence(d, EssentialPolicy::drop) == 5.0);

    CHECK(total_persistence(PersistenceDiagram{}, EssentialPolicy::cap) == 0.0);

    const FilteredComplex path = make_complex({0.0, 1.0, 2.0}, {{0, 1}, {1, 2}});
    CHECK(total_persistence(persistence_h0(path), EssentialPolicy::drop) == 0.0);

    SeededRng rng(111);
    for (int rep = 0; rep < 100; ++rep) {
        PersistenceDiagram r;
        const std::size_t m = 1 + rng.below(10);
        for (std::size_t i = 0; i < m; ++i) {
            const double b = rng.uniform01();
            r.pairs.push_back({b, b + rng.uniform01(), rng.below(3) == 0});
        }
        CHECK(total_persistence(r, EssentialPolicy::cap) >=
              total_persistence(r, EssentialPolicy::drop));
    }
}

TEST_CASE("diagram csv: header, exact round trip") {
    SeededRng rng(113);
    const FilteredComplex fc = random_complex(10, 0.4, rng, false);
    const std::vector<PersistenceDiagram> ds = {persistence_h0(fc), persistence_h1(fc)};
    const std::string csv = diagrams_to_csv(ds);
    CHECK(csv.rfind("dim,birth,death,essential\n", 0) == 0);
    const auto back = diagrams_from_csv(csv);
    REQUIRE(back.size() == 2);
    for (int dim = 0; dim < 2; ++dim) {
        REQUIRE(back[dim].pairs.size() == ds[dim].pairs.size());
        for (std::size_t i = 0; i < ds[dim].pairs.size(); ++i) {
            CHECK(back[dim].pairs[i].birth == ds[dim].pairs[i].birth);
            CHECK(back[dim].pairs[i].death == ds[dim].pairs[i].death);
            CHECK(back[dim].pairs[i].essential == ds[dim].pairs[i].essential);
        }
    }
}

TEST_CASE("knn graph: k >= n rejected") {
    DenseMatrix ID(3, 3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) ID(i, i) = 0.0;
    CHECK_THROWS_AS(build_knn_graph(ID, 3), std::invalid_argument);
}
