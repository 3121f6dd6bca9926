#include "lltk/topo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lltk/io.hpp"
#include "lltk/knn.hpp"

namespace lltk::topo {

double FilteredComplex::max_filtration_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    return m;
}

std::vector<Edge> build_knn_graph(const DenseMatrix& ID, std::size_t k) {
    const std::size_t n = ID.rows;
    if (k >= n) throw std::invalid_argument("build_knn_graph: k must be smaller than n");
    const NeighborList nl = knn(ID, k);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            const std::size_t j = nl.row(i)[r].first;
            seen.emplace(std::min<std::size_t>(i, j), std::max<std::size_t>(i, j));
        }
    }
    std::vector<Edge> edges;
    edges.reserve(seen.size());
    for (const auto& [u, v] : seen) edges.push_back({u, v});
    return edges;
}

std::vector<std::array<std::size_t, 3>> flag_fill_triangles(std::size_t n,
                                                            const std::vector<Edge>& edges) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge& e : edges) {
        if (e.v >= n || e.u >= e.v) throw std::invalid_argument("flag_fill_triangles: bad edge");
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<std::array<std::size_t, 3>> tris;
    for (const Edge& e : edges) {
        // common neighbors w > v close triangle (u, v, w) exactly once
        const auto& au = adj[e.u];
        const auto& av = adj[e.v];
        std::size_t x = 0, y = 0;
        while (x < au.size() && y < av.size()) {
            if (au[x] < av[y]) {
                ++x;
            } else if (au[x] > av[y]) {
                ++y;
            } else {
                if (au[x] > e.v) tris.push_back({e.u, e.v, au[x]});
                ++x;
                ++y;
            }
        }
    }
    std::sort(tris.begin(), tris.end());
    return tris;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
};

// Filtration order over edges: (value, vertex pair).
std::vector<std::size_t> sorted_edge_order(const FilteredComplex& fc) {
    std::vector<std::size_t> order(fc.edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = fc.edge_value(fc.edges[a]);
        const double vb = fc.edge_value(fc.edges[b]);
        if (va != vb) return va < vb;
        if (fc.edges[a].u != fc.edges[b].u) return fc.edges[a].u < fc.edges[b].u;
        return fc.edges[a].v < fc.edges[b].v;
    });
    return order;
}

// Sorted (packed vertex pair -> edge index) lookup; works for any edge
// ordering in the complex.
struct EdgeLookup {
    std::vector<std::pair<std::uint64_t, std::size_t>> table;
    explicit EdgeLookup(const std::vector<Edge>& edges) {
        table.reserve(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i)
            table.emplace_back((static_cast<std::uint64_t>(edges[i].u) << 32) | edges[i].v, i);
        std::sort(table.begin(), table.end());
    }
    std::size_t at(std::size_t u, std::size_t v) const {
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        const auto it = std::lower_bound(table.begin(), table.end(),
                                         std::make_pair(key, std::size_t{0}));
        if (it == table.end() || it->first != key)
            throw std::invalid_argument("filtered complex: triangle face missing from edge list");
        return it->second;
    }
};

// Runs the H0 union-find pass; emits finite pairs into `diagram` (if given)
// and returns, per edge index, whether the edge closed a cycle.
std::vector<bool> h0_scan(const FilteredComplex& fc, PersistenceDiagram* diagram) {
    const std::size_t n = fc.vertex_count();
    UnionFind uf(n);
    // Per-root representative: the vertex minimizing (value, index).
    std::vector<std::size_t> rep(n);
    std::iota(rep.begin(), rep.end(), std::size_t{0});

    auto older = [&](std::size_t a, std::size_t b) {
        if (fc.values[a] != fc.values[b]) return fc.values[a] < fc.values[b];
        return a < b;
    };

    std::vector<bool> closes_cycle(fc.edges.size(), false);
    for (std::size_t ei : sorted_edge_order(fc)) {
        const Edge& e = fc.edges[ei];
        std::size_t ru = uf.find(e.u), rv = uf.find(e.v);
        if (ru == rv) {
            closes_cycle[ei] = true;
            continue;
        }
        std::size_t keep = ru, die = rv;
        if (older(rep[rv], rep[ru])) std::swap(keep, die);
        if (diagram)
            diagram->pairs.push_back({fc.values[rep[die]], fc.edge_value(e), false});
        uf.parent[die] = keep;
        if (older(rep[die], rep[keep])) rep[keep] = rep[die];
    }

    if (diagram) {
        const double cap = fc.max_filtration_value();
        std::vector<std::size_t> roots;
        for (std::size_t v = 0; v < n; ++v)
            if (uf.find(v) == v) roots.push_back(v);
        for (std::size_t r : roots) diagram->pairs.push_back({fc.values[rep[r]], cap, true});
    }
    return closes_cycle;
}

}  // namespace

PersistenceDiagram persistence_h0(const FilteredComplex& fc) {
    PersistenceDiagram d;
    d.dimension = 0;
    h0_scan(fc, &d);
    std::sort(d.pairs.begin(), d.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        if (a.death != b.death) return a.death < b.death;
        return a.essential < b.essential;
    });
    return d;
}

PersistenceDiagram persistence_h1(const FilteredComplex& fc) {
    PersistenceDiagram d;
    d.dimension = 1;

    const std::vector<bool> closes_cycle = h0_scan(fc, nullptr);
    const std::vector<std::size_t> edge_order = sorted_edge_order(fc);
    // Position of each edge in the filtration; rows of the triangle
    // boundary matrix are indexed by these positions.
    std::vector<std::size_t> edge_pos(fc.edges.size());
    for (std::size_t p = 0; p < edge_order.size(); ++p) edge_pos[edge_order[p]] = p;

    const EdgeLookup lookup(fc.edges);
    auto edge_index = [&](std::size_t u, std::size_t v) { return lookup.at(u, v); };

    std::vector<std::size_t> tri_order(fc.triangles.size());
    std::iota(tri_order.begin(), tri_order.end(), std::size_t{0});
    std::sort(tri_order.begin(), tri_order.end(), [&](std::size_t a, std::size_t b) {
        const double va = fc.triangle_value(fc.triangles[a]);
        const double vb = fc.triangle_value(fc.triangles[b]);
        if (va != vb) return va < vb;
        return fc.triangles[a] < fc.triangles[b];
    });

    // Standard column reduction of the triangle boundary matrix. Columns
    // hold edge positions, kept sorted ascending; the pivot is the back.
    std::vector<std::size_t> pivot_col(fc.edges.size(), SIZE_MAX);
    std::vector<std::vector<std::size_t>> reduced;
    reduced.reserve(fc.triangles.size());
    std::vector<bool> edge_paired(fc.edges.size(), false);

    for (std::size_t ti : tri_order) {
        const auto& t = fc.triangles[ti];
        std::vector<std::size_t> col = {edge_pos[edge_index(t[0], t[1])],
                                        edge_pos[edge_index(t[0], t[2])],
                                        edge_pos[edge_index(t[1], t[2])]};
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const std::size_t low = col.back();
            const std::size_t other = pivot_col[low];
            if (other == SIZE_MAX) break;
            // symmetric difference with the column owning this pivot
            std::vector<std::size_t> merged;
            merged.reserve(col.size() + reduced[other].size());
            std::set_symmetric_difference(col.begin(), col.end(), reduced[other].begin(),
                                          reduced[other].end(), std::back_inserter(merged));
            col = std::move(merged);
        }
        if (!col.empty()) {
            const std::size_t low = col.back();
            const std::size_t creator_edge = edge_order[low];
            d.pairs.push_back(
                {fc.edge_value(fc.edges[creator_edge]), fc.triangle_value(t), false});
            edge_paired[creator_edge] = true;
            pivot_col[low] = reduced.size();
        }
        reduced.push_back(std::move(col));
    }

    const double cap = fc.max_filtration_value();
    for (std::size_t ei = 0; ei < fc.edges.size(); ++ei)
        if (closes_cycle[ei] && !edge_paired[ei])
            d.pairs.push_back({fc.edge_value(fc.edges[ei]), cap, true});

    std::sort(d.pairs.begin(), d.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        if (a.death != b.death) return a.death < b.death;
        return a.essential < b.essential;
    });
    return d;
}

std::pair<std::size_t, std::size_t> betti_at(const FilteredComplex& fc, double threshold) {
    const std::size_t n = fc.vertex_count();
    std::size_t nv = 0;
    for (double v : fc.values)
        if (v <= threshold) ++nv;
    if (nv == 0) return {0, 0};

    UnionFind uf(n);
    std::size_t ne = 0;
    for (const Edge& e : fc.edges) {
        if (fc.edge_value(e) > threshold) continue;
        ++ne;
        const std::size_t ru = uf.find(e.u), rv = uf.find(e.v);
        if (ru != rv) uf.parent[ru] = rv;
    }
    std::size_t b0 = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (fc.values[v] <= threshold && uf.find(v) == v) ++b0;

    // beta1 = |E| - |V| + beta0 - rank2(triangle boundary) on the sublevel.
    std::vector<std::size_t> live_pos(fc.edges.size(), SIZE_MAX);
    std::size_t pos = 0;
    for (std::size_t ei = 0; ei < fc.edges.size(); ++ei)
        if (fc.edge_value(fc.edges[ei]) <= threshold) live_pos[ei] = pos++;

    const EdgeLookup lookup(fc.edges);
    auto edge_index = [&](std::size_t u, std::size_t v) { return lookup.at(u, v); };

    std::vector<std::vector<std::size_t>> cols;
    for (const auto& t : fc.triangles) {
        if (fc.triangle_value(t) > threshold) continue;
        std::vector<std::size_t> col = {live_pos[edge_index(t[0], t[1])],
                                        live_pos[edge_index(t[0], t[2])],
                                        live_pos[edge_index(t[1], t[2])]};
        std::sort(col.begin(), col.end());
        cols.push_back(std::move(col));
    }
    std::vector<std::size_t> pivot_col(ne, SIZE_MAX);
    std::size_t rank = 0;
    for (auto& col : cols) {
        while (!col.empty() && pivot_col[col.back()] != SIZE_MAX) {
            std::vector<std::size_t> merged;
            const auto& other = cols[pivot_col[col.back()]];
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(merged));
            col = std::move(merged);
        }
        if (!col.empty()) {
            pivot_col[col.back()] = static_cast<std::size_t>(&col - cols.data());
            ++rank;
        }
    }
    const std::size_t b1 = ne + b0 - nv - rank;
    return {b0, b1};
}

double total_persistence(const PersistenceDiagram& diagram, EssentialPolicy policy) {
    double s = 0.0;
    for (const PersistencePair& p : diagram.pairs) {
        if (p.essential && policy == EssentialPolicy::drop) continue;
        const double d = p.death - p.birth;
        s += d * d;
    }
    return s;
}

EssentialPolicy policy_from_string(const std::string& s) {
    if (s == "cap") return EssentialPolicy::cap;
    if (s == "drop") return EssentialPolicy::drop;
    throw std::invalid_argument("unknown essential policy '" + s + "' (expected cap|drop)");
}

const char* to_string(EssentialPolicy p) {
    return p == EssentialPolicy::cap ? "cap" : "drop";
}

std::string diagrams_to_csv(const std::vector<PersistenceDiagram>& diagrams) {
    std::string out = "dim,birth,death,essential\n";
    for (const auto& d : diagrams) {
        for (const auto& p : d.pairs) {
            out += std::to_string(d.dimension);
            out += ',';
            out += io::format_double(p.birth);
            out += ',';
            out += io::format_double(p.death);
            out += ',';
            out += p.essential ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::vector<PersistenceDiagram> diagrams_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "dim,birth,death,essential")
        throw std::invalid_argument("diagram csv: bad header");
    PersistenceDiagram d0{0, {}}, d1{1, {}};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string dim, birth, death, ess;
        if (!std::getline(ls, dim, ',') || !std::getline(ls, birth, ',') ||
            !std::getline(ls, death, ',') || !std::getline(ls, ess))
            throw std::invalid_argument("diagram csv: bad row '" + line + "'");
        PersistencePair p{std::stod(birth), std::stod(death), ess == "1"};
        if (dim == "0")
            d0.pairs.push_back(p);
        else if (dim == "1")
            d1.pairs.push_back(p);
        else
            throw std::invalid_argument("diagram csv: bad dimension '" + dim + "'");
    }
    return {d0, d1};
}

}  // namespace lltk::topo
