#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lltk/dense.hpp"

namespace lltk::topo {

struct Edge {
    std::size_t u = 0, v = 0;  // u < v
    bool operator==(const Edge&) const = default;
};

// Vertex-weighted graph with optional 3-clique fill. A simplex takes the
// maximum of its vertices' values; sorting by (value, dimension, vertex
// tuple) yields a valid filtration where every face precedes its cofaces.
struct FilteredComplex {
    std::vector<double> values;            // f(v) per vertex
    std::vector<Edge> edges;               // u < v, unique
    std::vector<std::array<std::size_t, 3>> triangles;  // u < v < w, unique

    std::size_t vertex_count() const { return values.size(); }
    double edge_value(const Edge& e) const { return std::max(values[e.u], values[e.v]); }
    double triangle_value(const std::array<std::size_t, 3>& t) const {
        return std::max(values[t[0]], std::max(values[t[1]], values[t[2]]));
    }
    // Maximum filtration value over all simplices (= max vertex value).
    double max_filtration_value() const;
};

// Undirected union of the directed k-nearest-neighbor relation: an edge is
// present iff u is among v's k nearest or v among u's. No self loops or
// duplicates; output sorted by (u, v).
std::vector<Edge> build_knn_graph(const DenseMatrix& ID, std::size_t k = 20);

// All 3-cliques of the graph, sorted by vertex triple.
std::vector<std::array<std::size_t, 3>> flag_fill_triangles(std::size_t n,
                                                            const std::vector<Edge>& edges);

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;
    bool essential = false;  // death reported at the max filtration value
};

struct PersistenceDiagram {
    int dimension = 0;
    std::vector<PersistencePair> pairs;
};

// Union-find over edges in filtration order with the elder rule: the merge
// kills the component whose (minimum vertex value, minimum vertex index) is
// larger. Every vertex births exactly one class; survivors are essential.
PersistenceDiagram persistence_h0(const FilteredComplex& fc);

// Boundary-matrix reduction over GF(2) restricted to edges/triangles. A
// cycle is born at the edge closing a loop and dies at the triangle whose
// column pairs with it; cycles never filled are essential.
PersistenceDiagram persistence_h1(const FilteredComplex& fc);

// Component and independent-cycle counts of the sublevel complex at the
// threshold (triangles participate if present).
std::pair<std::size_t, std::size_t> betti_at(const FilteredComplex& fc, double threshold);

enum class EssentialPolicy { cap, drop };

// sum (death - birth)^2; `cap` keeps essential pairs at their reported
// death, `drop` excludes them.
double total_persistence(const PersistenceDiagram& diagram, EssentialPolicy policy);

EssentialPolicy policy_from_string(const std::string& s);
const char* to_string(EssentialPolicy p);

// CSV with header dim,birth,death,essential; floats at 17 significant digits.
std::string diagrams_to_csv(const std::vector<PersistenceDiagram>& diagrams);
std::vector<PersistenceDiagram> diagrams_from_csv(const std::string& csv);

}  // namespace lltk::topo
