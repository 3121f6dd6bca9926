#pragma once

#include <string>
#include <vector>

#include "lltk/topo.hpp"

namespace lltk::svg {

enum class ColorBy { epoch, seed, loss, loss_log };

struct ScatterPoint {
    double x = 0.0, y = 0.0;
    double color_value = 0.0;  // epoch index, seed index, or loss
    bool highlighted = false;  // drawn as a diamond (jump-init markers)
};

// Standalone SVG 1.1 text; element order follows the input order, so output
// is deterministic apart from the single timestamp comment line.
std::string embedding_scatter(const std::vector<ScatterPoint>& points, ColorBy coloring,
                              const std::string& title);

// Birth/death markers above a diagonal reference line; essential pairs are
// open markers.
std::string persistence_diagram(const std::vector<topo::PersistenceDiagram>& diagrams,
                                const std::string& title);

struct PersScatterRow {
    double test_loss = 0.0;
    double total_persistence = 0.0;
    double weight_decay = 0.0;  // color key
};

std::string total_persistence_scatter(const std::vector<PersScatterRow>& rows,
                                      const std::string& title);

}  // namespace lltk::svg
