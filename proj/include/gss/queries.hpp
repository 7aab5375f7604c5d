#pragma once

#include <string_view>

#include "gss/sketch.hpp"

namespace gss {

struct ReachResult {
    bool reachable = false;
    size_t visited_count = 0;  // distinct G_h keys explored
};

// Total out-weight of H(v) in G_h: matrix row matches plus buffer entries.
int64_t node_out_weight(const GssSketch& sketch, std::string_view v);

// BFS over G_h keys. Per step the edge (v, d) is probed directly from the
// recovered (h, f) of v, then v's successors are recovered from the r rows
// and the buffer. s == d answers true when the node was ever inserted.
// No false negatives with respect to the original stream graph.
ReachResult reachable(const GssSketch& sketch, std::string_view s, std::string_view d);

}  // namespace gss
