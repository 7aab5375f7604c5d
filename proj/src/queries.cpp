#include "gss/queries.hpp"

#include <deque>
#include <unordered_set>

namespace gss {

int64_t node_out_weight(const GssSketch& sketch, std::string_view v) {
    int64_t total = 0;
    for (const auto& [h, w] : sketch.out_edges(sketch.node_ref(v))) total += w;
    return total;
}

ReachResult reachable(const GssSketch& sketch, std::string_view s, std::string_view d) {
    const SketchConfig& cfg = sketch.config();
    const NodeRef src = sketch.node_ref(s);
    const NodeRef dst = sketch.node_ref(d);

    ReachResult res;
    if (src.combined == dst.combined) {
        res.reachable = sketch.known_hash(src.combined);
        return res;
    }

    std::unordered_set<uint64_t> visited;
    std::deque<uint64_t> queue;
    queue.push_back(node_key(src, cfg));
    while (!queue.empty()) {
        const uint64_t key = queue.front();
        queue.pop_front();
        if (!visited.insert(key).second) continue;
        const NodeRef v = decompose(key, cfg);
        if (sketch.edge_weight_refs(v, dst).has_value()) {
            res.reachable = true;
            res.visited_count = visited.size();
            return res;
        }
        for (const auto& [next, w] : sketch.out_edges(v))
            if (!visited.count(next)) queue.push_back(next);
    }
    res.visited_count = visited.size();
    return res;
}

}  // namespace gss
