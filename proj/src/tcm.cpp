#include "gss/tcm.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "gss/hashing.hpp"

namespace gss {

TcmSketch::TcmSketch(TcmConfig cfg) : cfg_(cfg) {
    if (cfg_.depth < 1) throw std::invalid_argument("TCM depth must be >= 1");
    if (cfg_.side < 1) throw std::invalid_argument("TCM side must be >= 1");
    counters_.assign(cfg_.depth,
                     std::vector<int64_t>(static_cast<size_t>(cfg_.side) * cfg_.side, 0));
}

uint32_t TcmSketch::cell(uint32_t matrix, std::string_view id) const {
    // Per-matrix seed: mix the matrix index into the base seed.
    const uint64_t seed = cfg_.hash_seed + 0x9e3779b97f4a7c15ull * (matrix + 1);
    return static_cast<uint32_t>(hash64(id, seed) % cfg_.side);
}

uint32_t TcmSketch::intern(std::string_view id) {
    const auto it = node_index_.find(std::string(id));
    if (it != node_index_.end()) return it->second;
    const uint32_t idx = static_cast<uint32_t>(nodes_.size());
    nodes_.emplace_back(id);
    node_index_.emplace(nodes_.back(), idx);
    std::vector<uint32_t> cells(cfg_.depth);
    for (uint32_t j = 0; j < cfg_.depth; ++j) cells[j] = cell(j, id);
    node_cells_.push_back(std::move(cells));
    return idx;
}

void TcmSketch::insert(const StreamItem& item) {
    const uint32_t s = intern(item.src);
    const uint32_t d = intern(item.dst);
    for (uint32_t j = 0; j < cfg_.depth; ++j) {
        auto& grid = counters_[j];
        grid[static_cast<size_t>(node_cells_[s][j]) * cfg_.side + node_cells_[d][j]] +=
            item.weight;
    }
}

int64_t TcmSketch::edge_weight(std::string_view s, std::string_view d) const {
    int64_t best = 0;
    for (uint32_t j = 0; j < cfg_.depth; ++j) {
        const int64_t v =
            counters_[j][static_cast<size_t>(cell(j, s)) * cfg_.side + cell(j, d)];
        if (j == 0 || v < best) best = v;
    }
    return best;
}

int64_t TcmSketch::node_out_weight(std::string_view v) const {
    int64_t best = 0;
    for (uint32_t j = 0; j < cfg_.depth; ++j) {
        const size_t row = static_cast<size_t>(cell(j, v)) * cfg_.side;
        int64_t sum = 0;
        for (uint32_t c = 0; c < cfg_.side; ++c) sum += counters_[j][row + c];
        if (j == 0 || sum < best) best = sum;
    }
    return best;
}

bool TcmSketch::edge_present(const std::vector<uint32_t>& s_cells,
                             const std::vector<uint32_t>& d_cells) const {
    for (uint32_t j = 0; j < cfg_.depth; ++j) {
        if (counters_[j][static_cast<size_t>(s_cells[j]) * cfg_.side + d_cells[j]] <= 0)
            return false;
    }
    return true;
}

std::vector<std::string> TcmSketch::successors(std::string_view v) const {
    std::vector<std::string> out;
    const auto it = node_index_.find(std::string(v));
    if (it == node_index_.end()) return out;
    const auto& sc = node_cells_[it->second];
    for (size_t y = 0; y < nodes_.size(); ++y)
        if (edge_present(sc, node_cells_[y])) out.push_back(nodes_[y]);
    return out;
}

std::vector<std::string> TcmSketch::precursors(std::string_view v) const {
    std::vector<std::string> out;
    const auto it = node_index_.find(std::string(v));
    if (it == node_index_.end()) return out;
    const auto& dc = node_cells_[it->second];
    for (size_t y = 0; y < nodes_.size(); ++y)
        if (edge_present(node_cells_[y], dc)) out.push_back(nodes_[y]);
    return out;
}

TcmReachResult TcmSketch::reachable(std::string_view s, std::string_view d) const {
    TcmReachResult res;
    const auto si = node_index_.find(std::string(s));
    const auto di = node_index_.find(std::string(d));
    if (si == node_index_.end()) return res;
    if (s == d) {
        res.reachable = true;
        return res;
    }

    std::vector<uint32_t> d_cells;
    if (di != node_index_.end()) {
        d_cells = node_cells_[di->second];
    } else {
        d_cells.resize(cfg_.depth);
        for (uint32_t j = 0; j < cfg_.depth; ++j) d_cells[j] = cell(j, d);
    }

    std::vector<uint8_t> visited(nodes_.size(), 0);
    std::deque<uint32_t> queue;
    visited[si->second] = 1;
    queue.push_back(si->second);
    while (!queue.empty()) {
        const uint32_t u = queue.front();
        queue.pop_front();
        ++res.visited_count;
        const auto& uc = node_cells_[u];
        if (edge_present(uc, d_cells)) {
            res.reachable = true;
            return res;
        }
        for (uint32_t y = 0; y < nodes_.size(); ++y) {
            if (!visited[y] && edge_present(uc, node_cells_[y])) {
                visited[y] = 1;
                queue.push_back(y);
            }
        }
    }
    return res;
}

bool TcmSketch::knows(std::string_view v) const {
    return node_index_.find(std::string(v)) != node_index_.end();
}

int64_t TcmSketch::counter(uint32_t matrix, uint32_t row, uint32_t col) const {
    return counters_[matrix][static_cast<size_t>(row) * cfg_.side + col];
}

}  // namespace gss
