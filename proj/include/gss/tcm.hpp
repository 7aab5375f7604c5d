#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gss/stream.hpp"

namespace gss {

struct TcmConfig {
    uint32_t depth = 4;  // number of independent matrices
    uint32_t side = 1000;
    uint64_t hash_seed = 0x6a09e667f3bcc908ull;
};

struct TcmReachResult {
    bool reachable = false;
    size_t visited_count = 0;
};

// d independent hash-indexed side x side counter matrices; queries combine
// matrices by minimum (weights) or intersection (topology). Successor and
// precursor enumeration walk the known-node registry, since raw column
// indices cannot be inverted.
class TcmSketch {
public:
    explicit TcmSketch(TcmConfig cfg);

    const TcmConfig& config() const { return cfg_; }

    void insert(const StreamItem& item);

    // min over the d matrices; >= the true accumulated weight for
    // non-negative streams, 0 when nothing was ever hashed there.
    int64_t edge_weight(std::string_view s, std::string_view d) const;

    // min over the d matrices of the row sum for H_j(v).
    int64_t node_out_weight(std::string_view v) const;

    std::vector<std::string> successors(std::string_view v) const;
    std::vector<std::string> precursors(std::string_view v) const;

    TcmReachResult reachable(std::string_view s, std::string_view d) const;

    bool knows(std::string_view v) const;
    size_t node_count() const { return nodes_.size(); }
    size_t memory_bytes() const {
        return static_cast<size_t>(cfg_.depth) * cfg_.side * cfg_.side * sizeof(int64_t);
    }
    int64_t counter(uint32_t matrix, uint32_t row, uint32_t col) const;

private:
    uint32_t cell(uint32_t matrix, std::string_view id) const;
    bool edge_present(const std::vector<uint32_t>& s_cells,
                      const std::vector<uint32_t>& d_cells) const;
    uint32_t intern(std::string_view id);

    TcmConfig cfg_;
    std::vector<std::vector<int64_t>> counters_;  // one flat side*side grid per matrix
    std::vector<std::string> nodes_;              // registry, insertion order
    std::unordered_map<std::string, uint32_t> node_index_;
    std::vector<std::vector<uint32_t>> node_cells_;  // per node: H_j for each matrix
};

}  // namespace gss
