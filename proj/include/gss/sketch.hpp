#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gss/config.hpp"
#include "gss/hashing.hpp"
#include "gss/kernels.hpp"
#include "gss/stream.hpp"

namespace gss {

// Where an insert landed.
struct Placement {
    enum class Kind { MatrixRoom, MergedExisting, Buffer };
    Kind kind = Kind::Buffer;
    uint32_t row = 0;
    uint32_t col = 0;
    uint8_t room = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct BufferStats {
    size_t leftover_edges = 0;
    size_t total_edges = 0;  // occupied rooms + buffer entries
    double percentage = 0.0;
};

// A decoded room, mostly for tests and diagnostics.
struct RoomView {
    bool occupied = false;
    uint8_t index_src = 0;
    uint8_t index_dst = 0;
    uint16_t fp_src = 0;
    uint16_t fp_dst = 0;
    int64_t weight = 0;
};

// m x m buckets of l rooms each, stored bucket-major with split areas:
// occupancy byte, then all index pairs, then all fp pairs, then all weights.
class BucketMatrix {
public:
    BucketMatrix(uint32_t side, uint32_t rooms);

    uint32_t side() const { return side_; }
    uint32_t rooms() const { return rooms_; }
    size_t stride() const { return stride_; }
    size_t fp_offset() const { return fp_off_; }
    size_t bytes() const { return data_.size(); }
    size_t occupied_rooms() const { return occupied_; }

    kernels::RowView row_view(uint32_t row) const;
    RoomView room(uint32_t row, uint32_t col, uint32_t j) const;

    uint8_t occupancy(size_t bucket) const { return data_[bucket * stride_]; }
    uint8_t index_byte(size_t bucket, uint32_t j) const {
        return data_[bucket * stride_ + 1 + j];
    }
    uint32_t fp_pair(size_t bucket, uint32_t j) const;
    int64_t weight(size_t bucket, uint32_t j) const;

    void place(size_t bucket, uint32_t j, uint8_t index_pair, uint32_t fp_pair, int64_t w);
    void add_weight(size_t bucket, uint32_t j, int64_t w);

private:
    uint32_t side_;
    uint32_t rooms_;
    size_t stride_;
    size_t fp_off_;
    size_t w_off_;
    size_t occupied_ = 0;
    std::vector<uint8_t> data_;
};

// One successor/precursor group: a G_h node plus every original ID observed
// hashing to it.
struct NodeGroup {
    uint64_t hash = 0;
    std::vector<std::string> ids;

    friend bool operator==(const NodeGroup&, const NodeGroup&) = default;
};

class GssSketch {
public:
    explicit GssSketch(SketchConfig cfg);

    const SketchConfig& config() const { return cfg_; }
    const BucketMatrix& matrix() const { return matrix_; }

    Placement insert(const StreamItem& item);

    // Exact weight of edge (H(s), H(d)) in G_h, or nullopt when absent.
    std::optional<int64_t> edge_weight(std::string_view s, std::string_view d) const;
    std::optional<int64_t> edge_weight_refs(const NodeRef& s, const NodeRef& d) const;

    std::vector<NodeGroup> successors(std::string_view v) const;
    std::vector<NodeGroup> precursors(std::string_view v) const;

    // Out-edges of a G_h node: (destination H, weight), hash ascending.
    std::vector<std::pair<uint64_t, int64_t>> out_edges(const NodeRef& v) const;

    BufferStats buffer_stats() const;

    NodeRef node_ref(std::string_view id) const { return hash_node(id, cfg_); }
    bool known_hash(uint64_t combined) const;
    const std::vector<std::string>* ids_for(uint64_t combined) const;
    size_t distinct_hashed_nodes() const { return reverse_ids_.size(); }

    size_t memory_bytes() const { return matrix_.bytes(); }

private:
    struct Probe {
        bool found = false;
        bool has_empty = false;
        uint32_t row = 0, col = 0;
        uint8_t room = 0;
        size_t bucket = 0;
        uint8_t index_pair = 0;
    };

    Probe probe_candidates(const NodeRef& s, const NodeRef& d) const;
    void note_id(uint64_t combined, std::string_view id);
    std::vector<NodeGroup> resolve_groups(std::vector<uint64_t> hashes) const;

    SketchConfig cfg_;
    BucketMatrix matrix_;
    // Left-over edges, keyed by key(s) with per-source adjacency lists.
    std::unordered_map<uint64_t, std::vector<std::pair<uint64_t, int64_t>>> buffer_;
    size_t buffer_edges_ = 0;
    std::unordered_map<uint64_t, std::vector<std::string>> reverse_ids_;
};

}  // namespace gss
