#include "gss/sketch.hpp"

#include <algorithm>
#include <cstring>

namespace gss {
namespace {

inline size_t align_up(size_t v, size_t a) { return (v + a - 1) & ~(a - 1); }

inline uint8_t pack_index(uint8_t i_src, uint8_t i_dst) {
    return static_cast<uint8_t>((i_src << 4) | i_dst);
}

inline uint32_t pack_fp(uint16_t fp_src, uint16_t fp_dst) {
    return (static_cast<uint32_t>(fp_src) << 16) | fp_dst;
}

}  // namespace

BucketMatrix::BucketMatrix(uint32_t side, uint32_t rooms) : side_(side), rooms_(rooms) {
    fp_off_ = align_up(1 + rooms_, 4);
    w_off_ = align_up(fp_off_ + 4ull * rooms_, 8);
    stride_ = align_up(w_off_ + 8ull * rooms_, 8);
    data_.assign(static_cast<size_t>(side_) * side_ * stride_, 0);
}

kernels::RowView BucketMatrix::row_view(uint32_t row) const {
    kernels::RowView v;
    v.base = data_.data() + static_cast<size_t>(row) * side_ * stride_;
    v.buckets = side_;
    v.rooms = rooms_;
    v.stride = stride_;
    v.fp_offset = fp_off_;
    return v;
}

uint32_t BucketMatrix::fp_pair(size_t bucket, uint32_t j) const {
    uint32_t v;
    std::memcpy(&v, data_.data() + bucket * stride_ + fp_off_ + 4 * j, sizeof(v));
    return v;
}

int64_t BucketMatrix::weight(size_t bucket, uint32_t j) const {
    int64_t v;
    std::memcpy(&v, data_.data() + bucket * stride_ + w_off_ + 8 * j, sizeof(v));
    return v;
}

void BucketMatrix::place(size_t bucket, uint32_t j, uint8_t index_pair, uint32_t fp_pair,
                         int64_t w) {
    uint8_t* b = data_.data() + bucket * stride_;
    b[0] |= static_cast<uint8_t>(1u << j);
    b[1 + j] = index_pair;
    std::memcpy(b + fp_off_ + 4 * j, &fp_pair, sizeof(fp_pair));
    std::memcpy(b + w_off_ + 8 * j, &w, sizeof(w));
    ++occupied_;
}

void BucketMatrix::add_weight(size_t bucket, uint32_t j, int64_t w) {
    uint8_t* p = data_.data() + bucket * stride_ + w_off_ + 8 * j;
    int64_t cur;
    std::memcpy(&cur, p, sizeof(cur));
    cur += w;
    std::memcpy(p, &cur, sizeof(cur));
}

RoomView BucketMatrix::room(uint32_t row, uint32_t col, uint32_t j) const {
    const size_t bucket = static_cast<size_t>(row) * side_ + col;
    RoomView v;
    v.occupied = (occupancy(bucket) >> j) & 1;
    if (!v.occupied) return v;
    const uint8_t ib = index_byte(bucket, j);
    const uint32_t fp = fp_pair(bucket, j);
    v.index_src = ib >> 4;
    v.index_dst = ib & 0xf;
    v.fp_src = static_cast<uint16_t>(fp >> 16);
    v.fp_dst = static_cast<uint16_t>(fp & 0xffff);
    v.weight = weight(bucket, j);
    return v;
}

GssSketch::GssSketch(SketchConfig cfg) : cfg_(resolve(std::move(cfg))), matrix_(cfg_.m, cfg_.l) {}

void GssSketch::note_id(uint64_t combined, std::string_view id) {
    auto& ids = reverse_ids_[combined];
    for (const auto& s : ids)
        if (s == id) return;
    ids.emplace_back(id);
}

// Walks the k candidate buckets in sequence order, skipping repeated index
// pairs. Stops at a room holding this edge, else at the first empty room.
// An empty room before a match proves the edge is in neither the matrix nor
// the buffer: rooms never free up, so the insert would have used it.
GssSketch::Probe GssSketch::probe_candidates(const NodeRef& s, const NodeRef& d) const {
    const AddressSeq as = address_sequence(s, cfg_);
    const AddressSeq ad = address_sequence(d, cfg_);
    const CandidateSeq cand = candidate_buckets(s.fp, d.fp, cfg_);
    const uint32_t fp = pack_fp(static_cast<uint16_t>(s.fp), static_cast<uint16_t>(d.fp));

    uint64_t seen[4] = {0, 0, 0, 0};
    Probe res;
    for (auto [is, id] : cand.pairs) {
        const uint32_t pair_bit = static_cast<uint32_t>(is) * cfg_.r + id;
        if (seen[pair_bit >> 6] & (1ull << (pair_bit & 63))) continue;
        seen[pair_bit >> 6] |= 1ull << (pair_bit & 63);

        const uint32_t row = as.addrs[is];
        const uint32_t col = ad.addrs[id];
        const size_t bucket = static_cast<size_t>(row) * cfg_.m + col;
        const uint8_t idx = pack_index(is, id);
        const uint8_t occ = matrix_.occupancy(bucket);
        for (uint32_t j = 0; j < cfg_.l; ++j) {
            if (!(occ & (1u << j))) {
                res.has_empty = true;
                res.row = row;
                res.col = col;
                res.room = static_cast<uint8_t>(j);
                res.bucket = bucket;
                res.index_pair = idx;
                return res;
            }
            if (matrix_.index_byte(bucket, j) == idx && matrix_.fp_pair(bucket, j) == fp) {
                res.found = true;
                res.row = row;
                res.col = col;
                res.room = static_cast<uint8_t>(j);
                res.bucket = bucket;
                return res;
            }
        }
    }
    return res;
}

Placement GssSketch::insert(const StreamItem& item) {
    const NodeRef s = hash_node(item.src, cfg_);
    const NodeRef d = hash_node(item.dst, cfg_);
    note_id(s.combined, item.src);
    note_id(d.combined, item.dst);

    const Probe probe = probe_candidates(s, d);
    if (probe.found) {
        matrix_.add_weight(probe.bucket, probe.room, item.weight);
        return {Placement::Kind::MergedExisting, probe.row, probe.col, probe.room};
    }
    if (probe.has_empty) {
        matrix_.place(probe.bucket, probe.room, probe.index_pair,
                      pack_fp(static_cast<uint16_t>(s.fp), static_cast<uint16_t>(d.fp)),
                      item.weight);
        return {Placement::Kind::MatrixRoom, probe.row, probe.col, probe.room};
    }

    const uint64_t ks = node_key(s, cfg_);
    const uint64_t kd = node_key(d, cfg_);
    auto& list = buffer_[ks];
    for (auto& [dst, w] : list) {
        if (dst == kd) {
            w += item.weight;
            return {Placement::Kind::Buffer, 0, 0, 0};
        }
    }
    list.emplace_back(kd, item.weight);
    ++buffer_edges_;
    return {Placement::Kind::Buffer, 0, 0, 0};
}

std::optional<int64_t> GssSketch::edge_weight_refs(const NodeRef& s, const NodeRef& d) const {
    const Probe probe = probe_candidates(s, d);
    if (probe.found) return matrix_.weight(probe.bucket, probe.room);
    if (probe.has_empty) return std::nullopt;
    const auto it = buffer_.find(node_key(s, cfg_));
    if (it != buffer_.end()) {
        const uint64_t kd = node_key(d, cfg_);
        for (const auto& [dst, w] : it->second)
            if (dst == kd) return w;
    }
    return std::nullopt;
}

std::optional<int64_t> GssSketch::edge_weight(std::string_view s, std::string_view d) const {
    return edge_weight_refs(hash_node(s, cfg_), hash_node(d, cfg_));
}

std::vector<std::pair<uint64_t, int64_t>> GssSketch::out_edges(const NodeRef& v) const {
    std::vector<std::pair<uint64_t, int64_t>> out;
    const AddressSeq seq = address_sequence(v, cfg_);
    std::vector<kernels::RowMatch> matches;
    for (uint32_t i = 0; i < cfg_.r; ++i) {
        const uint32_t row = seq.addrs[i];
        matches.clear();
        kernels::scan_row_source(matrix_.row_view(row), static_cast<uint16_t>(v.fp),
                                 static_cast<uint8_t>(i), matches);
        for (const auto& m : matches) {
            const size_t bucket = static_cast<size_t>(row) * cfg_.m + m.col;
            const uint32_t fp = matrix_.fp_pair(bucket, m.room);
            const uint8_t idx = matrix_.index_byte(bucket, m.room);
            const uint64_t dest = recover_hash(fp & 0xffff, idx & 0xf, m.col, cfg_);
            out.emplace_back(dest, matrix_.weight(bucket, m.room));
        }
    }
    const auto it = buffer_.find(node_key(v, cfg_));
    if (it != buffer_.end())
        for (const auto& [kd, w] : it->second) out.emplace_back(kd, w);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeGroup> GssSketch::resolve_groups(std::vector<uint64_t> hashes) const {
    std::sort(hashes.begin(), hashes.end());
    hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
    std::vector<NodeGroup> groups;
    groups.reserve(hashes.size());
    for (uint64_t h : hashes) {
        NodeGroup g;
        g.hash = h;
        if (const auto* ids = ids_for(h)) g.ids = *ids;
        groups.push_back(std::move(g));
    }
    return groups;
}

std::vector<NodeGroup> GssSketch::successors(std::string_view v) const {
    const NodeRef ref = hash_node(v, cfg_);
    std::vector<uint64_t> hashes;
    for (const auto& [h, w] : out_edges(ref)) hashes.push_back(h);
    return resolve_groups(std::move(hashes));
}

std::vector<NodeGroup> GssSketch::precursors(std::string_view v) const {
    const NodeRef ref = hash_node(v, cfg_);
    const AddressSeq seq = address_sequence(ref, cfg_);
    std::vector<uint64_t> hashes;
    for (uint32_t i = 0; i < cfg_.r; ++i) {
        const uint32_t col = seq.addrs[i];
        for (uint32_t row = 0; row < cfg_.m; ++row) {
            const size_t bucket = static_cast<size_t>(row) * cfg_.m + col;
            const uint8_t occ = matrix_.occupancy(bucket);
            if (!occ) continue;
            for (uint32_t j = 0; j < cfg_.l; ++j) {
                if (!(occ & (1u << j))) continue;
                const uint8_t idx = matrix_.index_byte(bucket, j);
                if ((idx & 0xf) != i) continue;
                const uint32_t fp = matrix_.fp_pair(bucket, j);
                if ((fp & 0xffff) != ref.fp) continue;
                hashes.push_back(recover_hash(fp >> 16, idx >> 4, row, cfg_));
            }
        }
    }
    const uint64_t kv = node_key(ref, cfg_);
    for (const auto& [ks, list] : buffer_)
        for (const auto& [kd, w] : list)
            if (kd == kv) hashes.push_back(ks);
    return resolve_groups(std::move(hashes));
}

BufferStats GssSketch::buffer_stats() const {
    BufferStats st;
    st.leftover_edges = buffer_edges_;
    st.total_edges = matrix_.occupied_rooms() + buffer_edges_;
    st.percentage =
        st.total_edges == 0 ? 0.0 : static_cast<double>(st.leftover_edges) / st.total_edges;
    return st;
}

bool GssSketch::known_hash(uint64_t combined) const {
    return reverse_ids_.find(combined) != reverse_ids_.end();
}

const std::vector<std::string>* GssSketch::ids_for(uint64_t combined) const {
    const auto it = reverse_ids_.find(combined);
    return it == reverse_ids_.end() ? nullptr : &it->second;
}

}  // namespace gss
