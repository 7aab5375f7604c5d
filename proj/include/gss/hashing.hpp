#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "gss/config.hpp"

namespace gss {

// A node as the sketch sees it: combined hash H in [0, m*F), matrix address
// h = H / F and fingerprint f = H % F.
struct NodeRef {
    uint64_t combined = 0;   // H
    uint32_t addr = 0;       // h
    uint32_t fp = 0;         // f

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// LR values q_i and the derived matrix addresses h_i = (h + q_i) % m.
struct AddressSeq {
    std::vector<uint64_t> q;
    std::vector<uint32_t> addrs;
};

// Index pairs (i, j) into the two address sequences, one per candidate bucket.
struct CandidateSeq {
    std::vector<std::pair<uint8_t, uint8_t>> pairs;
};

// Keyed 64-bit hash of an arbitrary byte string. Deterministic under seed.
uint64_t hash64(std::string_view bytes, uint64_t seed);

// H(v) reduced into [0, m*F): f = H64 % F, h = (H64 / F) % m, H = h*F + f.
NodeRef hash_node(std::string_view id, const SketchConfig& cfg);

// NodeRef for an already-reduced combined hash in [0, m*F).
NodeRef decompose(uint64_t combined, const SketchConfig& cfg);

// q_1 = (a*seed + b) % p, q_i = (a*q_{i-1} + b) % p.
std::vector<uint64_t> lr_sequence(uint64_t seed_val, const SketchConfig& cfg, uint32_t len);

AddressSeq address_sequence(const NodeRef& node, const SketchConfig& cfg);

// Reverses one address-sequence step: given a stored fingerprint, the index
// of the sequence element that produced the bucket and the bucket coordinate,
// returns the unique combined hash H (unique because h < m <= p).
uint64_t recover_hash(uint32_t fp, uint32_t idx, uint32_t pos, const SketchConfig& cfg);

// The k candidate buckets of an edge, as index pairs into the endpoint
// address sequences. seed(e) = f(s) + f(d), reduced inside the first LR step.
CandidateSeq candidate_buckets(uint32_t fp_s, uint32_t fp_d, const SketchConfig& cfg);

// key(v) = h*F + f, i.e. H itself.
uint64_t node_key(const NodeRef& node, const SketchConfig& cfg);

}  // namespace gss
