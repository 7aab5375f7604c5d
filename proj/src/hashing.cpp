#include "gss/hashing.hpp"

#include <cstring>

namespace gss {
namespace {

inline uint64_t rotl(uint64_t x, int s) { return (x << s) | (x >> (64 - s)); }

inline uint64_t mix(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
}

inline uint64_t load64(const char* p) {
    uint64_t v;
    std::memcpy(&v, p, sizeof(v));
    return v;
}

}  // namespace

// xxHash-style construction over 8-byte lanes with a keyed state. Not
// cryptographic; only determinism under seed and good dispersion matter here.
uint64_t hash64(std::string_view bytes, uint64_t seed) {
    const char* p = bytes.data();
    size_t n = bytes.size();
    uint64_t h = seed ^ (0x27d4eb2f165667c5ull + n * 0x9e3779b97f4a7c15ull);
    while (n >= 8) {
        h ^= mix(load64(p));
        h = rotl(h, 27) * 0x9e3779b97f4a7c15ull + 0x85ebca77c2b2ae63ull;
        p += 8;
        n -= 8;
    }
    uint64_t tail = 0;
    if (n > 0) std::memcpy(&tail, p, n);
    h ^= mix(tail + n);
    return mix(h);
}

NodeRef decompose(uint64_t combined, const SketchConfig& cfg) {
    const uint32_t F = cfg.fingerprint_range();
    NodeRef ref;
    ref.combined = combined;
    ref.fp = static_cast<uint32_t>(combined % F);
    ref.addr = static_cast<uint32_t>(combined / F);
    return ref;
}

NodeRef hash_node(std::string_view id, const SketchConfig& cfg) {
    const uint64_t raw = hash64(id, cfg.hash_seed);
    const uint32_t F = cfg.fingerprint_range();
    const uint32_t f = static_cast<uint32_t>(raw % F);
    const uint32_t h = static_cast<uint32_t>((raw / F) % cfg.m);
    NodeRef ref;
    ref.fp = f;
    ref.addr = h;
    ref.combined = static_cast<uint64_t>(h) * F + f;
    return ref;
}

std::vector<uint64_t> lr_sequence(uint64_t seed_val, const SketchConfig& cfg, uint32_t len) {
    std::vector<uint64_t> out(len);
    uint64_t q = (cfg.lcg_a * (seed_val % cfg.lcg_p) + cfg.lcg_b) % cfg.lcg_p;
    out[0] = q;
    for (uint32_t i = 1; i < len; ++i) {
        q = (cfg.lcg_a * q + cfg.lcg_b) % cfg.lcg_p;
        out[i] = q;
    }
    return out;
}

AddressSeq address_sequence(const NodeRef& node, const SketchConfig& cfg) {
    AddressSeq seq;
    seq.q = lr_sequence(node.fp, cfg, cfg.r);
    seq.addrs.resize(cfg.r);
    for (uint32_t i = 0; i < cfg.r; ++i)
        seq.addrs[i] = static_cast<uint32_t>((node.addr + seq.q[i]) % cfg.m);
    return seq;
}

uint64_t recover_hash(uint32_t fp, uint32_t idx, uint32_t pos, const SketchConfig& cfg) {
    const auto q = lr_sequence(fp, cfg, idx + 1);
    const uint64_t qi = q[idx] % cfg.m;
    const uint32_t h = static_cast<uint32_t>((pos + cfg.m - qi) % cfg.m);
    return static_cast<uint64_t>(h) * cfg.fingerprint_range() + fp;
}

CandidateSeq candidate_buckets(uint32_t fp_s, uint32_t fp_d, const SketchConfig& cfg) {
    CandidateSeq seq;
    seq.pairs.resize(cfg.k);
    const auto q = lr_sequence(static_cast<uint64_t>(fp_s) + fp_d, cfg, cfg.k);
    for (uint32_t i = 0; i < cfg.k; ++i) {
        seq.pairs[i] = {static_cast<uint8_t>((q[i] / cfg.r) % cfg.r),
                        static_cast<uint8_t>(q[i] % cfg.r)};
    }
    return seq;
}

uint64_t node_key(const NodeRef& node, const SketchConfig& cfg) {
    return static_cast<uint64_t>(node.addr) * cfg.fingerprint_range() + node.fp;
}

}  // namespace gss
