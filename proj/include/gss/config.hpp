#pragma once

#include <cstdint>
#include <string>

namespace gss {

// All parameters of one sketch instance. m is the matrix side, fingerprints
// live in [0, F) with F = 2^fbits, each node gets an address sequence of
// length r, each edge probes k of the r*r mapped buckets, and every bucket
// holds l rooms. a/b/p drive the linear congruential sequences; p must stay
// above m so stored addresses can be recovered uniquely.
struct SketchConfig {
    uint32_t m = 1000;
    uint32_t fbits = 16;
    uint32_t r = 16;
    uint32_t k = 16;
    uint32_t l = 2;
    uint64_t lcg_a = 0;   // 0 -> chosen at resolve time
    uint64_t lcg_b = 0;
    uint64_t lcg_p = 0;
    uint64_t hash_seed = 0x9e3779b97f4a7c15ull;

    uint32_t fingerprint_range() const { return 1u << fbits; }
    uint64_t combined_range() const {
        return static_cast<uint64_t>(m) * fingerprint_range();
    }
};

// Validates bounds and fills in lcg_a/lcg_b/lcg_p when left at 0. The chosen
// constants are checked exhaustively: for every seed in [0, F) the first r
// LR values must be distinct. Throws std::invalid_argument when the config
// is unsatisfiable.
SketchConfig resolve(SketchConfig cfg);

// True once resolve() has run (or equivalent constants were supplied).
bool is_resolved(const SketchConfig& cfg);

std::string describe(const SketchConfig& cfg);

}  // namespace gss
