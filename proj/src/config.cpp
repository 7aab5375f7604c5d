#include "gss/config.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gss {
namespace {

constexpr uint64_t kMaxSide = 1u << 24;
constexpr uint64_t kMaxPrime = 1ull << 31;

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint64_t next_prime(uint64_t n) {
    uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

// Candidate multiplier/increment pairs, tried in order against the chosen
// modulus. Values above p are reduced first.
constexpr std::array<std::pair<uint64_t, uint64_t>, 12> kLcgTable = {{
    {2, 3},  {3, 5},  {5, 3},   {7, 11},  {6, 7},   {13, 17},
    {17, 23}, {11, 13}, {19, 7}, {23, 29}, {29, 31}, {31, 37},
}};

// Every seed in [0, F) must yield r distinct LR values.
bool lcg_valid(uint64_t a, uint64_t b, uint64_t p, uint32_t fp_range, uint32_t r) {
    if (p < r) return false;  // fewer residues than required distinct values
    std::vector<uint64_t> vals(r);
    for (uint64_t seed = 0; seed < fp_range; ++seed) {
        uint64_t q = (a * seed + b) % p;
        vals[0] = q;
        for (uint32_t i = 1; i < r; ++i) {
            q = (a * q + b) % p;
            vals[i] = q;
        }
        for (uint32_t i = 1; i < r; ++i)
            for (uint32_t j = 0; j < i; ++j)
                if (vals[i] == vals[j]) return false;
    }
    return true;
}

}  // namespace

bool is_resolved(const SketchConfig& cfg) {
    return cfg.lcg_p != 0 && cfg.lcg_a != 0;
}

SketchConfig resolve(SketchConfig cfg) {
    if (cfg.m < 1 || cfg.m > kMaxSide)
        throw std::invalid_argument("matrix side m must be in [1, 2^24]");
    if (cfg.fbits < 1 || cfg.fbits > 16)
        throw std::invalid_argument("fingerprint bits must be in [1, 16]");
    if (cfg.r < 1 || cfg.r > 16)
        throw std::invalid_argument("address sequence length r must be in [1, 16]");
    if (cfg.k < 1 || cfg.k > cfg.r * cfg.r)
        throw std::invalid_argument("candidate count k must be in [1, r*r]");
    if (cfg.l < 1 || cfg.l > 8)
        throw std::invalid_argument("rooms per bucket l must be in [1, 8]");

    const uint32_t F = cfg.fingerprint_range();

    if (cfg.lcg_p == 0 && (cfg.lcg_a != 0 || cfg.lcg_b != 0))
        throw std::invalid_argument("explicit LCG constants require a, b and p together");

    if (cfg.lcg_p != 0) {
        if (cfg.lcg_p <= cfg.m)
            throw std::invalid_argument("LCG modulus p must exceed m");
        if (cfg.lcg_p >= kMaxPrime)
            throw std::invalid_argument("LCG modulus p must be below 2^31");
        if (cfg.lcg_a == 0 || cfg.lcg_b == 0)
            throw std::invalid_argument("explicit p requires explicit a and b");
        uint64_t a = cfg.lcg_a % cfg.lcg_p;
        uint64_t b = cfg.lcg_b % cfg.lcg_p;
        if (a < 2 || b < 1)
            throw std::invalid_argument("LCG multiplier/increment degenerate after reduction");
        if (!lcg_valid(a, b, cfg.lcg_p, F, cfg.r))
            throw std::invalid_argument(
                "LCG constants repeat within the first r values for some seed");
        cfg.lcg_a = a;
        cfg.lcg_b = b;
        return cfg;
    }

    // Start at the smallest prime above max(m, F); if no table entry works,
    // move to the next prime. Small p simply cannot host r distinct values.
    uint64_t p = next_prime(std::max<uint64_t>(cfg.m, F));
    for (int attempt = 0; attempt < 16; ++attempt, p = next_prime(p)) {
        if (p >= kMaxPrime) break;
        for (auto [ca, cb] : kLcgTable) {
            uint64_t a = ca % p;
            uint64_t b = cb % p;
            if (a < 2 || b < 1) continue;
            if (lcg_valid(a, b, p, F, cfg.r)) {
                cfg.lcg_a = a;
                cfg.lcg_b = b;
                cfg.lcg_p = p;
                return cfg;
            }
        }
    }
    throw std::invalid_argument("no valid LCG constants found for this configuration");
}

std::string describe(const SketchConfig& cfg) {
    std::ostringstream os;
    os << "m=" << cfg.m << " F=2^" << cfg.fbits << " r=" << cfg.r << " k=" << cfg.k
       << " l=" << cfg.l << " lcg=(" << cfg.lcg_a << "," << cfg.lcg_b << "," << cfg.lcg_p
       << ")";
    return os.str();
}

}  // namespace gss
