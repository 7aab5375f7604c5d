#include "gss/stream.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace gss {
namespace {

bool parse_i64(std::string_view tok, int64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
}

bool parse_u64(std::string_view tok, uint64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
}

// One "src dst [weight] [timestamp]" line; returns false for blank/comment.
bool parse_line(std::string_view line, size_t lineno, StreamItem& item) {
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    std::string_view toks[5];
    size_t ntok = 0;
    size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        if (ntok == 5) throw ParseError("too many fields", lineno);
        toks[ntok++] = line.substr(pos, end - pos);
        pos = end;
    }
    if (ntok == 0) return false;
    if (ntok == 1) throw ParseError("expected 'src dst [weight] [timestamp]'", lineno);
    if (ntok > 4) throw ParseError("too many fields", lineno);

    item.src = std::string(toks[0]);
    item.dst = std::string(toks[1]);
    item.weight = 1;
    item.time = lineno;
    if (ntok >= 3 && !parse_i64(toks[2], item.weight))
        throw ParseError("bad weight '" + std::string(toks[2]) + "'", lineno);
    if (ntok == 4 && !parse_u64(toks[3], item.time))
        throw ParseError("bad timestamp '" + std::string(toks[3]) + "'", lineno);
    return true;
}

std::vector<StreamItem> parse_gz(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<StreamItem> items;
    std::string line;
    char buf[1 << 16];
    size_t lineno = 0;
    bool pending = false;
    auto flush_line = [&]() {
        ++lineno;
        StreamItem item;
        if (parse_line(line, lineno, item)) items.push_back(std::move(item));
        line.clear();
    };
    while (gzgets(f, buf, sizeof(buf)) != nullptr) {
        line.append(buf);
        pending = true;
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            flush_line();
            pending = false;
        }
    }
    const bool truncated = !gzeof(f);
    gzclose(f);
    if (truncated) throw std::runtime_error("gzip read error in " + path);
    if (pending) flush_line();
    return items;
}

}  // namespace

std::vector<StreamItem> parse_stream_text(std::istream& in) {
    std::vector<StreamItem> items;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        StreamItem item;
        if (parse_line(line, lineno, item)) items.push_back(std::move(item));
    }
    return items;
}

std::vector<StreamItem> parse_stream(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) return parse_gz(path);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_stream_text(in);
}

void serialize_stream(const std::vector<StreamItem>& items, std::ostream& out) {
    for (const auto& it : items)
        out << it.src << ' ' << it.dst << ' ' << it.weight << ' ' << it.time << '\n';
}

namespace {

// Inverse-CDF sampling over a precomputed rank table keeps streams
// bit-reproducible for a fixed seed.
class RankSampler {
public:
    RankSampler(uint64_t n, double exponent) : cdf_(n) {
        long double acc = 0;
        for (uint64_t i = 0; i < n; ++i) {
            acc += std::pow(static_cast<long double>(i + 1), -exponent);
            cdf_[i] = static_cast<double>(acc);
        }
        const double total = cdf_.back();
        for (auto& c : cdf_) c /= total;
        cdf_.back() = 1.0;
    }

    uint64_t draw(std::mt19937_64& rng) const {
        const double u =
            static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<uint64_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

}  // namespace

std::vector<StreamItem> synthesize(const SynthSpec& spec) {
    if (spec.n_nodes < 2) throw std::invalid_argument("synth: n_nodes must be >= 2");
    if (spec.n_edges < 1) throw std::invalid_argument("synth: n_edges must be >= 1");
    if (!(spec.zipf_exponent > 0) || !(spec.degree_skew > 0))
        throw std::invalid_argument("synth: exponents must be > 0");

    std::mt19937_64 rng(spec.rng_seed);
    RankSampler nodes(spec.n_nodes, spec.degree_skew);

    std::vector<std::pair<uint64_t, uint64_t>> base(spec.n_edges);
    for (auto& [s, d] : base) {
        s = nodes.draw(rng);
        do {
            d = nodes.draw(rng);
        } while (d == s);
    }

    // Rank-Zipf multiplicity: the i-th base edge repeats
    // max(1, floor(100 * (i+1)^-z)) times as separate weight-1 items.
    std::vector<StreamItem> items;
    items.reserve(base.size() + 256);
    for (size_t i = 0; i < base.size(); ++i) {
        const double reps = std::floor(100.0 * std::pow(static_cast<double>(i + 1),
                                                        -spec.zipf_exponent));
        const uint64_t mult = std::max<uint64_t>(1, static_cast<uint64_t>(reps));
        for (uint64_t rep = 0; rep < mult; ++rep) {
            StreamItem item;
            item.src = "n" + std::to_string(base[i].first);
            item.dst = "n" + std::to_string(base[i].second);
            item.weight = 1;
            items.push_back(std::move(item));
        }
    }

    // Fisher-Yates with the stream rng; std::shuffle is not portable.
    for (size_t i = items.size() - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng() % (i + 1));
        std::swap(items[i], items[j]);
    }
    for (size_t i = 0; i < items.size(); ++i) items[i].time = i;
    return items;
}

}  // namespace gss
