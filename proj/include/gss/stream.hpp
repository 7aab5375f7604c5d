#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gss {

// One directed weighted edge event. Missing weight defaults to 1, missing
// timestamp to the line number / emission ordinal.
struct StreamItem {
    std::string src;
    std::string dst;
    int64_t weight = 1;
    uint64_t time = 0;

    friend bool operator==(const StreamItem&, const StreamItem&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

// Whitespace-separated "src dst [weight] [timestamp]" lines, '#' comments.
// Paths ending in .gz are read through zlib.
std::vector<StreamItem> parse_stream(const std::string& path);
std::vector<StreamItem> parse_stream_text(std::istream& in);

void serialize_stream(const std::vector<StreamItem>& items, std::ostream& out);

struct SynthSpec {
    uint64_t n_nodes = 1000;
    uint64_t n_edges = 5000;
    double zipf_exponent = 1.0;  // repetition skew across base edges, by rank
    double degree_skew = 1.0;    // endpoint popularity exponent
    uint64_t rng_seed = 1;
};

// Deterministic under rng_seed: n_edges base edges with endpoints drawn from
// a power-law popularity table, each repeated with rank-Zipf multiplicity as
// separate weight-1 items, then shuffled into a stream.
std::vector<StreamItem> synthesize(const SynthSpec& spec);

}  // namespace gss
