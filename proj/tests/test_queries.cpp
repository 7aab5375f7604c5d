#include "doctest.h"
#include "gss/queries.hpp"
#include "oracle.hpp"

using namespace gss;

namespace {

StreamItem item(std::string s, std::string d, int64_t w = 1) {
    StreamItem it;
    it.src = std::move(s);
    it.dst = std::move(d);
    it.weight = w;
    return it;
}

SketchConfig roomy_cfg() {
    SketchConfig cfg;
    cfg.m = 64;
    cfg.fbits = 16;  // large M: node collisions essentially impossible here
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    return resolve(cfg);
}

}  // namespace

TEST_CASE("node_out_weight sums the out-edges") {
    SketchConfig cfg;
    cfg.m = 4;
    cfg.fbits = 3;
    cfg.r = 2;
    cfg.k = 4;
    cfg.l = 1;
    cfg.lcg_a = 5;
    cfg.lcg_b = 3;
    cfg.lcg_p = 8;
    GssSketch sketch(resolve(cfg));
    sketch.insert(item("a", "c", 2));
    sketch.insert(item("a", "g", 4));
    CHECK(node_out_weight(sketch, "a") == 6);
    CHECK(node_out_weight(sketch, "nobody") == 0);
}

TEST_CASE("node_out_weight equals the oracle for all nodes") {
    SketchConfig cfg;
    cfg.m = 32;
    cfg.fbits = 3;
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    GssSketch sketch(cfg);
    testing::GhOracle oracle(sketch.config());
    const auto stream = testing::random_stream(61, 250, 3000, true);
    for (const auto& it : stream) {
        sketch.insert(it);
        oracle.add(it);
    }
    for (int v = 0; v < 250; ++v) {
        const std::string id = "v" + std::to_string(v);
        REQUIRE(node_out_weight(sketch, id) ==
                oracle.out_weight(sketch.node_ref(id).combined));
    }
}

TEST_CASE("reachability basics") {
    GssSketch sketch(roomy_cfg());
    sketch.insert(item("a", "b"));
    sketch.insert(item("b", "c"));

    CHECK(reachable(sketch, "a", "a").reachable);  // present self
    CHECK(reachable(sketch, "a", "b").reachable);
    CHECK(reachable(sketch, "a", "c").reachable);
    CHECK(!reachable(sketch, "c", "a").reachable);
    CHECK(!reachable(sketch, "ghost", "ghost").reachable);  // never inserted
    CHECK(!reachable(sketch, "a", "ghost").reachable);
}

TEST_CASE("reachable equals BFS over the oracle G_h") {
    SketchConfig cfg;
    cfg.m = 32;
    cfg.fbits = 8;
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    GssSketch sketch(cfg);
    testing::GhOracle oracle(sketch.config());
    const auto stream = testing::random_stream(71, 500, 1500);
    for (const auto& it : stream) {
        sketch.insert(it);
        oracle.add(it);
    }

    std::mt19937_64 rng(72);
    size_t checked = 0;
    for (int i = 0; i < 200; ++i) {
        const std::string s = "v" + std::to_string(rng() % 500);
        const std::string d = "v" + std::to_string(rng() % 500);
        const ReachResult got = reachable(sketch, s, d);
        const bool want = oracle.reachable(sketch.node_ref(s).combined,
                                           sketch.node_ref(d).combined);
        REQUIRE(got.reachable == want);
        REQUIRE(got.visited_count <= oracle.distinct_nodes());
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("no false negatives against the original graph") {
    GssSketch sketch(roomy_cfg());
    testing::GOracle g;
    const auto stream = testing::random_stream(81, 200, 600);
    for (const auto& it : stream) {
        sketch.insert(it);
        g.add(it);
    }
    std::mt19937_64 rng(82);
    size_t reachable_pairs = 0;
    for (int i = 0; i < 2000 && reachable_pairs < 100; ++i) {
        const uint32_t s = static_cast<uint32_t>(rng() % g.nodes());
        const uint32_t d = static_cast<uint32_t>(rng() % g.nodes());
        if (s == d || !g.reachable(s, d)) continue;
        ++reachable_pairs;
        REQUIRE(reachable(sketch, g.id(s), g.id(d)).reachable);
    }
    CHECK(reachable_pairs == 100);
}
