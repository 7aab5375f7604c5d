// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned in code; nothing is calibrated at run time.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gss/eval.hpp"
#include "gss/metrics.hpp"
#include "gss/queries.hpp"
#include "gss/sketch.hpp"
#include "gss/stream.hpp"
#include "gss/tcm.hpp"
#include "oracle.hpp"

using namespace gss;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
    double seconds = 0;
};

unsigned pool_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : std::min(hw, 16u);
}

void run_parallel(size_t n, const std::function<void(size_t)>& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<size_t>(pool_threads(), n ? n : 1));
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            while (true) {
                const size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

std::vector<uint64_t> hashes_of(const std::vector<NodeGroup>& groups) {
    std::vector<uint64_t> v;
    v.reserve(groups.size());
    for (const auto& g : groups) v.push_back(g.hash);
    return v;
}

bool groups_match(const std::vector<NodeGroup>& got, const std::vector<uint64_t>& want,
                  const testing::GhOracle& oracle) {
    if (hashes_of(got) != want) return false;
    for (const auto& g : got) {
        const auto* ids = oracle.ids(g.hash);
        if (!ids || g.ids != *ids) return false;
    }
    return true;
}

// --- criterion 1: exact-storage oracle equivalence ------------------------

Outcome criterion1() {
    Outcome out;
    const auto t0 = Clock::now();

    SketchConfig base[5];
    base[0].m = 32;   base[0].fbits = 3;  base[0].r = 4;  base[0].k = 8;  base[0].l = 2;
    base[1].m = 64;   base[1].fbits = 8;  base[1].r = 8;  base[1].k = 8;  base[1].l = 1;
    base[2].m = 128;  base[2].fbits = 16; base[2].r = 16; base[2].k = 16; base[2].l = 2;
    base[3].m = 32;   base[3].fbits = 3;  base[3].r = 1;  base[3].k = 1;  base[3].l = 1;
    base[4].m = 48;   base[4].fbits = 6;  base[4].r = 8;  base[4].k = 4;  base[4].l = 4;

    constexpr int kStreams = 50;
    std::atomic<int> exact{0};
    std::vector<std::string> errors(kStreams);

    run_parallel(kStreams, [&](size_t i) {
        SketchConfig cfg = base[i % 5];
        cfg.hash_seed = 0x9e3779b97f4a7c15ull + i;
        GssSketch sketch(cfg);
        testing::GhOracle oracle(sketch.config());

        const auto stream =
            testing::random_stream(1000 + i, 2000, 10000, /*with_negatives=*/i % 3 == 0);
        std::set<std::pair<std::string, std::string>> edges;
        for (const auto& item : stream) {
            sketch.insert(item);
            oracle.add(item);
            edges.emplace(item.src, item.dst);
        }

        bool ok = true;
        for (const auto& [s, d] : edges)
            ok = ok && sketch.edge_weight(s, d) == oracle.edge_weight(s, d);
        for (int q = 0; q < 200 && ok; ++q) {
            const std::string s = "v" + std::to_string(q * 7 % 2000);
            const std::string d = "absent" + std::to_string(q);
            ok = ok && sketch.edge_weight(s, d) == oracle.edge_weight(s, d);
        }
        if (!ok) {
            errors[i] = "edge weights diverge";
            return;
        }
        for (int v = 0; v < 2000 && ok; ++v) {
            const std::string id = "v" + std::to_string(v);
            const uint64_t h = sketch.node_ref(id).combined;
            ok = ok && groups_match(sketch.successors(id), oracle.successors(h), oracle);
            ok = ok && groups_match(sketch.precursors(id), oracle.precursors(h), oracle);
            ok = ok && node_out_weight(sketch, id) == oracle.out_weight(h);
        }
        if (!ok) {
            errors[i] = "node scans diverge";
            return;
        }
        exact.fetch_add(1);
    });

    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_budget = out.seconds < 60.0;
    out.pass = exact == kStreams && in_budget;
    std::ostringstream os;
    os << exact.load() << "/" << kStreams << " streams exactly match the G_h oracle";
    for (const auto& e : errors)
        if (!e.empty()) {
            os << "; first failure: " << e;
            break;
        }
    if (!in_budget) os << "; exceeded 60 s budget";
    out.detail = os.str();
    return out;
}

// --- criterion 2: address round trip ---------------------------------------

Outcome criterion2() {
    Outcome out;
    const auto t0 = Clock::now();
    size_t checks = 0;
    bool ok = true;
    for (const uint32_t m : {4u, 64u, 1000u}) {
        for (const uint32_t fbits : {3u, 8u}) {  // F = 8, 256
            SketchConfig cfg;
            cfg.m = m;
            cfg.fbits = fbits;
            cfg.r = 8;
            cfg.k = 8;
            cfg.l = 2;
            cfg = resolve(cfg);
            const uint64_t M = cfg.combined_range();
            for (uint64_t h = 0; h < M && ok; ++h) {
                const NodeRef n = decompose(h, cfg);
                const AddressSeq seq = address_sequence(n, cfg);
                for (uint32_t idx = 0; idx < cfg.r; ++idx, ++checks)
                    if (recover_hash(n.fp, idx, seq.addrs[idx], cfg) != h) {
                        ok = false;
                        break;
                    }
            }
        }
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.pass = ok;
    out.detail = std::to_string(checks) + " exhaustive recover_hash round trips, zero misses";
    if (!ok) out.detail = "round trip broke";
    return out;
}

// --- criterion 3: analytic reproduction ------------------------------------

Outcome criterion3() {
    Outcome out;
    const auto t0 = Clock::now();
    const double c1 = metrics::analytic_collision_rate(5e5, 200, 256000.0);
    const double c2 = metrics::analytic_collision_rate(5e5, 200, 1000.0);
    const double f = metrics::analytic_insertion_failure(1e6, 1e4, 1000, 8, 3, 8);

    const bool p1 = std::abs(c1 - 0.9992) <= 0.0002;
    const bool p2 = std::abs(c2 - 0.497) <= 0.002;
    const bool p3 = std::abs(f - 0.002) <= 0.0005;
    out.pass = p1 && p2 && p3;
    std::ostringstream os;
    os.precision(6);
    os << "collision@M=256000 = " << c1 << " (want 0.9992 +/- 0.0002: "
       << (p1 ? "ok" : "MISS") << "), collision@M=1000 = " << c2
       << " (want 0.497 +/- 0.002: " << (p2 ? "ok" : "MISS")
       << "), insertion-failure = " << f << " (want 0.002 +/- 0.0005: "
       << (p3 ? "ok" : "MISS") << ")";
    out.detail = os.str();
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

// --- criterion 4: analytic vs empirical collisions --------------------------

Outcome criterion4() {
    Outcome out;
    const auto t0 = Clock::now();

    SynthSpec spec;
    spec.n_nodes = 20000;
    spec.n_edges = 50000;
    spec.zipf_exponent = 1.0;
    spec.degree_skew = 0.6;
    spec.rng_seed = 777;
    const auto stream = synthesize(spec);

    SketchConfig cfg;
    cfg.m = 64;
    cfg.fbits = 4;  // M = 1024: stress configuration
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    GssSketch sketch(cfg);
    testing::GOracle g;
    for (const auto& item : stream) {
        sketch.insert(item);
        g.add(item);
    }

    const double M = 64.0 * 16.0;
    const double total_edges = static_cast<double>(g.distinct_edges());
    double expected = 0, variance = 0;
    size_t over = 0, queried = 0;
    std::vector<double> adj_degrees;
    adj_degrees.reserve(g.distinct_edges());
    for (uint32_t u = 0; u < g.nodes(); ++u) {
        for (const auto& [v, w] : g.out(u)) {
            const double adjacent =
                static_cast<double>(g.out_degree(u) - 1 + g.in_degree(v) - 1);
            adj_degrees.push_back(adjacent);
            const double p =
                1.0 - metrics::analytic_collision_rate(total_edges - 1, adjacent, M);
            expected += p;
            variance += p * (1 - p);
            const auto est = sketch.edge_weight(g.id(u), g.id(v));
            over += est.value_or(0) > w;
            ++queried;
        }
    }
    const double se = std::sqrt(variance);
    const double delta = std::abs(static_cast<double>(over) - expected);
    std::sort(adj_degrees.begin(), adj_degrees.end());
    double mean_d = 0;
    for (double d : adj_degrees) mean_d += d;
    mean_d /= static_cast<double>(adj_degrees.size());
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_budget = out.seconds < 120.0;
    out.pass = delta <= 3 * se && in_budget;
    std::ostringstream os;
    os.precision(5);
    os << "over-estimated " << over << "/" << queried << " edges, analytic expectation "
       << expected << " +/- " << se << " (|delta| = " << delta
       << " <= 3 se: " << (delta <= 3 * se ? "ok" : "MISS") << "); per-edge D mean "
       << mean_d << ", median " << adj_degrees[adj_degrees.size() / 2] << ", p99 "
       << adj_degrees[adj_degrees.size() * 99 / 100] << ", max " << adj_degrees.back();
    if (!in_budget) os << "; exceeded 120 s budget";
    out.detail = os.str();
    return out;
}

// --- criterion 5: buffer behaviour ------------------------------------------

std::vector<StreamItem> buffer_stream() {
    SynthSpec spec;
    spec.n_nodes = 1000;
    spec.n_edges = 100000;
    spec.zipf_exponent = 1.0;
    spec.degree_skew = 1.0;
    spec.rng_seed = 2024;
    return synthesize(spec);
}

SketchConfig buffer_cfg() {
    SketchConfig cfg;
    cfg.m = 224;  // ceil(sqrt(1e5 / l)) with l = 2
    cfg.fbits = 16;
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    return cfg;
}

Outcome criterion5() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto stream = buffer_stream();

    GssSketch full(buffer_cfg());
    for (const auto& item : stream) full.insert(item);
    const BufferStats with_square = full.buffer_stats();

    SketchConfig ablated = buffer_cfg();
    ablated.r = 1;
    ablated.k = 1;
    GssSketch single(ablated);
    for (const auto& item : stream) single.insert(item);
    const BufferStats without_square = single.buffer_stats();

    const bool small = with_square.percentage < 1e-3;
    const bool direction = without_square.percentage > with_square.percentage;
    out.pass = small && direction;
    std::ostringstream os;
    os.precision(4);
    os << "buffer " << with_square.leftover_edges << "/" << with_square.total_edges << " = "
       << with_square.percentage << " (< 1e-3: " << (small ? "ok" : "MISS")
       << "); square hashing off -> " << without_square.percentage
       << " (strictly larger: " << (direction ? "ok" : "MISS") << ")";
    out.detail = os.str();
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

// --- criterion 6: reachability -----------------------------------------------

Outcome criterion6() {
    Outcome out;
    const auto t0 = Clock::now();

    SynthSpec spec;
    spec.n_nodes = 5000;
    spec.n_edges = 25000;
    spec.zipf_exponent = 1.0;
    spec.degree_skew = 0.8;
    spec.rng_seed = 909;
    const auto stream = synthesize(spec);

    SketchConfig cfg;
    cfg.m = 112;  // ceil(sqrt(25000 / l)) with l = 2
    cfg.fbits = 16;
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    GssSketch sketch(cfg);
    TcmConfig tcfg;
    tcfg.depth = 4;
    tcfg.side = tcm_side_for_memory(cfg, tcfg.depth, 8.0);
    TcmSketch tcm(tcfg);
    testing::GOracle g;
    for (const auto& item : stream) {
        sketch.insert(item);
        tcm.insert(item);
        g.add(item);
    }

    std::mt19937_64 rng(910);
    std::vector<std::pair<uint32_t, uint32_t>> unreachable, reach;
    size_t attempts = 0;
    while ((unreachable.size() < 100 || reach.size() < 100) && attempts < 500000) {
        ++attempts;
        const uint32_t s = static_cast<uint32_t>(rng() % g.nodes());
        const uint32_t d = static_cast<uint32_t>(rng() % g.nodes());
        if (s == d) continue;
        if (g.reachable(s, d)) {
            if (reach.size() < 100) reach.emplace_back(s, d);
        } else if (unreachable.size() < 100) {
            unreachable.emplace_back(s, d);
        }
    }

    std::vector<uint8_t> gss_neg(unreachable.size(), 0), tcm_neg(unreachable.size(), 0);
    run_parallel(unreachable.size(), [&](size_t i) {
        const auto [s, d] = unreachable[i];
        gss_neg[i] = !reachable(sketch, g.id(s), g.id(d)).reachable;
        tcm_neg[i] = !tcm.reachable(g.id(s), g.id(d)).reachable;
    });
    std::vector<uint8_t> gss_pos(reach.size(), 0), tcm_pos(reach.size(), 0);
    run_parallel(reach.size(), [&](size_t i) {
        const auto [s, d] = reach[i];
        gss_pos[i] = reachable(sketch, g.id(s), g.id(d)).reachable;
        tcm_pos[i] = tcm.reachable(g.id(s), g.id(d)).reachable;
    });

    double gss_tnr = 0, tcm_tnr = 0;
    for (uint8_t b : gss_neg) gss_tnr += b;
    for (uint8_t b : tcm_neg) tcm_tnr += b;
    gss_tnr /= static_cast<double>(gss_neg.empty() ? 1 : gss_neg.size());
    tcm_tnr /= static_cast<double>(tcm_neg.empty() ? 1 : tcm_neg.size());
    size_t false_negatives = 0;
    for (uint8_t b : gss_pos) false_negatives += !b;
    for (uint8_t b : tcm_pos) false_negatives += !b;

    const bool found_all = unreachable.size() == 100 && reach.size() == 100;
    const bool tnr_ok = gss_tnr >= 0.95;
    const bool vs_tcm = gss_tnr >= tcm_tnr;
    out.pass = found_all && tnr_ok && vs_tcm && false_negatives == 0;
    std::ostringstream os;
    os.precision(4);
    os << "GSS TNR " << gss_tnr << " (>= 0.95: " << (tnr_ok ? "ok" : "MISS")
       << "), TCM@8x TNR " << tcm_tnr << " (GSS >= TCM: " << (vs_tcm ? "ok" : "MISS")
       << "), false negatives over 200 reachable answers: " << false_negatives;
    if (!found_all) os << "; could not sample 100+100 pairs";
    out.detail = os.str();
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

// --- criterion 7: head-to-head accuracy direction ----------------------------

Outcome criterion7() {
    Outcome out;
    const auto t0 = Clock::now();

    const auto stream = buffer_stream();
    const SketchConfig cfg = resolve(buffer_cfg());
    TcmConfig tcfg;
    tcfg.depth = 4;
    tcfg.side = tcm_side_for_memory(cfg, tcfg.depth, 1.0);  // equal memory

    QueryPlan plan;
    plan.tnr_pairs = 0;
    plan.threads = pool_threads();
    const ExperimentResult res = run_experiment(stream, cfg, tcfg, plan);

    const bool are_gap = res.gss.are <= res.tcm.are / 10.0;
    const bool prec_gap = res.gss.avg_precision > res.tcm.avg_precision;
    out.pass = are_gap && prec_gap;
    std::ostringstream os;
    os.precision(5);
    os << "edge ARE gss " << res.gss.are << " vs tcm " << res.tcm.are
       << " (>= 10x gap: " << (are_gap ? "ok" : "MISS") << "), successor precision gss "
       << res.gss.avg_precision << " vs tcm " << res.tcm.avg_precision
       << " (strictly higher: " << (prec_gap ? "ok" : "MISS") << ")";
    out.detail = os.str();
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

// --- criterion 8: determinism and throughput ---------------------------------

Outcome criterion8() {
    Outcome out;
    const auto t0 = Clock::now();

    SynthSpec spec;
    spec.n_nodes = 500;
    spec.n_edges = 5000;
    spec.rng_seed = 31;
    const auto small = synthesize(spec);
    SketchConfig cfg;
    cfg.m = 64;
    cfg.fbits = 12;
    cfg.r = 8;
    cfg.k = 8;
    cfg.l = 2;
    cfg = resolve(cfg);
    TcmConfig tcfg;
    tcfg.depth = 4;
    tcfg.side = tcm_side_for_memory(cfg, tcfg.depth, 1.0);
    QueryPlan plan;
    plan.tnr_pairs = 20;
    plan.seed = 5;
    const std::string a =
        experiment_json(run_experiment(small, cfg, tcfg, plan), cfg, tcfg, plan);
    QueryPlan threaded = plan;
    threaded.threads = pool_threads();
    const std::string b =
        experiment_json(run_experiment(small, cfg, tcfg, threaded), cfg, tcfg, plan);
    const bool identical = a == b;

    const auto stream = buffer_stream();
    GssSketch sketch(buffer_cfg());
    const auto i0 = Clock::now();
    for (const auto& item : stream) sketch.insert(item);
    const double dt = std::chrono::duration<double>(Clock::now() - i0).count();
    const double ips = static_cast<double>(stream.size()) / dt;
    const bool fast = ips >= 2e5;

    out.pass = identical && fast;
    std::ostringstream os;
    os.precision(4);
    os << "reports byte-identical across runs and thread counts: "
       << (identical ? "ok" : "MISS") << "; ingest " << ips / 1e6
       << " M items/s (>= 0.2: " << (fast ? "ok" : "MISS") << ")";
    out.detail = os.str();
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"exact-storage oracle equivalence", criterion1},
        {"address round trip", criterion2},
        {"analytic reproduction", criterion3},
        {"analytic vs empirical collision rate", criterion4},
        {"buffer behaviour", criterion5},
        {"reachability TNR and no false negatives", criterion6},
        {"head-to-head accuracy direction", criterion7},
        {"determinism and throughput", criterion8},
    };

    int failures = 0;
    int index = 1;
    for (const auto& e : entries) {
        const Outcome o = e.fn();
        failures += !o.pass;
        std::printf("[%s] criterion %d: %s - %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index,
                    e.name, o.detail.c_str(), o.seconds);
        std::fflush(stdout);
        ++index;
    }
    std::printf("%d/8 criteria passed\n", 8 - failures);
    return failures;
}
