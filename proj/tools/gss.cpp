// Command-line front end: stream ingestion, single queries, the evaluation
// harness and the analytic calculators. All output is JSON on stdout;
// identical arguments and seed produce byte-identical output (wall-clock
// timing fields only appear under --timing).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gss/eval.hpp"
#include "gss/kernels.hpp"
#include "gss/metrics.hpp"
#include "gss/queries.hpp"
#include "gss/sketch.hpp"
#include "gss/stream.hpp"
#include "gss/tcm.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

uint64_t default_seed() {
    if (const char* env = std::getenv("GSS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw CLI::ValidationError("GSS_SEED", "not an unsigned integer");
        }
    }
    return 1;
}

struct StreamOpts {
    std::string input;
    uint64_t synth_nodes = 0;
    uint64_t synth_edges = 0;
    double zipf = 1.0;
    double skew = 1.0;
    uint64_t seed = default_seed();

    void attach(CLI::App* cmd) {
        auto* in = cmd->add_option("--input", input, "edge-list file (.gz accepted)");
        auto* se = cmd->add_option("--synth-edges", synth_edges,
                                   "synthesize a stream with this many base edges");
        cmd->add_option("--synth-nodes", synth_nodes,
                        "synthetic node count (default edges/10)");
        cmd->add_option("--zipf", zipf, "synthetic repetition skew")->capture_default_str();
        cmd->add_option("--skew", skew, "synthetic degree skew")->capture_default_str();
        cmd->add_option("--seed", seed, "rng seed (env GSS_SEED)")->capture_default_str();
        in->excludes(se);
        se->excludes(in);
    }

    std::vector<gss::StreamItem> load() const {
        if (!input.empty()) return gss::parse_stream(input);
        if (synth_edges == 0)
            throw CLI::ValidationError("input", "give --input or --synth-edges");
        gss::SynthSpec spec;
        spec.n_edges = synth_edges;
        spec.n_nodes = synth_nodes ? synth_nodes : std::max<uint64_t>(2, synth_edges / 10);
        spec.zipf_exponent = zipf;
        spec.degree_skew = skew;
        spec.rng_seed = seed;
        return gss::synthesize(spec);
    }
};

struct SketchOpts {
    gss::SketchConfig cfg;
    bool small_stream = false;
    bool no_simd = false;
    CLI::Option* r_opt = nullptr;
    CLI::Option* k_opt = nullptr;

    void attach(CLI::App* cmd) {
        cfg.m = 0;
        cmd->add_option("--m", cfg.m, "matrix side (0 = ceil(sqrt(items/l)))")
            ->capture_default_str();
        cmd->add_option("--fbits", cfg.fbits, "fingerprint bits")->capture_default_str();
        r_opt = cmd->add_option("--r", cfg.r, "address sequence length")->capture_default_str();
        k_opt = cmd->add_option("--k", cfg.k, "candidate buckets")->capture_default_str();
        cmd->add_option("--l", cfg.l, "rooms per bucket")->capture_default_str();
        cmd->add_option("--lcg-a", cfg.lcg_a, "LCG multiplier (0 = auto)");
        cmd->add_option("--lcg-b", cfg.lcg_b, "LCG increment (0 = auto)");
        cmd->add_option("--lcg-p", cfg.lcg_p, "LCG modulus (0 = auto)");
        cmd->add_option("--hash-seed", cfg.hash_seed, "node hash seed");
        cmd->add_flag("--small-stream", small_stream,
                      "preset r=8, k=8 unless --r/--k are given");
        cmd->add_flag("--no-simd", no_simd, "force the scalar row-scan kernel");
    }

    gss::SketchConfig resolve_for(size_t items) {
        if (no_simd) gss::kernels::set_default_impl(gss::kernels::Impl::Scalar);
        if (small_stream) {
            if (r_opt->count() == 0) cfg.r = 8;
            if (k_opt->count() == 0) cfg.k = 8;
        }
        if (cfg.m == 0)
            cfg.m = static_cast<uint32_t>(
                std::ceil(std::sqrt(static_cast<double>(std::max<size_t>(1, items)) / cfg.l)));
        return gss::resolve(cfg);
    }
};

ordered_json config_json(const gss::SketchConfig& cfg) {
    return {{"m", cfg.m},         {"fbits", cfg.fbits}, {"r", cfg.r},
            {"k", cfg.k},         {"l", cfg.l},         {"lcg_a", cfg.lcg_a},
            {"lcg_b", cfg.lcg_b}, {"lcg_p", cfg.lcg_p}, {"hash_seed", cfg.hash_seed}};
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json groups_json(const std::vector<gss::NodeGroup>& groups) {
    ordered_json arr = ordered_json::array();
    for (const auto& g : groups) arr.push_back({{"hash", g.hash}, {"ids", g.ids}});
    return arr;
}

int run(int argc, char** argv) {
    CLI::App app{"GSS graph-stream sketch"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "emit a synthetic stream");
    auto synth_spec = std::make_shared<gss::SynthSpec>();
    auto synth_out = std::make_shared<std::string>();
    synth_spec->rng_seed = default_seed();
    synth->add_option("--nodes", synth_spec->n_nodes, "node count")->capture_default_str();
    synth->add_option("--edges", synth_spec->n_edges, "base edge count")
        ->capture_default_str();
    synth->add_option("--zipf", synth_spec->zipf_exponent, "repetition skew")
        ->capture_default_str();
    synth->add_option("--skew", synth_spec->degree_skew, "degree skew")
        ->capture_default_str();
    synth->add_option("--seed", synth_spec->rng_seed, "rng seed (env GSS_SEED)")
        ->capture_default_str();
    synth->add_option("--out", *synth_out, "output file (default stdout)");
    synth->callback([=]() {
        const auto items = gss::synthesize(*synth_spec);
        if (synth_out->empty()) {
            gss::serialize_stream(items, std::cout);
        } else {
            std::ofstream out(*synth_out);
            if (!out) throw CLI::ValidationError("--out", "cannot open " + *synth_out);
            gss::serialize_stream(items, out);
        }
    });

    // --- ingest ---
    auto* ingest = app.add_subcommand("ingest", "build a sketch, print buffer stats");
    auto ingest_stream = std::make_shared<StreamOpts>();
    auto ingest_sketch = std::make_shared<SketchOpts>();
    auto ingest_timing = std::make_shared<bool>(false);
    ingest_stream->attach(ingest);
    ingest_sketch->attach(ingest);
    ingest->add_flag("--timing", *ingest_timing, "include wall-clock throughput");
    ingest->callback([=]() {
        const auto items = ingest_stream->load();
        const auto cfg = ingest_sketch->resolve_for(items.size());
        gss::GssSketch sketch(cfg);
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& item : items) sketch.insert(item);
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto st = sketch.buffer_stats();
        ordered_json j;
        j["schema"] = "gss-ingest/1";
        j["config"] = config_json(cfg);
        j["items"] = items.size();
        j["distinct_hashed_nodes"] = sketch.distinct_hashed_nodes();
        j["distinct_hashed_edges"] = st.total_edges;
        j["buffer_edges"] = st.leftover_edges;
        j["buffer_pct"] = st.percentage;
        j["matrix_bytes"] = sketch.memory_bytes();
        j["occupied_rooms"] = sketch.matrix().occupied_rooms();
        if (*ingest_timing) {
            j["ingest_seconds"] = dt;
            j["items_per_second"] = dt > 0 ? items.size() / dt : 0.0;
        }
        emit(j);
    });

    // --- single queries over a freshly built sketch ---
    struct QueryCmd {
        const char* name;
        const char* help;
        bool pair;  // src+dst vs single node
    };
    static constexpr QueryCmd kQueries[] = {
        {"edge", "weight of one edge", true},   {"node", "node out-weight", false},
        {"succ", "1-hop successors", false},    {"pred", "1-hop precursors", false},
        {"reach", "reachability via BFS", true},
    };
    for (const auto& q : kQueries) {
        auto* cmd = app.add_subcommand(q.name, q.help);
        auto stream_opts = std::make_shared<StreamOpts>();
        auto sketch_opts = std::make_shared<SketchOpts>();
        auto src = std::make_shared<std::string>();
        auto dst = std::make_shared<std::string>();
        stream_opts->attach(cmd);
        sketch_opts->attach(cmd);
        if (q.pair) {
            cmd->add_option("--src", *src, "source node id")->required();
            cmd->add_option("--dst", *dst, "destination node id")->required();
        } else {
            cmd->add_option("--node", *src, "node id")->required();
        }
        const std::string name = q.name;
        cmd->callback([=]() {
            const auto items = stream_opts->load();
            const auto cfg = sketch_opts->resolve_for(items.size());
            gss::GssSketch sketch(cfg);
            for (const auto& item : items) sketch.insert(item);

            ordered_json j;
            j["schema"] = "gss-query/1";
            j["query"] = name;
            if (name == "edge") {
                const auto w = sketch.edge_weight(*src, *dst);
                j["src"] = *src;
                j["dst"] = *dst;
                j["found"] = w.has_value();
                j["weight"] = w ? ordered_json(*w) : ordered_json(nullptr);
            } else if (name == "node") {
                j["node"] = *src;
                j["out_weight"] = gss::node_out_weight(sketch, *src);
            } else if (name == "succ") {
                const auto groups = sketch.successors(*src);
                j["node"] = *src;
                j["count"] = groups.size();
                j["successors"] = groups_json(groups);
            } else if (name == "pred") {
                const auto groups = sketch.precursors(*src);
                j["node"] = *src;
                j["count"] = groups.size();
                j["precursors"] = groups_json(groups);
            } else {
                const auto res = gss::reachable(sketch, *src, *dst);
                j["src"] = *src;
                j["dst"] = *dst;
                j["reachable"] = res.reachable;
                j["visited"] = res.visited_count;
            }
            emit(j);
        });
    }

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "full accuracy experiment (GSS vs TCM)");
    auto eval_stream = std::make_shared<StreamOpts>();
    auto eval_sketch = std::make_shared<SketchOpts>();
    auto plan = std::make_shared<gss::QueryPlan>();
    auto tcm_cfg = std::make_shared<gss::TcmConfig>();
    auto tcm_ratio = std::make_shared<double>(1.0);
    auto csv_path = std::make_shared<std::string>();
    eval_stream->attach(eval);
    eval_sketch->attach(eval);
    tcm_cfg->side = 0;
    eval->add_option("--tcm-d", tcm_cfg->depth, "TCM matrices")->capture_default_str();
    eval->add_option("--tcm-side", tcm_cfg->side, "TCM side (0 = from --tcm-mem-ratio)")
        ->capture_default_str();
    eval->add_option("--tcm-mem-ratio", *tcm_ratio, "TCM memory / GSS memory")
        ->capture_default_str();
    eval->add_option("--tnr-pairs", plan->tnr_pairs, "unreachable pairs to sample")
        ->capture_default_str();
    eval->add_option("--threads", plan->threads, "query-phase threads")
        ->capture_default_str();
    eval->add_flag("--timing", plan->timing, "include wall-clock throughput");
    eval->add_flag("--details", plan->details, "per-edge query table in the report");
    eval->add_option("--csv", *csv_path, "also write a CSV row per structure");
    eval->callback([=]() {
        const auto items = eval_stream->load();
        const auto cfg = eval_sketch->resolve_for(items.size());
        plan->seed = eval_stream->seed;
        if (tcm_cfg->side == 0)
            tcm_cfg->side = gss::tcm_side_for_memory(cfg, tcm_cfg->depth, *tcm_ratio);
        const auto result = gss::run_experiment(items, cfg, *tcm_cfg, *plan);
        std::cout << gss::experiment_json(result, cfg, *tcm_cfg, *plan);
        if (!csv_path->empty()) {
            std::ofstream out(*csv_path);
            if (!out) throw CLI::ValidationError("--csv", "cannot open " + *csv_path);
            out << gss::experiment_csv(result, cfg, *tcm_cfg);
        }
    });

    // --- analytic ---
    auto* analytic = app.add_subcommand("analytic", "closed-form calculators");
    analytic->require_subcommand(1);

    auto* coll = analytic->add_subcommand("collision", "edge-query correct rate");
    auto ce = std::make_shared<double>(0);
    auto cd = std::make_shared<double>(0);
    auto cm = std::make_shared<double>(0);
    auto cfbits = std::make_shared<uint32_t>(8);
    auto crange = std::make_shared<double>(0);
    coll->add_option("--edges", *ce, "total edges |E|")->required();
    coll->add_option("--adj", *cd, "adjacent edges D")->required();
    coll->add_option("--m", *cm, "matrix side");
    coll->add_option("--fbits", *cfbits, "fingerprint bits")->capture_default_str();
    coll->add_option("--range", *crange, "combined range M (overrides --m/--fbits)");
    coll->callback([=]() {
        double range = *crange;
        if (range == 0) {
            if (*cm == 0) throw CLI::ValidationError("--m", "give --range or --m/--fbits");
            range = *cm * static_cast<double>(1u << *cfbits);
        }
        const double rate = gss::metrics::analytic_collision_rate(*ce, *cd, range);
        emit({{"schema", "gss-analytic/1"},
              {"formula", "collision"},
              {"edges", *ce},
              {"adjacent", *cd},
              {"combined_range", range},
              {"correct_rate", rate},
              {"collision_rate", 1.0 - rate}});
    });

    auto* fail = analytic->add_subcommand("failure", "insertion-failure upper bound");
    auto fn = std::make_shared<double>(0);
    auto fd = std::make_shared<double>(0);
    auto fm = std::make_shared<double>(0);
    auto fr = std::make_shared<double>(8);
    auto fl = std::make_shared<double>(2);
    auto fk = std::make_shared<double>(8);
    fail->add_option("--edges", *fn, "edges already inserted N")->required();
    fail->add_option("--adj", *fd, "adjacent edges D")->required();
    fail->add_option("--m", *fm, "matrix side")->required();
    fail->add_option("--r", *fr, "address sequence length")->capture_default_str();
    fail->add_option("--l", *fl, "rooms per bucket")->capture_default_str();
    fail->add_option("--k", *fk, "candidate buckets")->capture_default_str();
    fail->callback([=]() {
        const double p =
            gss::metrics::analytic_insertion_failure(*fn, *fd, *fm, *fr, *fl, *fk);
        emit({{"schema", "gss-analytic/1"},
              {"formula", "insertion-failure"},
              {"edges", *fn},
              {"adjacent", *fd},
              {"m", *fm},
              {"r", *fr},
              {"l", *fl},
              {"k", *fk},
              {"probability", p}});
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
