#include "gss/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "gss/metrics.hpp"
#include "gss/queries.hpp"
#include "json.hpp"

namespace gss {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Exact accumulation of the stream graph G, used as ground truth for the
// metrics. Nodes are interned in first-seen order so everything downstream
// iterates deterministically.
class ExactGraph {
public:
    uint32_t intern(const std::string& id) {
        const auto it = index_.find(id);
        if (it != index_.end()) return it->second;
        const uint32_t idx = static_cast<uint32_t>(ids_.size());
        ids_.push_back(id);
        index_.emplace(id, idx);
        out_.emplace_back();
        return idx;
    }

    void add(const StreamItem& item) {
        const uint32_t s = intern(item.src);
        const uint32_t d = intern(item.dst);
        out_[s][d] += item.weight;
    }

    // Sorted adjacency snapshots; call once after ingest.
    void freeze() {
        adj_.resize(out_.size());
        edges_ = 0;
        for (size_t u = 0; u < out_.size(); ++u) {
            adj_[u].assign(out_[u].begin(), out_[u].end());
            std::sort(adj_[u].begin(), adj_[u].end());
            edges_ += adj_[u].size();
        }
    }

    size_t nodes() const { return ids_.size(); }
    size_t edges() const { return edges_; }
    const std::string& id(uint32_t u) const { return ids_[u]; }
    const std::vector<std::pair<uint32_t, int64_t>>& out(uint32_t u) const { return adj_[u]; }

    int64_t out_weight(uint32_t u) const {
        int64_t sum = 0;
        for (const auto& [v, w] : adj_[u]) sum += w;
        return sum;
    }

    // Present edges only: weight-zero entries are deletions that removed the
    // edge from G, so they do not count as true neighbours.
    std::vector<std::string> successor_ids(uint32_t u) const {
        std::vector<std::string> out;
        out.reserve(adj_[u].size());
        for (const auto& [v, w] : adj_[u])
            if (w > 0) out.push_back(ids_[v]);
        return out;
    }

    bool reachable(uint32_t s, uint32_t d) const {
        if (s == d) return true;
        std::vector<uint8_t> seen(nodes(), 0);
        std::deque<uint32_t> queue;
        seen[s] = 1;
        queue.push_back(s);
        while (!queue.empty()) {
            const uint32_t u = queue.front();
            queue.pop_front();
            for (const auto& [v, w] : adj_[u]) {
                if (w <= 0) continue;
                if (v == d) return true;
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        return false;
    }

private:
    std::unordered_map<std::string, uint32_t> index_;
    std::vector<std::string> ids_;
    std::vector<std::unordered_map<uint32_t, int64_t>> out_;
    std::vector<std::vector<std::pair<uint32_t, int64_t>>> adj_;
    size_t edges_ = 0;
};

void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            constexpr size_t kChunk = 16;
            while (true) {
                const size_t begin = next.fetch_add(kChunk);
                if (begin >= n) break;
                const size_t end = std::min(n, begin + kChunk);
                for (size_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

struct AreAae {
    double are = 0, aae = 0;
    size_t used = 0, excluded = 0;
};

AreAae reduce_errors(const std::vector<double>& truths, const std::vector<double>& ests) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(truths.size());
    size_t excluded = 0;
    for (size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] > 0)
            pairs.emplace_back(truths[i], ests[i]);
        else
            ++excluded;
    }
    AreAae out;
    out.used = pairs.size();
    out.excluded = excluded;
    if (!pairs.empty()) {
        out.are = metrics::average_relative_error(pairs);
        out.aae = metrics::average_absolute_error(pairs);
    }
    return out;
}

}  // namespace

uint32_t tcm_side_for_memory(const SketchConfig& gss_cfg, uint32_t depth, double ratio) {
    const SketchConfig resolved = is_resolved(gss_cfg) ? gss_cfg : resolve(gss_cfg);
    const BucketMatrix probe(resolved.m, resolved.l);
    const double budget = ratio * static_cast<double>(probe.bytes());
    const double side = std::sqrt(budget / (static_cast<double>(depth) * sizeof(int64_t)));
    return std::max<uint32_t>(1, static_cast<uint32_t>(side));
}

ExperimentResult run_experiment(const std::vector<StreamItem>& stream,
                                const SketchConfig& gss_cfg, const TcmConfig& tcm_cfg,
                                const QueryPlan& plan) {
    ExperimentResult result;
    result.items = stream.size();
    result.gss.structure = "gss";
    result.tcm.structure = "tcm";

    ExactGraph graph;
    for (const auto& item : stream) graph.add(item);
    graph.freeze();
    result.distinct_nodes = graph.nodes();
    result.distinct_edges = graph.edges();

    GssSketch gss(gss_cfg);
    {
        const auto t0 = Clock::now();
        for (const auto& item : stream) gss.insert(item);
        const double dt = seconds_since(t0);
        if (plan.timing) {
            result.gss.ingest_seconds = dt;
            result.gss.items_per_second = dt > 0 ? stream.size() / dt : 0.0;
        }
    }
    TcmSketch tcm(tcm_cfg);
    {
        const auto t0 = Clock::now();
        for (const auto& item : stream) tcm.insert(item);
        const double dt = seconds_since(t0);
        if (plan.timing) {
            result.tcm.ingest_seconds = dt;
            result.tcm.items_per_second = dt > 0 ? stream.size() / dt : 0.0;
        }
    }
    result.gss.memory_bytes = gss.memory_bytes();
    result.tcm.memory_bytes = tcm.memory_bytes();
    result.gss.buffer_pct = gss.buffer_stats().percentage;

    // Edge queries over every distinct edge of G.
    if (plan.edge_queries) {
        std::vector<std::tuple<uint32_t, uint32_t, int64_t>> edges;
        edges.reserve(graph.edges());
        for (uint32_t u = 0; u < graph.nodes(); ++u)
            for (const auto& [v, w] : graph.out(u)) edges.emplace_back(u, v, w);

        std::vector<double> truths(edges.size());
        std::vector<double> gss_est(edges.size());
        std::vector<double> tcm_est(edges.size());
        if (plan.details) result.details.resize(edges.size());

        parallel_for(edges.size(), plan.threads, [&](size_t i) {
            const auto [u, v, truth] = edges[i];
            const std::string& s = graph.id(u);
            const std::string& d = graph.id(v);
            const auto est = gss.edge_weight(s, d);
            const int64_t ge = est.value_or(0);
            const int64_t te = tcm.edge_weight(s, d);
            truths[i] = static_cast<double>(truth);
            gss_est[i] = static_cast<double>(ge);
            tcm_est[i] = static_cast<double>(te);
            if (plan.details) result.details[i] = {s, d, truth, ge, te};
        });

        const AreAae g = reduce_errors(truths, gss_est);
        const AreAae t = reduce_errors(truths, tcm_est);
        result.gss.are = g.are;
        result.gss.aae = g.aae;
        result.gss.edge_queries = g.used;
        result.gss.zero_true_excluded = g.excluded;
        result.tcm.are = t.are;
        result.tcm.aae = t.aae;
        result.tcm.edge_queries = t.used;
        result.tcm.zero_true_excluded = t.excluded;
    }

    // Node queries over every node: successor/precursor precision and
    // out-weight errors.
    if (plan.node_queries) {
        const size_t n = graph.nodes();
        std::vector<double> truths(n), gss_est(n), tcm_est(n);
        std::vector<double> gss_prec(n), tcm_prec(n), gss_pre_prec(n), tcm_pre_prec(n);
        std::vector<int> prec_fail(n, 0);

        // Exact precursor sets, derived once; same present-edge rule as
        // successor_ids.
        std::vector<std::vector<std::string>> pred_ids(n);
        for (uint32_t u = 0; u < n; ++u)
            for (const auto& [v, w] : graph.out(u))
                if (w > 0) pred_ids[v].push_back(graph.id(u));

        parallel_for(n, plan.threads, [&](size_t i) {
            const uint32_t u = static_cast<uint32_t>(i);
            const std::string& id = graph.id(u);

            truths[i] = static_cast<double>(graph.out_weight(u));
            gss_est[i] = static_cast<double>(node_out_weight(gss, id));
            tcm_est[i] = static_cast<double>(tcm.node_out_weight(id));

            auto precision_of = [&](std::vector<std::string> exact,
                                    std::vector<std::string> reported) {
                std::sort(exact.begin(), exact.end());
                exact.erase(std::unique(exact.begin(), exact.end()), exact.end());
                std::sort(reported.begin(), reported.end());
                reported.erase(std::unique(reported.begin(), reported.end()), reported.end());
                if (!std::includes(reported.begin(), reported.end(), exact.begin(),
                                   exact.end())) {
                    prec_fail[i] = 1;
                    return 0.0;
                }
                if (reported.empty()) return 1.0;
                return static_cast<double>(exact.size()) / reported.size();
            };

            auto flatten = [](const std::vector<NodeGroup>& groups) {
                std::vector<std::string> ids;
                for (const auto& g : groups)
                    for (const auto& s : g.ids) ids.push_back(s);
                return ids;
            };

            gss_prec[i] = precision_of(graph.successor_ids(u), flatten(gss.successors(id)));
            tcm_prec[i] = precision_of(graph.successor_ids(u), tcm.successors(id));
            gss_pre_prec[i] = precision_of(pred_ids[u], flatten(gss.precursors(id)));
            tcm_pre_prec[i] = precision_of(pred_ids[u], tcm.precursors(id));
        });

        for (int f : prec_fail)
            if (f)
                throw std::runtime_error(
                    "precision invariant violated: reported set missing a true neighbour");

        const AreAae g = reduce_errors(truths, gss_est);
        const AreAae t = reduce_errors(truths, tcm_est);
        result.gss.node_are = g.are;
        result.gss.node_aae = g.aae;
        result.gss.node_queries = n;
        result.gss.node_zero_true_excluded = g.excluded;
        result.tcm.node_are = t.are;
        result.tcm.node_aae = t.aae;
        result.tcm.node_queries = n;
        result.tcm.node_zero_true_excluded = t.excluded;

        auto mean = [](const std::vector<double>& v) {
            if (v.empty()) return 1.0;
            double s = 0;
            for (double x : v) s += x;
            return s / v.size();
        };
        result.gss.avg_precision = mean(gss_prec);
        result.tcm.avg_precision = mean(tcm_prec);
        result.gss.precursor_precision = mean(gss_pre_prec);
        result.tcm.precursor_precision = mean(tcm_pre_prec);
    }

    // Reachability over oracle-verified unreachable pairs.
    if (plan.tnr_pairs > 0 && graph.nodes() >= 2) {
        std::mt19937_64 rng(plan.seed);
        std::vector<std::pair<uint32_t, uint32_t>> pairs;
        const size_t max_attempts = 200 * plan.tnr_pairs;
        for (size_t attempt = 0; attempt < max_attempts && pairs.size() < plan.tnr_pairs;
             ++attempt) {
            const uint32_t s = static_cast<uint32_t>(rng() % graph.nodes());
            const uint32_t d = static_cast<uint32_t>(rng() % graph.nodes());
            if (s == d) continue;
            if (!graph.reachable(s, d)) pairs.emplace_back(s, d);
        }
        std::vector<uint8_t> gss_neg(pairs.size(), 0), tcm_neg(pairs.size(), 0);
        parallel_for(pairs.size(), plan.threads, [&](size_t i) {
            const auto [s, d] = pairs[i];
            gss_neg[i] = !reachable(gss, graph.id(s), graph.id(d)).reachable;
            tcm_neg[i] = !tcm.reachable(graph.id(s), graph.id(d)).reachable;
        });
        result.gss.tnr_pairs_answered = pairs.size();
        result.tcm.tnr_pairs_answered = pairs.size();
        result.gss.tnr = metrics::true_negative_recall(
            std::vector<bool>(gss_neg.begin(), gss_neg.end()));
        result.tcm.tnr = metrics::true_negative_recall(
            std::vector<bool>(tcm_neg.begin(), tcm_neg.end()));
    }

    return result;
}

namespace {

nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["memory_bytes"] = r.memory_bytes;
    j["edge_are"] = r.are;
    j["edge_aae"] = r.aae;
    j["node_are"] = r.node_are;
    j["node_aae"] = r.node_aae;
    j["successor_precision"] = r.avg_precision;
    j["precursor_precision"] = r.precursor_precision;
    j["tnr"] = r.tnr;
    j["buffer_pct"] = r.buffer_pct;
    j["edge_queries"] = r.edge_queries;
    j["node_queries"] = r.node_queries;
    j["zero_true_excluded"] = r.zero_true_excluded;
    j["node_zero_true_excluded"] = r.node_zero_true_excluded;
    j["tnr_pairs"] = r.tnr_pairs_answered;
    if (r.ingest_seconds) j["ingest_seconds"] = *r.ingest_seconds;
    if (r.items_per_second) j["items_per_second"] = *r.items_per_second;
    return j;
}

}  // namespace

std::string experiment_json(const ExperimentResult& result, const SketchConfig& gss_cfg,
                            const TcmConfig& tcm_cfg, const QueryPlan& plan) {
    nlohmann::ordered_json j;
    j["schema"] = "gss-eval/1";
    j["items"] = result.items;
    j["distinct_nodes"] = result.distinct_nodes;
    j["distinct_edges"] = result.distinct_edges;
    j["gss_config"] = {{"m", gss_cfg.m},          {"fbits", gss_cfg.fbits},
                       {"r", gss_cfg.r},          {"k", gss_cfg.k},
                       {"l", gss_cfg.l},          {"lcg_a", gss_cfg.lcg_a},
                       {"lcg_b", gss_cfg.lcg_b},  {"lcg_p", gss_cfg.lcg_p},
                       {"hash_seed", gss_cfg.hash_seed}};
    j["tcm_config"] = {{"depth", tcm_cfg.depth},
                       {"side", tcm_cfg.side},
                       {"hash_seed", tcm_cfg.hash_seed}};
    j["plan"] = {{"tnr_pairs", plan.tnr_pairs}, {"seed", plan.seed}};
    j["gss"] = report_json(result.gss);
    j["tcm"] = report_json(result.tcm);
    if (!result.details.empty()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& d : result.details)
            rows.push_back({{"src", d.src},
                            {"dst", d.dst},
                            {"true", d.truth},
                            {"gss", d.gss_estimate},
                            {"tcm", d.tcm_estimate}});
        j["edge_query_details"] = std::move(rows);
    }
    return j.dump(2) + "\n";
}

std::string experiment_csv(const ExperimentResult& result, const SketchConfig& gss_cfg,
                           const TcmConfig& tcm_cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "structure,side,fbits,r,k,l,depth,memory_bytes,edge_are,edge_aae,node_are,"
          "node_aae,successor_precision,precursor_precision,tnr,buffer_pct,items,"
          "distinct_edges,distinct_nodes\n";
    const auto row = [&](const EvalReport& r, const std::string& side, const std::string& fb,
                         const std::string& rr, const std::string& kk, const std::string& ll,
                         const std::string& depth) {
        os << r.structure << ',' << side << ',' << fb << ',' << rr << ',' << kk << ',' << ll
           << ',' << depth << ',' << r.memory_bytes << ',' << r.are << ',' << r.aae << ','
           << r.node_are << ',' << r.node_aae << ',' << r.avg_precision << ','
           << r.precursor_precision << ',' << r.tnr << ',' << r.buffer_pct << ','
           << result.items << ',' << result.distinct_edges << ',' << result.distinct_nodes
           << '\n';
    };
    row(result.gss, std::to_string(gss_cfg.m), std::to_string(gss_cfg.fbits),
        std::to_string(gss_cfg.r), std::to_string(gss_cfg.k), std::to_string(gss_cfg.l), "");
    row(result.tcm, std::to_string(tcm_cfg.side), "", "", "", "",
        std::to_string(tcm_cfg.depth));
    return os.str();
}

}  // namespace gss
