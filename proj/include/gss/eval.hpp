#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gss/config.hpp"
#include "gss/sketch.hpp"
#include "gss/stream.hpp"
#include "gss/tcm.hpp"

namespace gss {

struct QueryPlan {
    bool edge_queries = true;
    bool node_queries = true;
    size_t tnr_pairs = 100;
    uint64_t seed = 1;
    unsigned threads = 1;
    bool timing = false;   // wall-clock fields are opt-in to keep output deterministic
    bool details = false;  // per-edge-query table in the JSON report
};

struct EvalReport {
    std::string structure;
    size_t memory_bytes = 0;
    double are = 0;
    double aae = 0;
    double node_are = 0;
    double node_aae = 0;
    double avg_precision = 1;
    double precursor_precision = 1;
    double tnr = 1;
    double buffer_pct = 0;
    size_t edge_queries = 0;
    size_t node_queries = 0;
    size_t zero_true_excluded = 0;
    size_t node_zero_true_excluded = 0;
    size_t tnr_pairs_answered = 0;
    std::optional<double> ingest_seconds;
    std::optional<double> items_per_second;
};

struct EdgeQueryDetail {
    std::string src, dst;
    int64_t truth = 0;
    int64_t gss_estimate = 0;
    int64_t tcm_estimate = 0;
};

struct ExperimentResult {
    size_t items = 0;
    size_t distinct_nodes = 0;
    size_t distinct_edges = 0;
    EvalReport gss;
    EvalReport tcm;
    std::vector<EdgeQueryDetail> details;
};

// Ingests the stream into GSS, TCM and an exact in-memory graph, then runs
// the query plan (all distinct edges, all nodes, sampled oracle-verified
// unreachable pairs) against both structures.
ExperimentResult run_experiment(const std::vector<StreamItem>& stream,
                                const SketchConfig& gss_cfg, const TcmConfig& tcm_cfg,
                                const QueryPlan& plan);

std::string experiment_json(const ExperimentResult& result, const SketchConfig& gss_cfg,
                            const TcmConfig& tcm_cfg, const QueryPlan& plan);

// One row per structure, for plotting.
std::string experiment_csv(const ExperimentResult& result, const SketchConfig& gss_cfg,
                           const TcmConfig& tcm_cfg);

// TCM side length that spends ratio x the GSS matrix memory across depth
// counter matrices.
uint32_t tcm_side_for_memory(const SketchConfig& gss_cfg, uint32_t depth, double ratio);

}  // namespace gss
