#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memgc/compressor.hpp"
#include "memgc/graph.hpp"
#include "memgc/retrieval.hpp"

namespace memgc {

struct GenConfig {
  std::int64_t n_text = 2000;
  std::int64_t n_entities = 40;
  double connected_fraction = 0.5;  // fraction of text nodes given 1-3 edges
  std::int64_t n_segments = 20;     // clips, assigned in chronological blocks
  std::int64_t n_topics = 10;
  double topic_noise = 0.1;      // per-coordinate sigma around a topic centroid
  double dup_fraction = 0.0;     // near-duplicates of earlier nodes, noise sigma/10
  int embedding_dim = 64;
  std::uint64_t seed = 0;
};

// Synthetic memory graph with planted topic structure. Deterministic for a
// given config; the result validates.
MemoryGraph generate(const GenConfig& cfg);

struct LatencyStats {
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

struct BenchCell {
  std::string policy;
  double ratio = 0.0;
  std::int64_t text_nodes = 0;  // retained
  double compress_seconds = 0.0;
  LatencyStats ss_seconds;  // similarity compute + sort
  LatencyStats tr_seconds;  // full retrieval in the configured mode
  double speedup_ss = 0.0;  // vs the same policy at ratio 0; 0 when absent
  double speedup_tr = 0.0;
  double overlap_topk = 0.0;  // vs the uncompressed character_topk oracle
  double overlap_tmr = 0.0;
  double covering_radius = 0.0;        // isolated branch; NaN when undefined
  double retained_score_fraction = 0.0;  // connected branch; NaN when undefined
};

struct BenchConfig {
  std::vector<CompressionMethod> methods;
  std::vector<double> ratios;
  std::int64_t repeats = 3;  // timed repeats per query, median taken; >= 3
  RetrievalConfig retrieval;
  CompressionConfig compression;  // ratio field is overridden per cell
  BaselineParams baseline;
};

struct BenchReport {
  std::int64_t k = 0;
  std::uint64_t seed = 0;
  std::vector<BenchCell> cells;
};

// Compresses the graph once per (method, ratio) cell, then times retrieval
// over the query set. Timing separates the similarity compute + sort span
// from total retrieval; one warm-up pass per cell is excluded. Quality
// metrics are bit-reproducible under a fixed seed; only timing fields vary.
BenchReport run_bench(const MemoryGraph& graph,
                      const BenchConfig& cfg,
                      const std::vector<std::vector<double>>& queries);

// Flat rows: policy,ratio,metric,value,seed. NaN metrics are omitted.
void write_bench_csv(const BenchReport& report, const std::string& path);
void write_bench_json(const BenchReport& report, const std::string& path);

}  // namespace memgc
