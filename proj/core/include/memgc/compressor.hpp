#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "memgc/baselines.hpp"
#include "memgc/graph.hpp"

namespace memgc {

enum class CompressionMethod { streammeco, random, clustering, dart, adjacent_fifo, capacity_evict };

struct CompressionConfig {
  double ratio = 0.0;              // c: fraction removed; per-branch retention is 1 - c
  double clustering_ratio = 0.05;  // a, isolated branch
  double balance = 0.1;            // b, connected branch
  std::uint64_t seed = 0;
  // Advanced: decouple the two branch retention ratios from 1 - c.
  std::optional<double> isolated_retention;
  std::optional<double> connected_retention;
};

struct CompressionReport {
  std::string method;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> retained_isolated;   // ascending
  std::vector<std::int64_t> retained_connected;  // ascending
  std::vector<std::int64_t> removed;             // ascending
  double retained_score_sum = 0.0;  // connected branch, fused scores of kept nodes
  double total_score_sum = 0.0;     // connected branch, all nodes
  std::vector<double> cluster_covering_radii;  // isolated branch, NaN where a cluster kept nothing
  double seconds = 0.0;
};

// Minmax sampling over the isolated branch plus weighted pruning over the
// connected branch, both at retention 1 - ratio. Entity nodes are never
// removed. The input graph must validate.
std::pair<MemoryGraph, CompressionReport> compress(const MemoryGraph& graph,
                                                   const CompressionConfig& cfg);

// Same contract under an alternative eviction policy. random/clustering/dart
// run per branch; adjacent_fifo and capacity_evict run chronologically over
// all text nodes with a total budget of max(1, round((1 - ratio) * N)).
std::pair<MemoryGraph, CompressionReport> compress_with(CompressionMethod method,
                                                        const MemoryGraph& graph,
                                                        double ratio,
                                                        std::uint64_t seed,
                                                        const BaselineParams& params = {});

// Structured-text report file (timing field included).
void write_report(const CompressionReport& report, const std::string& path);

std::string to_string(CompressionMethod method);
std::optional<CompressionMethod> method_from_string(const std::string& name);

}  // namespace memgc
