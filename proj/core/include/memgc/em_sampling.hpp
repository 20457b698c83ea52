#pragma once

#include <cstdint>
#include <vector>

#include "memgc/graph.hpp"
#include "memgc/vecmath.hpp"

namespace memgc {

struct EMConfig {
  double clustering_ratio = 0.05;  // a: clusters = max(1, round(N * a))
  double retention_ratio = 1.0;    // alpha: kept = max(1, round(N * alpha))
  std::uint64_t seed = 0;
};

// Greedy minmax (farthest-point) pick. The first selection maximizes cosine
// to the centroid; each later one maximizes the minimum Euclidean distance to
// the already-selected set. Ties break to the lowest index. Returned indices
// are in selection order.
std::vector<std::size_t> minmax_sample(const std::vector<std::vector<double>>& embeddings,
                                       const std::vector<double>& centroid,
                                       std::size_t count);

struct EmDetail {
  ClusterAssignment clusters;        // over the input order
  std::vector<std::int64_t> quotas;  // per cluster, sums to the global target
  std::vector<std::vector<std::int64_t>> selected;  // per cluster, selection order
};

// Cluster the isolated branch, split the retention budget across clusters by
// largest remainder (ties to the lower cluster index), then minmax-sample
// each cluster. Returns retained ids ascending.
std::vector<std::int64_t> em_select(const std::vector<IdEmbedding>& isolated_nodes,
                                    const EMConfig& cfg,
                                    EmDetail* detail = nullptr);

// Max over points of the min Euclidean distance to the selected subset.
double covering_radius(const std::vector<std::vector<double>>& points,
                       const std::vector<std::size_t>& selected);

}  // namespace memgc
