#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memgc/graph.hpp"

namespace memgc {

struct BaselineParams {
  double dart_pivot_fraction = 0.02;
  double adjacent_threshold = 0.7;
};

// retention_count ids kept uniformly at random without replacement; the
// output preserves input order.
std::vector<std::int64_t> random_select(const std::vector<std::int64_t>& ids,
                                        std::size_t retention_count,
                                        std::uint64_t seed);

// k-means into exactly retention_count clusters, keeping the member with the
// highest cosine to each centroid. Returns ids ascending.
std::vector<std::int64_t> cluster_center_select(const std::vector<IdEmbedding>& nodes,
                                                std::size_t retention_count,
                                                std::uint64_t seed);

// Seeded uniform pivots (max(1, round(N * pivot_fraction)), always retained);
// non-pivots are removed in descending order of total similarity to the pivot
// set until retention_count remain. If retention_count is below the pivot
// count the pivots themselves are trimmed in ascending total similarity to
// the other pivots. Returns ids ascending.
std::vector<std::int64_t> dart_select(const std::vector<IdEmbedding>& nodes,
                                      std::size_t retention_count,
                                      double pivot_fraction,
                                      std::uint64_t seed);

// nodes must be in chronological order. One left-to-right pass drops the
// earlier of any adjacent pair whose similarity exceeds the threshold, then
// FIFO eviction (oldest first) trims to retention_count. May return fewer
// than retention_count only when the first pass alone drops below it.
// Returns ids ascending.
std::vector<std::int64_t> adjacent_fifo_select(const std::vector<IdEmbedding>& nodes,
                                               std::size_t retention_count,
                                               double threshold);

// nodes must be in chronological order. Streams into a fixed-capacity bank;
// once full, each arrival evicts the bank member most similar to it (ties to
// the older member) before being inserted. Returns ids ascending.
std::vector<std::int64_t> capacity_evict_select(const std::vector<IdEmbedding>& nodes,
                                                std::size_t capacity);

}  // namespace memgc
