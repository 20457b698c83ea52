#pragma once

#include <cstdint>
#include <vector>

#include "memgc/graph.hpp"

namespace memgc {

struct EWConfig {
  double retention_ratio = 1.0;  // beta: kept = max(1, round(N * beta))
  double balance = 0.1;          // b: entity importance vs embedding diversity
};

// Column sums of the entity->text weight matrix, min-max normalized to [0, 1].
// A constant column-sum vector maps to all 0.5.
std::vector<double> entity_importance(const std::vector<std::vector<double>>& weight_matrix);

// Row sums of the similarity matrix excluding the diagonal, min-max
// normalized and inverted: high score means dissimilar to the rest. A
// constant row-sum vector maps to all 0.5.
std::vector<double> diversity_score(const std::vector<std::vector<double>>& similarity);

// r = balance * importance + (1 - balance) * diversity, elementwise.
std::vector<double> fusion_score(const std::vector<double>& importance,
                                 const std::vector<double>& diversity,
                                 double balance);

// Keeps the max(1, round(N * beta)) connected nodes with the highest fusion
// score; ties break to the lower id. Every node passed in must appear in at
// least one edge. Returns retained ids ascending; scores_out, when given,
// receives the fusion scores in input order.
std::vector<std::int64_t> ew_select(const std::vector<IdEmbedding>& connected_nodes,
                                    const std::vector<Edge>& entity_edges,
                                    const EWConfig& cfg,
                                    std::vector<double>* scores_out = nullptr);

}  // namespace memgc
