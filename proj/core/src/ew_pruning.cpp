#include "memgc/ew_pruning.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "memgc/vecmath.hpp"

namespace memgc {

namespace {

// Degenerate spread (max == min) maps every entry to 0.5.
std::vector<double> min_max(const std::vector<double>& xs) {
  double lo = xs[0], hi = xs[0];
  for (double x : xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> out(xs.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - lo) / (hi - lo);
  }
  return out;
}

}  // namespace

std::vector<double> entity_importance(const std::vector<std::vector<double>>& weight_matrix) {
  if (weight_matrix.empty() || weight_matrix[0].empty())
    throw std::invalid_argument("entity_importance: empty matrix");
  const std::size_t cols = weight_matrix[0].size();
  for (const auto& row : weight_matrix)
    if (row.size() != cols) throw std::invalid_argument("entity_importance: ragged matrix");

  std::vector<double> sums(cols, 0.0);
  for (const auto& row : weight_matrix)
    for (std::size_t j = 0; j < cols; ++j) sums[j] += row[j];
  return min_max(sums);
}

std::vector<double> diversity_score(const std::vector<std::vector<double>>& similarity) {
  const std::size_t n = similarity.size();
  if (n == 0) throw std::invalid_argument("diversity_score: empty matrix");
  for (const auto& row : similarity)
    if (row.size() != n) throw std::invalid_argument("diversity_score: matrix not square");

  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[i] += similarity[i][j];
  std::vector<double> out = min_max(sums);
  for (double& x : out) x = 1.0 - x;
  return out;
}

std::vector<double> fusion_score(const std::vector<double>& importance,
                                 const std::vector<double>& diversity,
                                 double balance) {
  if (importance.size() != diversity.size() || importance.empty())
    throw std::invalid_argument("fusion_score: length mismatch");
  if (balance < 0.0 || balance > 1.0)
    throw std::invalid_argument("fusion_score: balance out of [0, 1]");
  std::vector<double> out(importance.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = balance * importance[i] + (1.0 - balance) * diversity[i];
  return out;
}

std::vector<std::int64_t> ew_select(const std::vector<IdEmbedding>& connected_nodes,
                                    const std::vector<Edge>& entity_edges,
                                    const EWConfig& cfg,
                                    std::vector<double>* scores_out) {
  const std::size_t n = connected_nodes.size();
  if (n == 0) throw std::invalid_argument("ew_select: empty input");
  if (!(cfg.retention_ratio > 0.0) || cfg.retention_ratio > 1.0)
    throw std::invalid_argument("ew_select: retention_ratio out of (0, 1]");
  if (cfg.balance < 0.0 || cfg.balance > 1.0)
    throw std::invalid_argument("ew_select: balance out of [0, 1]");

  std::unordered_map<std::int64_t, std::size_t> col;
  col.reserve(n);
  for (std::size_t j = 0; j < n; ++j) col[connected_nodes[j].first] = j;

  // Rows of the weight matrix are the distinct entity ids, ascending, so the
  // matrix does not depend on edge order.
  std::vector<std::int64_t> entities;
  for (const auto& edge : entity_edges) entities.push_back(edge.entity_id);
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  if (entities.empty()) throw std::invalid_argument("ew_select: no edges");
  std::unordered_map<std::int64_t, std::size_t> row;
  row.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) row[entities[i]] = i;

  std::vector<std::vector<double>> weights(entities.size(), std::vector<double>(n, 0.0));
  std::vector<char> has_edge(n, 0);
  for (const auto& edge : entity_edges) {
    auto it = col.find(edge.text_id);
    if (it == col.end())
      throw std::invalid_argument("ew_select: edge references text id " +
                                  std::to_string(edge.text_id) + " outside the branch");
    weights[row[edge.entity_id]][it->second] += edge.weight;
    has_edge[it->second] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!has_edge[j])
      throw std::invalid_argument("ew_select: node " +
                                  std::to_string(connected_nodes[j].first) +
                                  " has no edges; it belongs to the isolated branch");
  }

  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(n);
  for (const auto& [id, emb] : connected_nodes) embeddings.push_back(emb);

  const std::vector<double> importance = entity_importance(weights);
  const std::vector<double> diversity = diversity_score(pairwise_similarity(embeddings));
  const std::vector<double> fused = fusion_score(importance, diversity, cfg.balance);

  const std::int64_t count =
      std::max<std::int64_t>(1, round_half_up(static_cast<double>(n) * cfg.retention_ratio));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fused[a] != fused[b]) return fused[a] > fused[b];
    return connected_nodes[a].first < connected_nodes[b].first;
  });

  std::vector<std::int64_t> retained;
  retained.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    retained.push_back(connected_nodes[order[static_cast<std::size_t>(i)]].first);
  std::sort(retained.begin(), retained.end());

  if (scores_out) *scores_out = fused;
  return retained;
}

}  // namespace memgc
