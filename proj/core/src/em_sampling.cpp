#include "memgc/em_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace memgc {

std::vector<std::size_t> minmax_sample(const std::vector<std::vector<double>>& embeddings,
                                       const std::vector<double>& centroid,
                                       std::size_t count) {
  const std::size_t n = embeddings.size();
  if (n == 0) throw std::invalid_argument("minmax_sample: empty input");
  if (count < 1 || count > n) throw std::invalid_argument("minmax_sample: count out of range");
  for (const auto& e : embeddings)
    if (e.size() != centroid.size())
      throw std::invalid_argument("minmax_sample: dimension mismatch");

  std::vector<char> taken(n, 0);
  std::vector<std::size_t> selected;
  selected.reserve(count);

  std::size_t first = 0;
  double best = cosine(embeddings[0], centroid);
  for (std::size_t i = 1; i < n; ++i) {
    const double c = cosine(embeddings[i], centroid);
    if (c > best) {
      best = c;
      first = i;
    }
  }
  selected.push_back(first);
  taken[first] = 1;

  std::vector<double> min_dist(n);
  for (std::size_t i = 0; i < n; ++i) min_dist[i] = euclidean(embeddings[i], embeddings[first]);

  while (selected.size() < count) {
    std::size_t next = n;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (min_dist[i] > far) {
        far = min_dist[i];
        next = i;
      }
    }
    selected.push_back(next);
    taken[next] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = euclidean(embeddings[i], embeddings[next]);
      if (d < min_dist[i]) min_dist[i] = d;
    }
  }
  return selected;
}

double covering_radius(const std::vector<std::vector<double>>& points,
                       const std::vector<std::size_t>& selected) {
  if (points.empty() || selected.empty())
    throw std::invalid_argument("covering_radius: empty input");
  double radius = 0.0;
  for (const auto& p : points) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t s : selected) {
      if (s >= points.size()) throw std::invalid_argument("covering_radius: index out of range");
      const double d = euclidean(p, points[s]);
      if (d < nearest) nearest = d;
    }
    if (nearest > radius) radius = nearest;
  }
  return radius;
}

std::vector<std::int64_t> em_select(const std::vector<IdEmbedding>& isolated_nodes,
                                    const EMConfig& cfg,
                                    EmDetail* detail) {
  const std::size_t n = isolated_nodes.size();
  if (n == 0) throw std::invalid_argument("em_select: empty input");
  if (!(cfg.clustering_ratio > 0.0) || cfg.clustering_ratio > 1.0)
    throw std::invalid_argument("em_select: clustering_ratio out of (0, 1]");
  if (!(cfg.retention_ratio > 0.0) || cfg.retention_ratio > 1.0)
    throw std::invalid_argument("em_select: retention_ratio out of (0, 1]");

  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(n);
  for (const auto& [id, emb] : isolated_nodes) embeddings.push_back(emb);

  const std::int64_t k =
      std::max<std::int64_t>(1, round_half_up(static_cast<double>(n) * cfg.clustering_ratio));
  const std::int64_t target =
      std::max<std::int64_t>(1, round_half_up(static_cast<double>(n) * cfg.retention_ratio));

  ClusterAssignment clusters =
      spherical_kmeans(embeddings, static_cast<int>(k), cfg.seed);

  // Members per cluster, ordered by node id so index ties equal id ties.
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i)
    members[static_cast<std::size_t>(clusters.assignments[i])].push_back(i);
  for (auto& m : members)
    std::sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
      return isolated_nodes[a].first < isolated_nodes[b].first;
    });

  // Largest-remainder split of the global target: floor each cluster's share,
  // then hand out the remainder by descending fractional part, ties to the
  // lower cluster index.
  std::vector<std::int64_t> quotas(static_cast<std::size_t>(k));
  std::vector<double> fractional(static_cast<std::size_t>(k));
  std::int64_t assigned = 0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
    const double share = static_cast<double>(members[j].size()) * cfg.retention_ratio;
    quotas[j] = static_cast<std::int64_t>(std::floor(share));
    fractional[j] = share - std::floor(share);
    assigned += quotas[j];
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fractional[a] > fractional[b];
  });
  std::int64_t residual = target - assigned;
  while (residual > 0) {
    bool placed = false;
    for (std::size_t j : order) {
      if (residual == 0) break;
      if (quotas[j] < static_cast<std::int64_t>(members[j].size())) {
        ++quotas[j];
        --residual;
        placed = true;
      }
    }
    if (!placed) break;  // every cluster saturated; target == n was already met
  }

  std::vector<std::int64_t> retained;
  retained.reserve(static_cast<std::size_t>(target));
  std::vector<std::vector<std::int64_t>> per_cluster(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
    if (quotas[j] == 0) continue;
    std::vector<std::vector<double>> cluster_embs;
    cluster_embs.reserve(members[j].size());
    for (std::size_t idx : members[j]) cluster_embs.push_back(embeddings[idx]);
    const auto picks = minmax_sample(cluster_embs, clusters.centroids[j],
                                     static_cast<std::size_t>(quotas[j]));
    for (std::size_t p : picks) {
      const std::int64_t id = isolated_nodes[members[j][p]].first;
      per_cluster[j].push_back(id);
      retained.push_back(id);
    }
  }
  std::sort(retained.begin(), retained.end());

  if (detail) {
    detail->clusters = std::move(clusters);
    detail->quotas = std::move(quotas);
    detail->selected = std::move(per_cluster);
  }
  return retained;
}

}  // namespace memgc
