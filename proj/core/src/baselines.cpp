#include "memgc/baselines.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "memgc/rng.hpp"
#include "memgc/vecmath.hpp"

namespace memgc {

namespace {

void check_count(std::size_t count, std::size_t n, const char* who) {
  if (count < 1 || count > n)
    throw std::invalid_argument(std::string(who) + ": retention count out of range");
}

std::vector<std::int64_t> sorted_ids(std::vector<std::int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::vector<std::int64_t> random_select(const std::vector<std::int64_t>& ids,
                                        std::size_t retention_count,
                                        std::uint64_t seed) {
  check_count(retention_count, ids.size(), "random_select");
  Rng rng(seed);
  const auto picks = sample_indices(rng, ids.size(), retention_count);
  std::vector<std::int64_t> out;
  out.reserve(retention_count);
  for (std::size_t i : picks) out.push_back(ids[i]);  // picks ascend, order preserved
  return out;
}

std::vector<std::int64_t> cluster_center_select(const std::vector<IdEmbedding>& nodes,
                                                std::size_t retention_count,
                                                std::uint64_t seed) {
  check_count(retention_count, nodes.size(), "cluster_center_select");
  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(nodes.size());
  for (const auto& [id, emb] : nodes) embeddings.push_back(emb);

  const ClusterAssignment clusters =
      spherical_kmeans(embeddings, static_cast<int>(retention_count), seed);

  std::vector<std::int64_t> best_id(retention_count, -1);
  std::vector<double> best_fit(retention_count, 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t j = static_cast<std::size_t>(clusters.assignments[i]);
    const double fit = cosine(embeddings[i], clusters.centroids[j]);
    if (best_id[j] < 0 || fit > best_fit[j] ||
        (fit == best_fit[j] && nodes[i].first < best_id[j])) {
      best_id[j] = nodes[i].first;
      best_fit[j] = fit;
    }
  }
  return sorted_ids(std::vector<std::int64_t>(best_id.begin(), best_id.end()));
}

std::vector<std::int64_t> dart_select(const std::vector<IdEmbedding>& nodes,
                                      std::size_t retention_count,
                                      double pivot_fraction,
                                      std::uint64_t seed) {
  const std::size_t n = nodes.size();
  check_count(retention_count, n, "dart_select");
  if (!(pivot_fraction > 0.0) || pivot_fraction > 1.0)
    throw std::invalid_argument("dart_select: pivot_fraction out of (0, 1]");

  const std::size_t pivot_count = static_cast<std::size_t>(
      std::max<std::int64_t>(1, round_half_up(static_cast<double>(n) * pivot_fraction)));
  Rng rng(seed);
  const auto pivot_idx = sample_indices(rng, n, pivot_count);
  std::vector<char> is_pivot(n, 0);
  for (std::size_t p : pivot_idx) is_pivot[p] = 1;

  if (retention_count >= pivot_count) {
    // Score non-pivots by total similarity to the pivot set; drop the most
    // redundant first.
    std::vector<std::size_t> rest;
    std::vector<double> sim(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (is_pivot[i]) continue;
      rest.push_back(i);
      for (std::size_t p : pivot_idx) sim[i] += cosine(nodes[i].second, nodes[p].second);
    }
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      if (sim[a] != sim[b]) return sim[a] > sim[b];
      return nodes[a].first < nodes[b].first;
    });
    const std::size_t remove = n - retention_count;
    std::vector<std::int64_t> out;
    out.reserve(retention_count);
    for (std::size_t p : pivot_idx) out.push_back(nodes[p].first);
    for (std::size_t i = remove; i < rest.size(); ++i) out.push_back(nodes[rest[i]].first);
    return sorted_ids(std::move(out));
  }

  // Degenerate budget: fewer slots than pivots. The pivot set itself is
  // trimmed, least similar to the other pivots first.
  std::vector<double> sim(pivot_count, 0.0);
  for (std::size_t a = 0; a < pivot_count; ++a)
    for (std::size_t b = 0; b < pivot_count; ++b)
      if (b != a) sim[a] += cosine(nodes[pivot_idx[a]].second, nodes[pivot_idx[b]].second);
  std::vector<std::size_t> order(pivot_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sim[a] != sim[b]) return sim[a] < sim[b];
    return nodes[pivot_idx[a]].first < nodes[pivot_idx[b]].first;
  });
  std::vector<std::int64_t> out;
  out.reserve(retention_count);
  for (std::size_t i = pivot_count - retention_count; i < pivot_count; ++i)
    out.push_back(nodes[pivot_idx[order[i]]].first);
  return sorted_ids(std::move(out));
}

std::vector<std::int64_t> adjacent_fifo_select(const std::vector<IdEmbedding>& nodes,
                                               std::size_t retention_count,
                                               double threshold) {
  const std::size_t n = nodes.size();
  check_count(retention_count, n, "adjacent_fifo_select");

  // Pass 1: walk the chronological chain once; when a node and its successor
  // exceed the threshold, the earlier one goes. The walk always advances to
  // the successor, so each original adjacent pair is examined exactly once.
  std::deque<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && cosine(nodes[i].second, nodes[i + 1].second) > threshold) continue;
    survivors.push_back(i);
  }

  // Pass 2: FIFO down to the budget.
  while (survivors.size() > retention_count) survivors.pop_front();

  std::vector<std::int64_t> out;
  out.reserve(survivors.size());
  for (std::size_t i : survivors) out.push_back(nodes[i].first);
  return sorted_ids(std::move(out));
}

std::vector<std::int64_t> capacity_evict_select(const std::vector<IdEmbedding>& nodes,
                                                std::size_t capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity_evict_select: capacity must be positive");

  std::vector<std::size_t> bank;  // ascending arrival order
  bank.reserve(capacity);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (bank.size() < capacity) {
      bank.push_back(i);
      continue;
    }
    // Evict the member most similar to the arrival; ties hit the older one.
    std::size_t victim = 0;
    double worst = cosine(nodes[bank[0]].second, nodes[i].second);
    for (std::size_t m = 1; m < bank.size(); ++m) {
      const double s = cosine(nodes[bank[m]].second, nodes[i].second);
      if (s > worst) {
        worst = s;
        victim = m;
      }
    }
    bank.erase(bank.begin() + static_cast<std::ptrdiff_t>(victim));
    bank.push_back(i);
  }

  std::vector<std::int64_t> out;
  out.reserve(bank.size());
  for (std::size_t i : bank) out.push_back(nodes[i].first);
  return sorted_ids(std::move(out));
}

}  // namespace memgc
