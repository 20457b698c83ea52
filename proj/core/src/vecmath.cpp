#include "memgc/vecmath.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "memgc/rng.hpp"

namespace memgc {

namespace {

double dot(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) acc += a[i] * b[i];
  return acc;
}

void check_dims(const std::vector<std::vector<double>>& embeddings) {
  if (embeddings.empty()) throw std::invalid_argument("empty embedding list");
  const std::size_t dim = embeddings[0].size();
  if (dim == 0) throw std::invalid_argument("zero-dimensional embedding");
  for (const auto& e : embeddings) {
    if (e.size() != dim) throw std::invalid_argument("embedding dimension mismatch");
  }
}

}  // namespace

std::vector<double> normalize(std::vector<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 1e-150)) throw std::invalid_argument("normalize: zero-norm vector");
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size() || u.empty())
    throw std::invalid_argument("cosine: dimension mismatch");
  return dot(u.data(), v.data(), u.size());
}

double euclidean(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size() || u.empty())
    throw std::invalid_argument("euclidean: dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

std::vector<std::vector<double>> pairwise_similarity(
    const std::vector<std::vector<double>>& embeddings) {
  check_dims(embeddings);
  const std::size_t n = embeddings.size();
  const std::size_t dim = embeddings[0].size();
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = dot(embeddings[i].data(), embeddings[j].data(), dim);
      s[i][j] = c;
      s[j][i] = c;
    }
  }
  return s;
}

ClusterAssignment spherical_kmeans(const std::vector<std::vector<double>>& embeddings,
                                   int n_clusters,
                                   std::uint64_t seed,
                                   const KMeansOptions& opts) {
  check_dims(embeddings);
  const std::size_t n = embeddings.size();
  if (n_clusters < 1 || static_cast<std::size_t>(n_clusters) > n)
    throw std::invalid_argument("spherical_kmeans: n_clusters out of range");
  const std::size_t k = static_cast<std::size_t>(n_clusters);
  const std::size_t dim = embeddings[0].size();
  Rng rng(seed);

  // kmeans++ seeding: next center drawn with probability proportional to the
  // squared cosine distance to the nearest chosen center. When every
  // remaining distance is zero (duplicate-heavy inputs) fall back to a
  // uniform pick among unchosen points.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<char> chosen(n, 0);
  std::vector<double> dist(n, 0.0);

  const std::size_t first = static_cast<std::size_t>(rng.uniform_below(n));
  centroids.push_back(embeddings[first]);
  chosen[first] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = dot(embeddings[i].data(), centroids[0].data(), dim);
    dist[i] = chosen[i] ? 0.0 : std::max(0.0, 1.0 - c);
  }

  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i]) total += dist[i] * dist[i];

    std::size_t pick = n;
    if (total > 0.0) {
      const double x = rng.uniform01() * total;
      double cum = 0.0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        const double w = dist[i] * dist[i];
        if (w > 0.0) last_positive = i;
        cum += w;
        if (cum > x) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;  // x landed on the top edge
    }
    if (pick == n) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) rest.push_back(i);
      pick = rest[static_cast<std::size_t>(rng.uniform_below(rest.size()))];
    }

    chosen[pick] = 1;
    centroids.push_back(embeddings[pick]);
    const double* c = centroids.back().data();
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) {
        dist[i] = 0.0;
        continue;
      }
      const double d = std::max(0.0, 1.0 - dot(embeddings[i].data(), c, dim));
      if (d < dist[i]) dist[i] = d;
    }
  }

  std::vector<int> assign(n, 0);
  std::vector<int> prev_assign;
  std::vector<std::size_t> count(k, 0);
#ifndef NDEBUG
  double prev_obj = -std::numeric_limits<double>::infinity();
  bool prev_comparable = false;
#endif

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    prev_assign = assign;

    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_c = dot(embeddings[i].data(), centroids[0].data(), dim);
      for (std::size_t j = 1; j < k; ++j) {
        const double c = dot(embeddings[i].data(), centroids[j].data(), dim);
        if (c > best_c) {
          best_c = c;
          best = static_cast<int>(j);
        }
      }
      assign[i] = best;
    }

    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(assign[i])];

    bool repaired = false;
    for (;;) {
      std::size_t empty = k;
      for (std::size_t j = 0; j < k; ++j) {
        if (count[j] == 0) {
          empty = j;
          break;
        }
      }
      if (empty == k) break;
      // Move the worst-fit point out of a cluster that can spare one.
      std::size_t donor = n;
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = static_cast<std::size_t>(assign[i]);
        if (count[a] < 2) continue;
        const double fit = dot(embeddings[i].data(), centroids[a].data(), dim);
        if (fit < worst) {
          worst = fit;
          donor = i;
        }
      }
      --count[static_cast<std::size_t>(assign[donor])];
      assign[donor] = static_cast<int>(empty);
      count[empty] = 1;
      repaired = true;
    }

    if (iter > 0 && assign == prev_assign) break;

    double movement = 0.0;
    std::vector<double> mean(dim);
    for (std::size_t j = 0; j < k; ++j) {
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::size_t>(assign[i]) != j) continue;
        for (std::size_t d = 0; d < dim; ++d) mean[d] += embeddings[i][d];
      }
      double sq = 0.0;
      for (double x : mean) sq += x * x;
      if (sq > 1e-300) {  // antipodal members can cancel; keep the old centroid then
        const double inv = 1.0 / std::sqrt(sq);
        for (double& x : mean) x *= inv;
        movement += euclidean(mean, centroids[j]);
        centroids[j] = mean;
      }
    }

#ifndef NDEBUG
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj += dot(embeddings[i].data(),
                 centroids[static_cast<std::size_t>(assign[i])].data(), dim);
    if (prev_comparable && !repaired) assert(obj >= prev_obj - 1e-9);
    prev_obj = obj;
    prev_comparable = true;
#endif

    if (movement / static_cast<double>(k) < opts.tol) break;
  }

  return ClusterAssignment{std::move(assign), std::move(centroids),
                           static_cast<int>(k)};
}

}  // namespace memgc
