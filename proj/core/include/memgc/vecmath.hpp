#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace memgc {

// Rounding rule for every count derived from a real-valued ratio.
inline std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

// v / ||v||; a zero-norm vector is an error.
std::vector<double> normalize(std::vector<double> v);

double cosine(const std::vector<double>& u, const std::vector<double>& v);
double euclidean(const std::vector<double>& u, const std::vector<double>& v);

// Dense symmetric similarity matrix; the diagonal is exactly 1.
std::vector<std::vector<double>> pairwise_similarity(
    const std::vector<std::vector<double>>& embeddings);

struct ClusterAssignment {
  std::vector<int> assignments;  // one per input point
  std::vector<std::vector<double>> centroids;  // unit norm, one per cluster
  int n_clusters = 0;
};

struct KMeansOptions {
  int max_iters = 100;
  double tol = 1e-6;  // mean centroid movement below this stops the loop
};

// Spherical k-means: kmeans++ seeding on cosine distance (1 - cos), assignment
// to the max-cosine centroid, centroid = normalized member mean. Ties go to
// the lowest cluster index. An emptied cluster is reseeded with the worst-fit
// point (lowest cosine to its own centroid) from a cluster holding at least
// two members, so no returned cluster is empty. Deterministic for a given
// seed; all reductions run in a fixed serial order.
ClusterAssignment spherical_kmeans(const std::vector<std::vector<double>>& embeddings,
                                   int n_clusters,
                                   std::uint64_t seed,
                                   const KMeansOptions& opts = {});

}  // namespace memgc
