#include <benchmark/benchmark.h>

#include "memgc/benchkit.hpp"
#include "memgc/vecmath.hpp"

namespace {

const memgc::MemoryGraph& graph_of(std::int64_t n) {
  static std::map<std::int64_t, memgc::MemoryGraph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    memgc::GenConfig cfg;
    cfg.n_text = n;
    cfg.connected_fraction = 0.0;
    cfg.n_entities = 0;
    cfg.seed = 7;
    it = cache.emplace(n, memgc::generate(cfg)).first;
  }
  return it->second;
}

void BM_pairwise_similarity(benchmark::State& state) {
  const auto& graph = graph_of(state.range(0));
  std::vector<std::vector<double>> embs;
  for (const auto& node : graph.text_nodes) embs.push_back(node.embedding);
  for (auto _ : state) {
    auto s = memgc::pairwise_similarity(embs);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_pairwise_similarity)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_spherical_kmeans(benchmark::State& state) {
  const auto& graph = graph_of(state.range(0));
  std::vector<std::vector<double>> embs;
  for (const auto& node : graph.text_nodes) embs.push_back(node.embedding);
  const int k = static_cast<int>(state.range(0) / 20);
  for (auto _ : state) {
    auto clusters = memgc::spherical_kmeans(embs, k, 11);
    benchmark::DoNotOptimize(clusters);
  }
}
BENCHMARK(BM_spherical_kmeans)->Arg(1000)->Arg(2000)->Arg(4000);

}  // namespace
