#include <benchmark/benchmark.h>

#include "memgc/benchkit.hpp"
#include "memgc/retrieval.hpp"
#include "memgc/rng.hpp"
#include "memgc/vecmath.hpp"

namespace {

const memgc::MemoryGraph& flat_graph(std::int64_t n) {
  static std::map<std::int64_t, memgc::MemoryGraph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    memgc::GenConfig cfg;
    cfg.n_text = n;
    cfg.n_segments = 40;
    cfg.connected_fraction = 0.0;
    cfg.n_entities = 0;
    cfg.seed = 7;
    it = cache.emplace(n, memgc::generate(cfg)).first;
  }
  return it->second;
}

std::vector<double> query_vec(int dim) {
  memgc::Rng rng(99);
  std::vector<double> q(dim);
  for (double& x : q) x = rng.gaussian();
  return memgc::normalize(std::move(q));
}

void BM_character_topk(benchmark::State& state) {
  const auto& graph = flat_graph(state.range(0));
  const auto query = query_vec(graph.embedding_dim);
  for (auto _ : state) {
    auto nodes = memgc::character_topk(graph, query, 10);
    benchmark::DoNotOptimize(nodes);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_character_topk)->Arg(10000)->Arg(20000)->Arg(40000)->Complexity();

void BM_tmr_retrieve(benchmark::State& state) {
  const auto& graph = flat_graph(state.range(0));
  const auto query = query_vec(graph.embedding_dim);
  memgc::RetrievalConfig cfg;
  for (auto _ : state) {
    auto result = memgc::tmr_retrieve(graph, query, cfg);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_tmr_retrieve)->Arg(10000)->Arg(20000)->Arg(40000)->Complexity();

}  // namespace
