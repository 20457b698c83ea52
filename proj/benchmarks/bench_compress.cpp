#include <benchmark/benchmark.h>

#include "memgc/benchkit.hpp"
#include "memgc/compressor.hpp"

namespace {

memgc::MemoryGraph mixed_graph(std::int64_t n) {
  memgc::GenConfig cfg;
  cfg.n_text = n;
  cfg.connected_fraction = 0.5;
  cfg.seed = 7;
  return memgc::generate(cfg);
}

void BM_compress_streammeco(benchmark::State& state) {
  const auto graph = mixed_graph(state.range(0));
  memgc::CompressionConfig cfg;
  cfg.ratio = 0.3;
  cfg.seed = 3;
  for (auto _ : state) {
    auto result = memgc::compress(graph, cfg);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_compress_streammeco)->Arg(1000)->Arg(2500)->Arg(5000)
    ->Complexity()->Unit(benchmark::kMillisecond);

void BM_compress_baseline(benchmark::State& state) {
  const auto graph = mixed_graph(2500);
  const auto method = static_cast<memgc::CompressionMethod>(state.range(0));
  for (auto _ : state) {
    auto result = memgc::compress_with(method, graph, 0.3, 3);
    benchmark::DoNotOptimize(result);
  }
  state.SetLabel(memgc::to_string(method));
}
BENCHMARK(BM_compress_baseline)
    ->Arg(static_cast<int>(memgc::CompressionMethod::random))
    ->Arg(static_cast<int>(memgc::CompressionMethod::clustering))
    ->Arg(static_cast<int>(memgc::CompressionMethod::dart))
    ->Arg(static_cast<int>(memgc::CompressionMethod::adjacent_fifo))
    ->Arg(static_cast<int>(memgc::CompressionMethod::capacity_evict))
    ->Unit(benchmark::kMillisecond);

}  // namespace
