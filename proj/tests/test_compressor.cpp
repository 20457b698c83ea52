#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "memgc/baselines.hpp"
#include "memgc/benchkit.hpp"
#include "memgc/compressor.hpp"
#include "memgc/vecmath.hpp"

using memgc::CompressionConfig;
using memgc::CompressionMethod;
using memgc::MemoryGraph;

namespace {

MemoryGraph mixed_graph(std::uint64_t seed = 1, std::int64_t n = 160) {
  memgc::GenConfig cfg;
  cfg.n_text = n;
  cfg.n_entities = 10;
  cfg.connected_fraction = 0.5;
  cfg.n_segments = 8;
  cfg.n_topics = 4;
  cfg.embedding_dim = 8;
  cfg.seed = seed;
  return memgc::generate(cfg);
}

std::int64_t expected_budget(std::size_t n, double ratio) {
  return std::max<std::int64_t>(
      1, memgc::round_half_up(static_cast<double>(n) * (1.0 - ratio)));
}

bool radii_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool both_nan = std::isnan(a[i]) && std::isnan(b[i]);
    if (!both_nan && a[i] != b[i]) return false;
  }
  return true;
}

bool reports_equal_modulo_timing(const memgc::CompressionReport& a,
                                 const memgc::CompressionReport& b) {
  return a.method == b.method && a.ratio == b.ratio && a.seed == b.seed &&
         a.retained_isolated == b.retained_isolated &&
         a.retained_connected == b.retained_connected && a.removed == b.removed &&
         a.retained_score_sum == b.retained_score_sum &&
         a.total_score_sum == b.total_score_sum &&
         radii_equal(a.cluster_covering_radii, b.cluster_covering_radii);
}

}  // namespace

TEST_CASE("compress retains per-branch budgets and yields a valid graph") {
  const auto g = mixed_graph();
  const auto part = memgc::partition_connectivity(g);

  CompressionConfig cfg;
  cfg.ratio = 0.5;
  cfg.seed = 3;
  const auto [out, report] = memgc::compress(g, cfg);

  CHECK(static_cast<std::int64_t>(report.retained_isolated.size()) ==
        expected_budget(part.isolated.size(), 0.5));
  CHECK(static_cast<std::int64_t>(report.retained_connected.size()) ==
        expected_budget(part.connected.size(), 0.5));
  CHECK(report.retained_isolated.size() + report.retained_connected.size() +
            report.removed.size() ==
        g.text_nodes.size());
  CHECK(out.text_nodes.size() ==
        report.retained_isolated.size() + report.retained_connected.size());
  CHECK(out.entity_nodes.size() == g.entity_nodes.size());
  CHECK(memgc::validate(out).ok());
  CHECK(report.method == "streammeco");
  CHECK(report.seconds > 0.0);

  // the retained sets partition cleanly against the original branches
  const std::set<std::int64_t> iso(part.isolated.begin(), part.isolated.end());
  for (std::int64_t id : report.retained_isolated) CHECK(iso.count(id) == 1);
  for (std::int64_t id : report.retained_connected) CHECK(iso.count(id) == 0);
  CHECK(std::is_sorted(report.removed.begin(), report.removed.end()));
}

TEST_CASE("compress at ratio 0 keeps every node") {
  const auto g = mixed_graph();
  CompressionConfig cfg;
  cfg.ratio = 0.0;
  const auto [out, report] = memgc::compress(g, cfg);
  CHECK(out.text_nodes.size() == g.text_nodes.size());
  CHECK(report.removed.empty());
}

TEST_CASE("compress is deterministic for a fixed seed") {
  const auto g = mixed_graph();
  CompressionConfig cfg;
  cfg.ratio = 0.4;
  cfg.seed = 9;
  const auto [out1, rep1] = memgc::compress(g, cfg);
  const auto [out2, rep2] = memgc::compress(g, cfg);
  CHECK(reports_equal_modulo_timing(rep1, rep2));
  REQUIRE(out1.text_nodes.size() == out2.text_nodes.size());
  for (std::size_t i = 0; i < out1.text_nodes.size(); ++i) {
    CHECK(out1.text_nodes[i].id == out2.text_nodes[i].id);
    CHECK(out1.text_nodes[i].embedding == out2.text_nodes[i].embedding);
  }
}

TEST_CASE("compress covering radii line up with the clustering") {
  const auto g = mixed_graph(5);
  CompressionConfig cfg;
  cfg.ratio = 0.6;
  cfg.clustering_ratio = 0.1;
  const auto [out, report] = memgc::compress(g, cfg);
  const auto part = memgc::partition_connectivity(g);
  const std::int64_t k = std::max<std::int64_t>(
      1, memgc::round_half_up(static_cast<double>(part.isolated.size()) * 0.1));
  CHECK(static_cast<std::int64_t>(report.cluster_covering_radii.size()) == k);
  for (double r : report.cluster_covering_radii) {
    if (!std::isnan(r)) CHECK(r >= 0.0);
  }
}

TEST_CASE("compress score sums cover the connected branch") {
  const auto g = mixed_graph(7);
  CompressionConfig cfg;
  cfg.ratio = 0.5;
  const auto [out, report] = memgc::compress(g, cfg);
  CHECK(report.retained_score_sum > 0.0);
  CHECK(report.retained_score_sum <= report.total_score_sum);
}

TEST_CASE("branch retention overrides decouple the two ratios") {
  const auto g = mixed_graph(11);
  const auto part = memgc::partition_connectivity(g);
  CompressionConfig cfg;
  cfg.ratio = 0.5;
  cfg.isolated_retention = 0.25;
  cfg.connected_retention = 0.75;
  const auto [out, report] = memgc::compress(g, cfg);
  CHECK(static_cast<std::int64_t>(report.retained_isolated.size()) ==
        std::max<std::int64_t>(1, memgc::round_half_up(part.isolated.size() * 0.25)));
  CHECK(static_cast<std::int64_t>(report.retained_connected.size()) ==
        std::max<std::int64_t>(1, memgc::round_half_up(part.connected.size() * 0.75)));
}

TEST_CASE("compress validates ratio and graph") {
  const auto g = mixed_graph();
  CompressionConfig cfg;
  cfg.ratio = 1.0;
  CHECK_THROWS_AS(memgc::compress(g, cfg), std::invalid_argument);
  cfg.ratio = -0.1;
  CHECK_THROWS_AS(memgc::compress(g, cfg), std::invalid_argument);

  auto bad = g;
  bad.text_nodes[0].embedding[0] *= 2.0;
  cfg.ratio = 0.5;
  CHECK_THROWS_AS(memgc::compress(bad, cfg), std::invalid_argument);
  CHECK_THROWS_AS(memgc::compress(MemoryGraph{}, cfg), std::invalid_argument);
}

TEST_CASE("compress_with(streammeco) delegates to compress") {
  const auto g = mixed_graph(13);
  CompressionConfig cfg;
  cfg.ratio = 0.5;
  cfg.seed = 2;
  const auto [outA, repA] = memgc::compress(g, cfg);
  const auto [outB, repB] = memgc::compress_with(CompressionMethod::streammeco, g, 0.5, 2);
  CHECK(repA.retained_isolated == repB.retained_isolated);
  CHECK(repA.retained_connected == repB.retained_connected);
}

TEST_CASE("per-branch baselines use the isolated seed and its successor") {
  const auto g = mixed_graph(17);
  const auto part = memgc::partition_connectivity(g);
  const double ratio = 0.5;
  const std::uint64_t seed = 21;

  const auto [out, report] = memgc::compress_with(CompressionMethod::random, g, ratio, seed);
  auto iso = memgc::random_select(
      part.isolated, static_cast<std::size_t>(expected_budget(part.isolated.size(), ratio)), seed);
  std::sort(iso.begin(), iso.end());
  auto conn = memgc::random_select(
      part.connected, static_cast<std::size_t>(expected_budget(part.connected.size(), ratio)),
      seed + 1);
  std::sort(conn.begin(), conn.end());
  CHECK(report.retained_isolated == iso);
  CHECK(report.retained_connected == conn);
}

TEST_CASE("chronological baselines pool both branches under one budget") {
  const auto g = mixed_graph(19);
  const double ratio = 0.4;
  const std::int64_t budget = expected_budget(g.text_nodes.size(), ratio);

  std::vector<const memgc::TextNode*> order;
  for (const auto& node : g.text_nodes) order.push_back(&node);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->clip != b->clip) return a->clip < b->clip;
    return a->id < b->id;
  });
  std::vector<memgc::IdEmbedding> pairs;
  for (const auto* node : order) pairs.push_back({node->id, node->embedding});

  {
    const auto [out, report] =
        memgc::compress_with(CompressionMethod::capacity_evict, g, ratio, 0);
    auto expect = memgc::capacity_evict_select(pairs, static_cast<std::size_t>(budget));
    std::vector<std::int64_t> got = report.retained_isolated;
    got.insert(got.end(), report.retained_connected.begin(), report.retained_connected.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
    CHECK(static_cast<std::int64_t>(out.text_nodes.size()) == budget);
  }
  {
    const auto [out, report] =
        memgc::compress_with(CompressionMethod::adjacent_fifo, g, ratio, 0);
    auto expect = memgc::adjacent_fifo_select(pairs, static_cast<std::size_t>(budget), 0.7);
    std::vector<std::int64_t> got = report.retained_isolated;
    got.insert(got.end(), report.retained_connected.begin(), report.retained_connected.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
  }
}

TEST_CASE("every method produces a valid graph of the right size") {
  const auto g = mixed_graph(23);
  for (CompressionMethod method :
       {CompressionMethod::streammeco, CompressionMethod::random, CompressionMethod::clustering,
        CompressionMethod::dart, CompressionMethod::capacity_evict}) {
    const auto [out, report] = memgc::compress_with(method, g, 0.5, 4);
    CHECK(memgc::validate(out).ok());
    CHECK(out.text_nodes.size() == 80);  // both branch budgets and the pooled
                                         // budget agree at ratio 0.5 here
    CHECK(report.method == memgc::to_string(method));
  }
  // adjacent_fifo may undershoot; it still validates
  const auto [out, report] = memgc::compress_with(CompressionMethod::adjacent_fifo, g, 0.5, 4);
  CHECK(memgc::validate(out).ok());
  CHECK(out.text_nodes.size() <= 80);
}

TEST_CASE("baseline reports carry connected-branch score sums") {
  const auto g = mixed_graph(29);
  const auto [out, report] = memgc::compress_with(CompressionMethod::random, g, 0.5, 1);
  CHECK(report.total_score_sum > 0.0);
  CHECK(report.retained_score_sum > 0.0);
  CHECK(report.retained_score_sum <= report.total_score_sum);
  CHECK(report.cluster_covering_radii.empty());  // no clustering ran
}

TEST_CASE("write_report emits parseable structured text") {
  const auto g = mixed_graph(31);
  CompressionConfig cfg;
  cfg.ratio = 0.5;
  const auto [out, report] = memgc::compress(g, cfg);
  const std::string path = "/tmp/memgc_test_report.json";
  memgc::write_report(report, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["method"] == "streammeco");
  CHECK(doc["ratio"] == 0.5);
  CHECK(doc["retained_isolated"].size() == report.retained_isolated.size());
  CHECK(doc["removed"].size() == report.removed.size());
  CHECK(doc["seconds"].is_number());
  CHECK(doc["cluster_covering_radii"].size() == report.cluster_covering_radii.size());
  std::remove(path.c_str());
}

TEST_CASE("method names round trip, including underscore aliases") {
  using M = CompressionMethod;
  for (M m : {M::streammeco, M::random, M::clustering, M::dart, M::adjacent_fifo,
              M::capacity_evict})
    CHECK(memgc::method_from_string(memgc::to_string(m)) == m);
  CHECK(memgc::method_from_string("adjacent_fifo") == M::adjacent_fifo);
  CHECK(memgc::method_from_string("capacity_evict") == M::capacity_evict);
  CHECK_FALSE(memgc::method_from_string("lru").has_value());
}
