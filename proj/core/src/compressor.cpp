#include "memgc/compressor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "memgc/em_sampling.hpp"
#include "memgc/ew_pruning.hpp"
#include "memgc/vecmath.hpp"

namespace memgc {

namespace {

using Clock = std::chrono::steady_clock;
static_assert(Clock::is_steady);

void check_input(const MemoryGraph& graph, double ratio) {
  if (graph.text_nodes.empty()) throw std::invalid_argument("compress: empty graph");
  if (!(ratio >= 0.0) || ratio >= 1.0)
    throw std::invalid_argument("compress: ratio out of [0, 1)");
  const ValidationReport report = validate(graph);
  if (!report.ok())
    throw std::invalid_argument("compress: invalid graph: [" + report.issues[0].code + "] " +
                                report.issues[0].message);
}

std::unordered_map<std::int64_t, const TextNode*> index_nodes(const MemoryGraph& graph) {
  std::unordered_map<std::int64_t, const TextNode*> by_id;
  by_id.reserve(graph.text_nodes.size());
  for (const auto& node : graph.text_nodes) by_id[node.id] = &node;
  return by_id;
}

std::vector<IdEmbedding> branch_pairs(const MemoryGraph& graph,
                                      const std::vector<std::int64_t>& ids) {
  const auto by_id = index_nodes(graph);
  std::vector<IdEmbedding> pairs;
  pairs.reserve(ids.size());
  for (std::int64_t id : ids) pairs.push_back({id, by_id.at(id)->embedding});
  return pairs;
}

std::int64_t branch_budget(std::size_t n, double ratio) {
  return std::max<std::int64_t>(
      1, round_half_up(static_cast<double>(n) * (1.0 - ratio)));
}

// Fused connected-branch scores without materializing the similarity matrix;
// used for baseline reports where the O(N^2) memory of the dense path is not
// needed. streammeco reports reuse the scores of its own selection instead.
std::vector<double> streamed_connected_scores(const std::vector<IdEmbedding>& pairs,
                                              const std::vector<Edge>& edges,
                                              double balance) {
  const std::size_t n = pairs.size();
  std::unordered_map<std::int64_t, std::size_t> col;
  col.reserve(n);
  for (std::size_t j = 0; j < n; ++j) col[pairs[j].first] = j;

  std::vector<double> colsum(n, 0.0);
  for (const auto& edge : edges) {
    auto it = col.find(edge.text_id);
    if (it != col.end()) colsum[it->second] += edge.weight;
  }
  double lo = colsum[0], hi = colsum[0];
  for (double x : colsum) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> importance(n, 0.5);
  if (hi != lo)
    for (std::size_t j = 0; j < n; ++j) importance[j] = (colsum[j] - lo) / (hi - lo);

  std::vector<double> rowsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) rowsum[i] += cosine(pairs[i].second, pairs[j].second);
  lo = rowsum[0];
  hi = rowsum[0];
  for (double x : rowsum) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> diversity(n, 0.5);
  if (hi != lo)
    for (std::size_t i = 0; i < n; ++i) diversity[i] = 1.0 - (rowsum[i] - lo) / (hi - lo);

  std::vector<double> fused(n);
  for (std::size_t i = 0; i < n; ++i)
    fused[i] = balance * importance[i] + (1.0 - balance) * diversity[i];
  return fused;
}

void fill_score_sums(CompressionReport& report,
                     const std::vector<IdEmbedding>& connected_pairs,
                     const std::vector<double>& scores) {
  std::unordered_set<std::int64_t> kept(report.retained_connected.begin(),
                                        report.retained_connected.end());
  for (std::size_t i = 0; i < connected_pairs.size(); ++i) {
    report.total_score_sum += scores[i];
    if (kept.count(connected_pairs[i].first)) report.retained_score_sum += scores[i];
  }
}

CompressionReport finish(const MemoryGraph& graph,
                         CompressionReport report,
                         const std::vector<std::int64_t>& retained_all) {
  std::unordered_set<std::int64_t> kept(retained_all.begin(), retained_all.end());
  for (const auto& node : graph.text_nodes)
    if (!kept.count(node.id)) report.removed.push_back(node.id);
  std::sort(report.removed.begin(), report.removed.end());
  std::sort(report.retained_isolated.begin(), report.retained_isolated.end());
  std::sort(report.retained_connected.begin(), report.retained_connected.end());
  return report;
}

std::pair<MemoryGraph, CompressionReport> apply(const MemoryGraph& graph,
                                                CompressionReport report,
                                                const Clock::time_point& t0) {
  std::vector<std::int64_t> retained_all = report.retained_isolated;
  retained_all.insert(retained_all.end(), report.retained_connected.begin(),
                      report.retained_connected.end());
  report = finish(graph, std::move(report), retained_all);
  MemoryGraph out = remove_text_nodes(graph, report.removed);
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return {std::move(out), std::move(report)};
}

}  // namespace

std::pair<MemoryGraph, CompressionReport> compress(const MemoryGraph& graph,
                                                   const CompressionConfig& cfg) {
  const auto t0 = Clock::now();
  check_input(graph, cfg.ratio);
  const double alpha = cfg.isolated_retention.value_or(1.0 - cfg.ratio);
  const double beta = cfg.connected_retention.value_or(1.0 - cfg.ratio);

  const ConnectivityPartition part = partition_connectivity(graph);

  CompressionReport report;
  report.method = to_string(CompressionMethod::streammeco);
  report.ratio = cfg.ratio;
  report.seed = cfg.seed;

  if (!part.isolated.empty()) {
    const auto pairs = branch_pairs(graph, part.isolated);
    EMConfig em{cfg.clustering_ratio, alpha, cfg.seed};
    EmDetail detail;
    report.retained_isolated = em_select(pairs, em, &detail);

    // Per-cluster covering radius of the kept set; NaN where a cluster kept
    // nothing (possible only when its quota rounded to zero).
    std::vector<std::vector<std::size_t>> members(
        static_cast<std::size_t>(detail.clusters.n_clusters));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      members[static_cast<std::size_t>(detail.clusters.assignments[i])].push_back(i);
    std::unordered_set<std::int64_t> kept(report.retained_isolated.begin(),
                                          report.retained_isolated.end());
    for (std::size_t j = 0; j < members.size(); ++j) {
      std::vector<std::vector<double>> pts;
      std::vector<std::size_t> sel;
      pts.reserve(members[j].size());
      for (std::size_t local = 0; local < members[j].size(); ++local) {
        const auto& [id, emb] = pairs[members[j][local]];
        pts.push_back(emb);
        if (kept.count(id)) sel.push_back(local);
      }
      report.cluster_covering_radii.push_back(
          sel.empty() ? std::numeric_limits<double>::quiet_NaN() : covering_radius(pts, sel));
    }
  }

  if (!part.connected.empty()) {
    const auto pairs = branch_pairs(graph, part.connected);
    std::vector<double> scores;
    report.retained_connected = ew_select(pairs, graph.edges, EWConfig{beta, cfg.balance}, &scores);
    fill_score_sums(report, pairs, scores);
  }

  return apply(graph, std::move(report), t0);
}

std::pair<MemoryGraph, CompressionReport> compress_with(CompressionMethod method,
                                                        const MemoryGraph& graph,
                                                        double ratio,
                                                        std::uint64_t seed,
                                                        const BaselineParams& params) {
  if (method == CompressionMethod::streammeco) {
    CompressionConfig cfg;
    cfg.ratio = ratio;
    cfg.seed = seed;
    return compress(graph, cfg);
  }

  const auto t0 = Clock::now();
  check_input(graph, ratio);
  const ConnectivityPartition part = partition_connectivity(graph);

  CompressionReport report;
  report.method = to_string(method);
  report.ratio = ratio;
  report.seed = seed;

  std::vector<std::int64_t> retained_all;
  if (method == CompressionMethod::adjacent_fifo || method == CompressionMethod::capacity_evict) {
    // Chronological policies ignore the branch split and run over all text
    // nodes ordered by (clip, id).
    std::vector<const TextNode*> order;
    order.reserve(graph.text_nodes.size());
    for (const auto& node : graph.text_nodes) order.push_back(&node);
    std::sort(order.begin(), order.end(), [](const TextNode* a, const TextNode* b) {
      if (a->clip != b->clip) return a->clip < b->clip;
      return a->id < b->id;
    });
    std::vector<IdEmbedding> pairs;
    pairs.reserve(order.size());
    for (const TextNode* node : order) pairs.push_back({node->id, node->embedding});

    const std::int64_t budget = branch_budget(pairs.size(), ratio);
    retained_all = method == CompressionMethod::adjacent_fifo
                       ? adjacent_fifo_select(pairs, static_cast<std::size_t>(budget),
                                              params.adjacent_threshold)
                       : capacity_evict_select(pairs, static_cast<std::size_t>(budget));

    std::unordered_set<std::int64_t> connected(part.connected.begin(), part.connected.end());
    for (std::int64_t id : retained_all)
      (connected.count(id) ? report.retained_connected : report.retained_isolated).push_back(id);
  } else {
    // random / clustering / dart apply to each branch independently. The
    // connected branch derives its seed from the isolated one.
    const auto run_branch = [&](const std::vector<std::int64_t>& ids, std::uint64_t branch_seed)
        -> std::vector<std::int64_t> {
      const std::int64_t budget = branch_budget(ids.size(), ratio);
      switch (method) {
        case CompressionMethod::random:
          return random_select(ids, static_cast<std::size_t>(budget), branch_seed);
        case CompressionMethod::clustering:
          return cluster_center_select(branch_pairs(graph, ids),
                                       static_cast<std::size_t>(budget), branch_seed);
        case CompressionMethod::dart:
          return dart_select(branch_pairs(graph, ids), static_cast<std::size_t>(budget),
                             params.dart_pivot_fraction, branch_seed);
        default:
          throw std::logic_error("compress_with: unexpected method");
      }
    };
    if (!part.isolated.empty()) report.retained_isolated = run_branch(part.isolated, seed);
    if (!part.connected.empty()) report.retained_connected = run_branch(part.connected, seed + 1);
  }

  if (!part.connected.empty()) {
    const auto pairs = branch_pairs(graph, part.connected);
    fill_score_sums(report, pairs, streamed_connected_scores(pairs, graph.edges, 0.1));
  }

  return apply(graph, std::move(report), t0);
}

void write_report(const CompressionReport& report, const std::string& path) {
  nlohmann::json doc;
  doc["method"] = report.method;
  doc["ratio"] = report.ratio;
  doc["seed"] = report.seed;
  doc["retained_isolated"] = report.retained_isolated;
  doc["retained_connected"] = report.retained_connected;
  doc["removed"] = report.removed;
  doc["retained_score_sum"] = report.retained_score_sum;
  doc["total_score_sum"] = report.total_score_sum;
  doc["cluster_covering_radii"] = nlohmann::json::array();
  for (double r : report.cluster_covering_radii) {
    if (std::isnan(r))
      doc["cluster_covering_radii"].push_back(nullptr);
    else
      doc["cluster_covering_radii"].push_back(r);
  }
  doc["seconds"] = report.seconds;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot write " + path);
  out << doc.dump(2) << '\n';
}

std::string to_string(CompressionMethod method) {
  switch (method) {
    case CompressionMethod::streammeco: return "streammeco";
    case CompressionMethod::random: return "random";
    case CompressionMethod::clustering: return "clustering";
    case CompressionMethod::dart: return "dart";
    case CompressionMethod::adjacent_fifo: return "adjacent-fifo";
    case CompressionMethod::capacity_evict: return "capacity-evict";
  }
  return "?";
}

std::optional<CompressionMethod> method_from_string(const std::string& name) {
  if (name == "streammeco") return CompressionMethod::streammeco;
  if (name == "random") return CompressionMethod::random;
  if (name == "clustering") return CompressionMethod::clustering;
  if (name == "dart") return CompressionMethod::dart;
  if (name == "adjacent-fifo" || name == "adjacent_fifo") return CompressionMethod::adjacent_fifo;
  if (name == "capacity-evict" || name == "capacity_evict") return CompressionMethod::capacity_evict;
  return std::nullopt;
}

}  // namespace memgc
