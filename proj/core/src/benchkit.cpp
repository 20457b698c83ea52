#include "memgc/benchkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "memgc/em_sampling.hpp"
#include "memgc/rng.hpp"
#include "memgc/vecmath.hpp"

namespace memgc {

namespace {

using Clock = std::chrono::steady_clock;

void check_gen(const GenConfig& cfg) {
  if (cfg.n_text < 1) throw std::invalid_argument("generate: n_text must be positive");
  if (cfg.n_segments < 1 || cfg.n_segments > cfg.n_text)
    throw std::invalid_argument("generate: need n_text >= n_segments >= 1");
  if (cfg.embedding_dim < 2) throw std::invalid_argument("generate: embedding_dim must be >= 2");
  if (cfg.n_topics < 1) throw std::invalid_argument("generate: n_topics must be positive");
  if (cfg.n_entities < 0) throw std::invalid_argument("generate: n_entities negative");
  if (cfg.connected_fraction < 0.0 || cfg.connected_fraction > 1.0)
    throw std::invalid_argument("generate: connected_fraction out of [0, 1]");
  if (cfg.connected_fraction > 0.0 && cfg.n_entities < 1)
    throw std::invalid_argument("generate: connected_fraction needs entities");
  if (cfg.dup_fraction < 0.0 || cfg.dup_fraction >= 1.0)
    throw std::invalid_argument("generate: dup_fraction out of [0, 1)");
  if (!(cfg.topic_noise >= 0.0)) throw std::invalid_argument("generate: negative topic_noise");
}

std::vector<double> noisy_copy(const std::vector<double>& base, double sigma, Rng& rng) {
  std::vector<double> v(base.size());
  for (std::size_t d = 0; d < v.size(); ++d) v[d] = base[d] + sigma * rng.gaussian();
  return normalize(std::move(v));
}

double percentile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  if (xs.empty()) return 0.0;
  const double pos = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - std::floor(pos);
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

double median(std::vector<double> xs) { return percentile(std::move(xs), 0.5); }

LatencyStats stats_of(const std::vector<double>& per_query) {
  LatencyStats s;
  double sum = 0.0;
  for (double x : per_query) sum += x;
  s.mean = sum / static_cast<double>(per_query.size());
  s.p50 = percentile(per_query, 0.5);
  s.p95 = percentile(per_query, 0.95);
  return s;
}

double overlap_at_k(const std::vector<ScoredNode>& retrieved,
                    const std::unordered_set<std::int64_t>& oracle,
                    std::int64_t k) {
  std::int64_t hits = 0;
  for (const auto& r : retrieved)
    if (oracle.count(r.id)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace

MemoryGraph generate(const GenConfig& cfg) {
  check_gen(cfg);
  Rng rng(cfg.seed);

  std::vector<std::vector<double>> topics;
  topics.reserve(static_cast<std::size_t>(cfg.n_topics));
  for (std::int64_t t = 0; t < cfg.n_topics; ++t) {
    std::vector<double> c(static_cast<std::size_t>(cfg.embedding_dim));
    for (double& x : c) x = rng.gaussian();
    topics.push_back(normalize(std::move(c)));
  }

  MemoryGraph graph;
  graph.embedding_dim = cfg.embedding_dim;
  graph.text_nodes.reserve(static_cast<std::size_t>(cfg.n_text));
  for (std::int64_t i = 0; i < cfg.n_text; ++i) {
    const std::size_t topic = static_cast<std::size_t>(
        rng.uniform_below(static_cast<std::uint64_t>(cfg.n_topics)));
    TextNode node;
    node.id = i;
    node.content = "text node " + std::to_string(i) + " topic " + std::to_string(topic);
    node.clip = i * cfg.n_segments / cfg.n_text;  // chronological blocks
    node.embedding = cfg.topic_noise > 0.0 ? noisy_copy(topics[topic], cfg.topic_noise, rng)
                                           : topics[topic];
    graph.text_nodes.push_back(std::move(node));
  }

  // Overwrite a dup_fraction slice with near-duplicates of earlier nodes.
  std::int64_t n_dup = round_half_up(cfg.dup_fraction * static_cast<double>(cfg.n_text));
  n_dup = std::min(n_dup, cfg.n_text - 1);
  if (n_dup > 0) {
    const auto dup_pos =
        sample_indices(rng, static_cast<std::size_t>(cfg.n_text - 1), static_cast<std::size_t>(n_dup));
    for (std::size_t p : dup_pos) {
      const std::size_t at = p + 1;  // node 0 has nothing earlier
      const std::size_t src = static_cast<std::size_t>(rng.uniform_below(at));
      graph.text_nodes[at].embedding =
          noisy_copy(graph.text_nodes[src].embedding, cfg.topic_noise / 10.0, rng);
      graph.text_nodes[at].content += " (near " + std::to_string(src) + ")";
    }
  }

  graph.entity_nodes.reserve(static_cast<std::size_t>(cfg.n_entities));
  for (std::int64_t e = 0; e < cfg.n_entities; ++e) {
    EntityNode node;
    node.id = e;
    node.kind = e % 2 == 0 ? EntityKind::face : EntityKind::voice;
    node.label = (node.kind == EntityKind::face ? "face " : "voice ") + std::to_string(e);
    graph.entity_nodes.push_back(std::move(node));
  }

  const std::int64_t n_conn = std::min(
      cfg.n_text, round_half_up(cfg.connected_fraction * static_cast<double>(cfg.n_text)));
  if (n_conn > 0) {
    const auto conn_pos =
        sample_indices(rng, static_cast<std::size_t>(cfg.n_text), static_cast<std::size_t>(n_conn));
    for (std::size_t p : conn_pos) {
      const std::uint64_t max_deg =
          std::min<std::uint64_t>(3, static_cast<std::uint64_t>(cfg.n_entities));
      const std::size_t degree = 1 + static_cast<std::size_t>(rng.uniform_below(max_deg));
      const auto targets =
          sample_indices(rng, static_cast<std::size_t>(cfg.n_entities), degree);
      for (std::size_t e : targets) {
        Edge edge;
        edge.entity_id = static_cast<std::int64_t>(e);
        edge.text_id = static_cast<std::int64_t>(p);
        edge.weight = std::abs(rng.gaussian());
        graph.edges.push_back(edge);
      }
    }
  }
  return graph;
}

BenchReport run_bench(const MemoryGraph& graph,
                      const BenchConfig& cfg,
                      const std::vector<std::vector<double>>& queries) {
  if (queries.empty()) throw std::invalid_argument("run_bench: empty query set");
  if (cfg.repeats < 3) throw std::invalid_argument("run_bench: repeats must be >= 3");
  if (cfg.methods.empty() || cfg.ratios.empty())
    throw std::invalid_argument("run_bench: nothing to measure");

  const std::int64_t k = cfg.retrieval.k;
  BenchReport report;
  report.k = k;
  report.seed = cfg.compression.seed;

  // Quality oracle: plain top-k on the uncompressed graph.
  std::vector<std::unordered_set<std::int64_t>> oracle;
  oracle.reserve(queries.size());
  for (const auto& q : queries) {
    std::unordered_set<std::int64_t> ids;
    for (const auto& scored : character_topk(graph, q, k)) ids.insert(scored.id);
    oracle.push_back(std::move(ids));
  }

  const ConnectivityPartition part = partition_connectivity(graph);
  std::vector<std::vector<double>> isolated_embs;
  std::vector<std::int64_t> isolated_ids = part.isolated;
  {
    std::unordered_set<std::int64_t> iso(part.isolated.begin(), part.isolated.end());
    for (const auto& node : graph.text_nodes)
      if (iso.count(node.id)) isolated_embs.push_back(node.embedding);
  }

  for (CompressionMethod method : cfg.methods) {
    for (double ratio : cfg.ratios) {
      BenchCell cell;
      cell.policy = to_string(method);
      cell.ratio = ratio;

      CompressionReport creport;
      MemoryGraph compressed;
      if (method == CompressionMethod::streammeco) {
        CompressionConfig ccfg = cfg.compression;
        ccfg.ratio = ratio;
        std::tie(compressed, creport) = compress(graph, ccfg);
      } else {
        std::tie(compressed, creport) =
            compress_with(method, graph, ratio, cfg.compression.seed, cfg.baseline);
      }
      cell.compress_seconds = creport.seconds;
      cell.text_nodes = static_cast<std::int64_t>(compressed.text_nodes.size());

      // Warm-up pass, excluded from the timings.
      (void)character_topk(compressed, queries[0], k);
      (void)retrieve(compressed, queries[0], cfg.retrieval);

      std::vector<double> ss_medians, tr_medians;
      double overlap_topk_sum = 0.0, overlap_tmr_sum = 0.0;
      for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        std::vector<double> ss_runs, tr_runs;
        for (std::int64_t r = 0; r < cfg.repeats; ++r) {
          const auto t0 = Clock::now();
          volatile double sink = character_topk(compressed, queries[qi], k)[0].score;
          const auto t1 = Clock::now();
          (void)sink;
          ss_runs.push_back(std::chrono::duration<double>(t1 - t0).count());

          const auto t2 = Clock::now();
          const auto nodes = retrieve(compressed, queries[qi], cfg.retrieval);
          const auto t3 = Clock::now();
          tr_runs.push_back(std::chrono::duration<double>(t3 - t2).count());
          if (r == 0) overlap_tmr_sum += overlap_at_k(nodes, oracle[qi], k);
        }
        ss_medians.push_back(median(ss_runs));
        tr_medians.push_back(median(tr_runs));
        overlap_topk_sum += overlap_at_k(character_topk(compressed, queries[qi], k), oracle[qi], k);
      }
      cell.ss_seconds = stats_of(ss_medians);
      cell.tr_seconds = stats_of(tr_medians);
      cell.overlap_topk = overlap_topk_sum / static_cast<double>(queries.size());
      cell.overlap_tmr = overlap_tmr_sum / static_cast<double>(queries.size());

      // Covering radius over the isolated branch of the original graph.
      cell.covering_radius = std::numeric_limits<double>::quiet_NaN();
      if (!isolated_ids.empty()) {
        std::unordered_set<std::int64_t> kept(creport.retained_isolated.begin(),
                                              creport.retained_isolated.end());
        std::vector<std::size_t> sel;
        for (std::size_t i = 0; i < isolated_ids.size(); ++i)
          if (kept.count(isolated_ids[i])) sel.push_back(i);
        if (!sel.empty()) cell.covering_radius = covering_radius(isolated_embs, sel);
      }

      cell.retained_score_fraction = std::numeric_limits<double>::quiet_NaN();
      if (!part.connected.empty() && creport.total_score_sum > 0.0)
        cell.retained_score_fraction = creport.retained_score_sum / creport.total_score_sum;

      report.cells.push_back(std::move(cell));
    }
  }

  // Speedups relative to the same policy at ratio 0, when that cell exists.
  for (auto& cell : report.cells) {
    for (const auto& base : report.cells) {
      if (base.policy == cell.policy && base.ratio == 0.0) {
        if (base.ss_seconds.mean > 0.0 && cell.ss_seconds.mean > 0.0)
          cell.speedup_ss = base.ss_seconds.mean / cell.ss_seconds.mean;
        if (base.tr_seconds.mean > 0.0 && cell.tr_seconds.mean > 0.0)
          cell.speedup_tr = base.tr_seconds.mean / cell.tr_seconds.mean;
        break;
      }
    }
  }
  return report;
}

void write_bench_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_bench_csv: cannot write " + path);
  out << "policy,ratio,metric,value,seed\n";
  const auto row = [&](const BenchCell& cell, const char* metric, double value) {
    if (std::isnan(value)) return;
    out << cell.policy << ',' << cell.ratio << ',' << metric << ',';
    out.precision(17);
    out << value << ',' << report.seed << '\n';
  };
  for (const auto& cell : report.cells) {
    row(cell, "text_nodes", static_cast<double>(cell.text_nodes));
    row(cell, "compress_seconds", cell.compress_seconds);
    row(cell, "ss_mean_seconds", cell.ss_seconds.mean);
    row(cell, "ss_p50_seconds", cell.ss_seconds.p50);
    row(cell, "ss_p95_seconds", cell.ss_seconds.p95);
    row(cell, "tr_mean_seconds", cell.tr_seconds.mean);
    row(cell, "tr_p50_seconds", cell.tr_seconds.p50);
    row(cell, "tr_p95_seconds", cell.tr_seconds.p95);
    if (cell.speedup_ss > 0.0) row(cell, "speedup_ss", cell.speedup_ss);
    if (cell.speedup_tr > 0.0) row(cell, "speedup_tr", cell.speedup_tr);
    row(cell, "overlap_topk", cell.overlap_topk);
    row(cell, "overlap_tmr", cell.overlap_tmr);
    row(cell, "covering_radius", cell.covering_radius);
    row(cell, "retained_score_fraction", cell.retained_score_fraction);
  }
}

void write_bench_json(const BenchReport& report, const std::string& path) {
  nlohmann::json doc;
  doc["k"] = report.k;
  doc["seed"] = report.seed;
  doc["cells"] = nlohmann::json::array();
  const auto opt = [](double x) {
    return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x);
  };
  for (const auto& cell : report.cells) {
    nlohmann::json c;
    c["policy"] = cell.policy;
    c["ratio"] = cell.ratio;
    c["text_nodes"] = cell.text_nodes;
    c["compress_seconds"] = cell.compress_seconds;
    c["ss_seconds"] = {{"mean", cell.ss_seconds.mean},
                       {"p50", cell.ss_seconds.p50},
                       {"p95", cell.ss_seconds.p95}};
    c["tr_seconds"] = {{"mean", cell.tr_seconds.mean},
                       {"p50", cell.tr_seconds.p50},
                       {"p95", cell.tr_seconds.p95}};
    c["speedup_ss"] =
        cell.speedup_ss > 0.0 ? nlohmann::json(cell.speedup_ss) : nlohmann::json(nullptr);
    c["speedup_tr"] =
        cell.speedup_tr > 0.0 ? nlohmann::json(cell.speedup_tr) : nlohmann::json(nullptr);
    c["overlap_topk"] = cell.overlap_topk;
    c["overlap_tmr"] = cell.overlap_tmr;
    c["covering_radius"] = opt(cell.covering_radius);
    c["retained_score_fraction"] = opt(cell.retained_score_fraction);
    doc["cells"].push_back(std::move(c));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_bench_json: cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace memgc
