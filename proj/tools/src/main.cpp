#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "memgc/benchkit.hpp"
#include "memgc/compressor.hpp"
#include "memgc/graph_io.hpp"
#include "memgc/retrieval.hpp"
#include "memgc/vecmath.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MEMGC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("MEMGC_SEED is not an unsigned integer: " + std::string(env));
    }
  }
  return 0;
}

std::vector<double> read_query_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(line, &used));
      while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) ++used;
      if (used != line.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected one real per line");
    }
  }
  if (values.empty()) throw std::runtime_error(path + ": empty query file");
  return memgc::normalize(std::move(values));
}

std::vector<double> parse_inline_query(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw std::runtime_error("bad query component: " + token);
    }
  }
  if (values.empty()) throw std::runtime_error("empty inline query");
  return memgc::normalize(std::move(values));
}

memgc::DecayKind parse_decay(const std::string& name) {
  if (name == "exp" || name == "exponential") return memgc::DecayKind::exponential;
  if (name == "linear") return memgc::DecayKind::linear;
  if (name == "piecewise") return memgc::DecayKind::piecewise;
  throw std::runtime_error("unknown decay kind: " + name);
}

memgc::RetrievalMode parse_mode(const std::string& name) {
  if (name == "tmr") return memgc::RetrievalMode::tmr;
  if (name == "character") return memgc::RetrievalMode::character_topk;
  if (name == "semantic") return memgc::RetrievalMode::semantic_segments;
  throw std::runtime_error("unknown retrieval mode: " + name);
}

int run_gen(const std::string& out, std::int64_t n_text, std::int64_t segments, int dim,
            std::int64_t entities, double connected_fraction, std::int64_t topics, double noise,
            double dup_fraction, std::uint64_t seed) {
  memgc::GenConfig cfg;
  cfg.n_text = n_text;
  cfg.n_segments = segments;
  cfg.embedding_dim = dim;
  cfg.n_entities = entities;
  cfg.connected_fraction = connected_fraction;
  cfg.n_topics = topics;
  cfg.topic_noise = noise;
  cfg.dup_fraction = dup_fraction;
  cfg.seed = seed;
  const memgc::MemoryGraph graph = memgc::generate(cfg);
  memgc::save_graph(graph, out);
  std::cout << "wrote " << out << ": " << graph.text_nodes.size() << " text nodes, "
            << graph.entity_nodes.size() << " entity nodes, " << graph.edges.size() << " edges\n";
  return 0;
}

int run_compress(const std::string& in, const std::string& out, double ratio,
                 const std::string& method_name, double a, double b, std::uint64_t seed,
                 const std::string& report_path, double dart_pivot_fraction,
                 double adjacent_threshold, std::optional<double> alpha,
                 std::optional<double> beta) {
  const auto method = memgc::method_from_string(method_name);
  if (!method) throw std::runtime_error("unknown method: " + method_name);

  const memgc::MemoryGraph graph = memgc::load_graph(in);
  memgc::MemoryGraph compressed;
  memgc::CompressionReport report;
  if (*method == memgc::CompressionMethod::streammeco) {
    memgc::CompressionConfig cfg;
    cfg.ratio = ratio;
    cfg.clustering_ratio = a;
    cfg.balance = b;
    cfg.seed = seed;
    cfg.isolated_retention = alpha;
    cfg.connected_retention = beta;
    std::tie(compressed, report) = memgc::compress(graph, cfg);
  } else {
    memgc::BaselineParams params;
    params.dart_pivot_fraction = dart_pivot_fraction;
    params.adjacent_threshold = adjacent_threshold;
    std::tie(compressed, report) = memgc::compress_with(*method, graph, ratio, seed, params);
  }
  memgc::save_graph(compressed, out);
  if (!report_path.empty()) memgc::write_report(report, report_path);
  std::cout << "retained " << compressed.text_nodes.size() << "/" << graph.text_nodes.size()
            << " text nodes (" << report.method << ", ratio " << ratio << ") in "
            << report.seconds << " s\n";
  return 0;
}

int run_retrieve(const std::string& in, const std::string& query_path,
                 const std::string& query_inline, std::int64_t k, const std::string& mode_name,
                 double lambda, const std::string& decay_name, const std::string& format) {
  if (query_path.empty() == query_inline.empty())
    throw std::runtime_error("provide exactly one of --query / --query-inline");
  const memgc::MemoryGraph graph = memgc::load_graph(in);
  const std::vector<double> query =
      query_path.empty() ? parse_inline_query(query_inline) : read_query_file(query_path);

  memgc::RetrievalConfig cfg;
  cfg.k = k;
  cfg.lambda = lambda;
  cfg.decay = parse_decay(decay_name);
  cfg.mode = parse_mode(mode_name);
  const auto nodes = memgc::retrieve(graph, query, cfg);

  if (format == "tabular") {
    std::cout << "id,score\n";
    std::cout.precision(17);
    for (const auto& node : nodes) std::cout << node.id << ',' << node.score << '\n';
  } else {
    std::cout << "rank\tid\tscore\n";
    std::cout.precision(6);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      std::cout << i + 1 << '\t' << nodes[i].id << '\t' << std::fixed << nodes[i].score << '\n';
  }
  return 0;
}

int run_bench_cmd(const std::string& in, const std::string& ratios_text,
                  const std::string& methods_text, const std::string& queries_dir,
                  std::int64_t repeats, std::int64_t k, double lambda,
                  const std::string& decay_name, double a, double b, std::uint64_t seed,
                  const std::string& out_dir) {
  memgc::BenchConfig cfg;
  std::stringstream rs(ratios_text);
  std::string token;
  while (std::getline(rs, token, ',')) {
    try {
      cfg.ratios.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw std::runtime_error("bad ratio: " + token);
    }
  }
  std::stringstream ms(methods_text);
  while (std::getline(ms, token, ',')) {
    const auto method = memgc::method_from_string(token);
    if (!method) throw std::runtime_error("unknown method: " + token);
    cfg.methods.push_back(*method);
  }
  cfg.repeats = repeats;
  cfg.retrieval.k = k;
  cfg.retrieval.lambda = lambda;
  cfg.retrieval.decay = parse_decay(decay_name);
  cfg.retrieval.mode = memgc::RetrievalMode::tmr;
  cfg.compression.clustering_ratio = a;
  cfg.compression.balance = b;
  cfg.compression.seed = seed;

  std::vector<std::vector<double>> queries;
  std::vector<fs::path> files;
  if (!fs::is_directory(queries_dir))
    throw std::runtime_error("not a directory: " + queries_dir);
  for (const auto& entry : fs::directory_iterator(queries_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".vec")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) queries.push_back(read_query_file(f.string()));
  if (queries.empty()) throw std::runtime_error("no .vec files in " + queries_dir);

  const memgc::MemoryGraph graph = memgc::load_graph(in);
  const memgc::BenchReport report = memgc::run_bench(graph, cfg, queries);

  fs::create_directories(out_dir);
  const std::string csv = (fs::path(out_dir) / "metrics.csv").string();
  const std::string json = (fs::path(out_dir) / "summary.json").string();
  memgc::write_bench_csv(report, csv);
  memgc::write_bench_json(report, json);
  std::cout << "wrote " << csv << " and " << json << " (" << report.cells.size() << " cells, "
            << queries.size() << " queries)\n";
  return 0;
}

int run_inspect(const std::string& in, const std::string& format) {
  const memgc::MemoryGraph graph = memgc::load_graph(in);
  const memgc::ConnectivityPartition part = memgc::partition_connectivity(graph);
  std::size_t faces = 0;
  for (const auto& e : graph.entity_nodes)
    if (e.kind == memgc::EntityKind::face) ++faces;
  std::map<std::int64_t, std::int64_t> segments;
  for (const auto& node : graph.text_nodes) ++segments[node.clip];

  if (format == "tabular") {
    std::cout << "metric,value\n";
    std::cout << "embedding_dim," << graph.embedding_dim << '\n';
    std::cout << "text_nodes," << graph.text_nodes.size() << '\n';
    std::cout << "entity_nodes," << graph.entity_nodes.size() << '\n';
    std::cout << "face_nodes," << faces << '\n';
    std::cout << "voice_nodes," << graph.entity_nodes.size() - faces << '\n';
    std::cout << "edges," << graph.edges.size() << '\n';
    std::cout << "isolated," << part.isolated.size() << '\n';
    std::cout << "connected," << part.connected.size() << '\n';
    std::cout << "segments," << segments.size() << '\n';
    for (const auto& [clip, count] : segments)
      std::cout << "segment_" << clip << ',' << count << '\n';
  } else {
    std::cout << "embedding dim:  " << graph.embedding_dim << '\n';
    std::cout << "text nodes:     " << graph.text_nodes.size() << " (" << part.isolated.size()
              << " isolated, " << part.connected.size() << " connected)\n";
    std::cout << "entity nodes:   " << graph.entity_nodes.size() << " (" << faces << " face, "
              << graph.entity_nodes.size() - faces << " voice)\n";
    std::cout << "edges:          " << graph.edges.size() << '\n';
    std::cout << "segments:       " << segments.size() << '\n';
    for (const auto& [clip, count] : segments)
      std::cout << "  clip " << clip << ": " << count << " nodes\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory graph compression and retrieval toolkit"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic memory graph");
  std::string gen_out;
  std::int64_t gen_n_text = 2000, gen_segments = 20, gen_entities = 40, gen_topics = 10;
  int gen_dim = 64;
  double gen_connected = 0.5, gen_noise = 0.1, gen_dup = 0.0;
  gen->add_option("--out", gen_out, "output graph file")->required();
  gen->add_option("--n-text", gen_n_text, "text node count");
  gen->add_option("--segments", gen_segments, "clip segment count");
  gen->add_option("--dim", gen_dim, "embedding dimension");
  gen->add_option("--entities", gen_entities, "entity node count");
  gen->add_option("--connected-fraction", gen_connected, "fraction of text nodes with edges");
  gen->add_option("--topics", gen_topics, "planted topic count");
  gen->add_option("--noise", gen_noise, "per-coordinate topic noise sigma");
  gen->add_option("--dup-fraction", gen_dup, "fraction of near-duplicate nodes");
  gen->add_option("--seed", seed_flag, "rng seed (falls back to MEMGC_SEED, then 0)");

  // compress
  auto* compress = app.add_subcommand("compress", "compress a memory graph");
  std::string c_in, c_out, c_method = "streammeco", c_report;
  double c_ratio = 0.0, c_a = 0.05, c_b = 0.1, c_dart_frac = 0.02, c_adj_thr = 0.7;
  std::optional<double> c_alpha, c_beta;
  compress->add_option("--in", c_in, "input graph file")->required();
  compress->add_option("--out", c_out, "output graph file")->required();
  compress->add_option("--ratio", c_ratio, "fraction of text nodes to remove, in [0, 1)")
      ->required();
  compress->add_option("--method", c_method,
                       "streammeco|random|clustering|dart|adjacent-fifo|capacity-evict");
  compress->add_option("--a", c_a, "cluster count ratio (isolated branch)");
  compress->add_option("--b", c_b, "importance/diversity balance (connected branch)");
  compress->add_option("--report", c_report, "also write a compression report file");
  compress->add_option("--dart-pivot-fraction", c_dart_frac, "pivot fraction for dart");
  compress->add_option("--adjacent-threshold", c_adj_thr, "similarity threshold for adjacent-fifo");
  compress->add_option("--isolated-retention", c_alpha, "override isolated branch retention");
  compress->add_option("--connected-retention", c_beta, "override connected branch retention");
  compress->add_option("--seed", seed_flag, "rng seed (falls back to MEMGC_SEED, then 0)");

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "query a memory graph");
  std::string r_in, r_query, r_query_inline, r_mode = "tmr", r_decay = "exp", r_format = "human";
  std::int64_t r_k = 10;
  double r_lambda = 0.1;
  retrieve->add_option("--in", r_in, "graph file")->required();
  retrieve->add_option("--query", r_query, "query vector file, one real per line");
  retrieve->add_option("--query-inline", r_query_inline, "comma-separated query vector");
  retrieve->add_option("--k", r_k, "result count");
  retrieve->add_option("--mode", r_mode, "tmr|character|semantic");
  retrieve->add_option("--lambda", r_lambda, "decay rate");
  retrieve->add_option("--decay", r_decay, "exp|linear|piecewise");
  retrieve->add_option("--format", r_format, "human|tabular");

  // bench
  auto* bench = app.add_subcommand("bench", "compression/retrieval benchmark sweep");
  std::string b_in, b_ratios = "0,0.3,0.5,0.7",
              b_methods = "streammeco,random,clustering,dart,adjacent-fifo,capacity-evict",
              b_queries, b_decay = "exp", b_out = "bench-report";
  std::int64_t b_repeats = 3, b_k = 10;
  double b_lambda = 0.1, b_a = 0.05, b_b = 0.1;
  bench->add_option("--in", b_in, "graph file")->required();
  bench->add_option("--ratios", b_ratios, "comma-separated compression ratios");
  bench->add_option("--methods", b_methods, "comma-separated policies");
  bench->add_option("--queries", b_queries, "directory of .vec query files")->required();
  bench->add_option("--repeats", b_repeats, "timed repeats per query (>= 3)");
  bench->add_option("--k", b_k, "retrieval depth");
  bench->add_option("--lambda", b_lambda, "decay rate");
  bench->add_option("--decay", b_decay, "exp|linear|piecewise");
  bench->add_option("--a", b_a, "cluster count ratio");
  bench->add_option("--b", b_b, "importance/diversity balance");
  bench->add_option("--out", b_out, "output directory");
  bench->add_option("--seed", seed_flag, "rng seed (falls back to MEMGC_SEED, then 0)");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print graph structure summary");
  std::string i_in, i_format = "human";
  inspect->add_option("--in", i_in, "graph file")->required();
  inspect->add_option("--format", i_format, "human|tabular");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed())
      return run_gen(gen_out, gen_n_text, gen_segments, gen_dim, gen_entities, gen_connected,
                     gen_topics, gen_noise, gen_dup, seed_or_env(seed_flag));
    if (compress->parsed())
      return run_compress(c_in, c_out, c_ratio, c_method, c_a, c_b, seed_or_env(seed_flag),
                          c_report, c_dart_frac, c_adj_thr, c_alpha, c_beta);
    if (retrieve->parsed())
      return run_retrieve(r_in, r_query, r_query_inline, r_k, r_mode, r_lambda, r_decay, r_format);
    if (bench->parsed())
      return run_bench_cmd(b_in, b_ratios, b_methods, b_queries, b_repeats, b_k, b_lambda, b_decay,
                           b_a, b_b, seed_or_env(seed_flag), b_out);
    if (inspect->parsed()) return run_inspect(i_in, i_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
