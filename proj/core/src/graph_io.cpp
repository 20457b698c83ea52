#include "memgc/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "memgc/vecmath.hpp"

namespace memgc {

using nlohmann::json;

namespace {

void canonicalize(MemoryGraph& graph) {
  std::sort(graph.text_nodes.begin(), graph.text_nodes.end(),
            [](const TextNode& a, const TextNode& b) { return a.id < b.id; });
  std::sort(graph.entity_nodes.begin(), graph.entity_nodes.end(),
            [](const EntityNode& a, const EntityNode& b) { return a.id < b.id; });
  std::sort(graph.edges.begin(), graph.edges.end(), [](const Edge& a, const Edge& b) {
    if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
    return a.text_id < b.text_id;
  });
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw GraphIoError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

}  // namespace

MemoryGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphIoError("cannot open " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw GraphIoError(path + ": " + e.what());
  }

  MemoryGraph graph;
  try {
    graph.embedding_dim = field(doc, "embedding_dim", "graph").get<int>();
    if (graph.embedding_dim < 1) throw GraphIoError(path + ": embedding_dim must be positive");

    std::size_t idx = 0;
    for (const auto& item : field(doc, "text_nodes", "graph")) {
      const std::string where = "text_nodes[" + std::to_string(idx++) + "]";
      TextNode node;
      node.id = field(item, "id", where).get<std::int64_t>();
      node.content = field(item, "content", where).get<std::string>();
      node.clip = field(item, "clip", where).get<std::int64_t>();
      node.embedding = field(item, "embedding", where).get<std::vector<double>>();
      double sq = 0.0;
      for (double x : node.embedding) sq += x * x;
      // vectors already unit within the validation tolerance keep their
      // exact bits, so save/load/save reproduces a file byte for byte
      if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) {
        try {
          node.embedding = normalize(std::move(node.embedding));
        } catch (const std::invalid_argument&) {
          throw GraphIoError(path + ": zero-norm embedding on text node " +
                             std::to_string(node.id));
        }
      }
      graph.text_nodes.push_back(std::move(node));
    }

    idx = 0;
    for (const auto& item : field(doc, "entity_nodes", "graph")) {
      const std::string where = "entity_nodes[" + std::to_string(idx++) + "]";
      EntityNode node;
      node.id = field(item, "id", where).get<std::int64_t>();
      node.kind = entity_kind_from_string(field(item, "kind", where).get<std::string>());
      node.label = field(item, "label", where).get<std::string>();
      graph.entity_nodes.push_back(std::move(node));
    }

    idx = 0;
    for (const auto& item : field(doc, "edges", "graph")) {
      const std::string where = "edges[" + std::to_string(idx++) + "]";
      Edge edge;
      edge.entity_id = field(item, "entity", where).get<std::int64_t>();
      edge.text_id = field(item, "text", where).get<std::int64_t>();
      edge.weight = field(item, "weight", where).get<double>();
      graph.edges.push_back(edge);
    }
  } catch (const json::exception& e) {
    throw GraphIoError(path + ": " + e.what());
  }

  for (const auto& node : graph.text_nodes) {
    if (static_cast<int>(node.embedding.size()) != graph.embedding_dim)
      throw GraphIoError(path + ": text node " + std::to_string(node.id) +
                         " has dimension " + std::to_string(node.embedding.size()) +
                         ", expected " + std::to_string(graph.embedding_dim));
  }

  canonicalize(graph);
  const ValidationReport report = validate(graph);
  if (!report.ok()) {
    std::string msg = path + ": invalid graph:";
    for (const auto& issue : report.issues) msg += "\n  [" + issue.code + "] " + issue.message;
    throw GraphIoError(msg);
  }
  return graph;
}

void save_graph(const MemoryGraph& graph, const std::string& path) {
  const ValidationReport report = validate(graph);
  if (!report.ok()) {
    std::string msg = "save_graph: invalid graph:";
    for (const auto& issue : report.issues) msg += "\n  [" + issue.code + "] " + issue.message;
    throw GraphIoError(msg);
  }

  MemoryGraph canon = graph;
  canonicalize(canon);

  json doc;
  doc["embedding_dim"] = canon.embedding_dim;
  doc["text_nodes"] = json::array();
  for (const auto& node : canon.text_nodes) {
    doc["text_nodes"].push_back(
        {{"id", node.id}, {"content", node.content}, {"embedding", node.embedding}, {"clip", node.clip}});
  }
  doc["entity_nodes"] = json::array();
  for (const auto& node : canon.entity_nodes) {
    doc["entity_nodes"].push_back(
        {{"id", node.id}, {"kind", to_string(node.kind)}, {"label", node.label}});
  }
  doc["edges"] = json::array();
  for (const auto& edge : canon.edges) {
    doc["edges"].push_back(
        {{"entity", edge.entity_id}, {"text", edge.text_id}, {"weight", edge.weight}});
  }

  std::ofstream out(path);
  if (!out) throw GraphIoError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw GraphIoError("write failed: " + path);
}

}  // namespace memgc
