#include "memgc/graph.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace memgc {

namespace {

std::string fmt_id(std::int64_t id) { return std::to_string(id); }

}  // namespace

ValidationReport validate(const MemoryGraph& graph) {
  ValidationReport report;
  auto issue = [&report](const char* code, std::string message) {
    report.issues.push_back(ValidationIssue{code, std::move(message)});
  };

  std::unordered_set<std::int64_t> text_ids;
  for (const auto& node : graph.text_nodes) {
    if (node.id < 0) issue("negative-id", "text node id " + fmt_id(node.id));
    if (!text_ids.insert(node.id).second)
      issue("duplicate-text-id", "text node id " + fmt_id(node.id));
    if (node.clip < 0)
      issue("negative-clip", "text node " + fmt_id(node.id) + " clip " + fmt_id(node.clip));
    if (static_cast<int>(node.embedding.size()) != graph.embedding_dim) {
      issue("dimension-mismatch",
            "text node " + fmt_id(node.id) + " has dimension " +
                std::to_string(node.embedding.size()) + ", expected " +
                std::to_string(graph.embedding_dim));
      continue;
    }
    double sq = 0.0;
    for (double x : node.embedding) sq += x * x;
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-9)
      issue("non-unit-embedding", "text node " + fmt_id(node.id));
  }

  std::unordered_set<std::int64_t> entity_ids;
  for (const auto& node : graph.entity_nodes) {
    if (node.id < 0) issue("negative-id", "entity node id " + fmt_id(node.id));
    if (!entity_ids.insert(node.id).second)
      issue("duplicate-entity-id", "entity node id " + fmt_id(node.id));
  }

  std::set<std::pair<std::int64_t, std::int64_t>> seen_pairs;
  for (const auto& edge : graph.edges) {
    if (!entity_ids.count(edge.entity_id))
      issue("dangling-edge", "edge references unknown entity " + fmt_id(edge.entity_id));
    if (!text_ids.count(edge.text_id))
      issue("dangling-edge", "edge references unknown text node " + fmt_id(edge.text_id));
    if (edge.weight < 0.0)
      issue("negative-weight", "edge " + fmt_id(edge.entity_id) + "->" +
                                   fmt_id(edge.text_id) + " weight " +
                                   std::to_string(edge.weight));
    if (!seen_pairs.insert({edge.entity_id, edge.text_id}).second)
      issue("duplicate-edge", "edge " + fmt_id(edge.entity_id) + "->" + fmt_id(edge.text_id));
  }

  return report;
}

ConnectivityPartition partition_connectivity(const MemoryGraph& graph) {
  std::unordered_set<std::int64_t> with_edges;
  with_edges.reserve(graph.edges.size());
  for (const auto& edge : graph.edges) with_edges.insert(edge.text_id);

  ConnectivityPartition part;
  for (const auto& node : graph.text_nodes) {
    if (with_edges.count(node.id))
      part.connected.push_back(node.id);
    else
      part.isolated.push_back(node.id);
  }
  return part;
}

MemoryGraph remove_text_nodes(const MemoryGraph& graph, const std::vector<std::int64_t>& ids) {
  std::unordered_set<std::int64_t> known;
  known.reserve(graph.text_nodes.size());
  for (const auto& node : graph.text_nodes) known.insert(node.id);
  std::unordered_set<std::int64_t> doomed;
  doomed.reserve(ids.size());
  for (std::int64_t id : ids) {
    if (!known.count(id))
      throw std::invalid_argument("remove_text_nodes: unknown text id " + fmt_id(id));
    doomed.insert(id);
  }

  MemoryGraph out;
  out.embedding_dim = graph.embedding_dim;
  out.entity_nodes = graph.entity_nodes;
  out.text_nodes.reserve(graph.text_nodes.size() - doomed.size());
  for (const auto& node : graph.text_nodes)
    if (!doomed.count(node.id)) out.text_nodes.push_back(node);
  for (const auto& edge : graph.edges)
    if (!doomed.count(edge.text_id)) out.edges.push_back(edge);
  return out;
}

std::string to_string(EntityKind kind) {
  return kind == EntityKind::face ? "face" : "voice";
}

EntityKind entity_kind_from_string(const std::string& s) {
  if (s == "face") return EntityKind::face;
  if (s == "voice") return EntityKind::voice;
  throw std::invalid_argument("unknown entity kind: " + s);
}

}  // namespace memgc
