#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace memgc {

enum class EntityKind { face, voice };

struct TextNode {
  std::int64_t id = 0;
  std::string content;
  std::vector<double> embedding;  // unit L2 norm
  std::int64_t clip = 0;          // source clip index, monotone with wall time
};

struct EntityNode {
  std::int64_t id = 0;  // entity ids live in a namespace separate from text ids
  EntityKind kind = EntityKind::face;
  std::string label;
};

// Edges always run entity -> text with a non-negative weight.
struct Edge {
  std::int64_t entity_id = 0;
  std::int64_t text_id = 0;
  double weight = 0.0;
};

// Heterogeneous memory store: text nodes, face/voice entity nodes and weighted
// entity->text edges. Treated as immutable; anything that changes a graph
// returns a new one.
struct MemoryGraph {
  int embedding_dim = 0;
  std::vector<TextNode> text_nodes;
  std::vector<EntityNode> entity_nodes;
  std::vector<Edge> edges;
};

struct ValidationIssue {
  std::string code;  // stable identifier, e.g. "dangling-edge"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural checks: unique ids, consistent dimensions, unit-norm embeddings
// (1e-9), non-negative weights and clips, edge endpoints of the right kind,
// no duplicate (entity, text) pair.
ValidationReport validate(const MemoryGraph& graph);

struct ConnectivityPartition {
  std::vector<std::int64_t> isolated;   // graph order
  std::vector<std::int64_t> connected;  // graph order
};

// A text node is connected iff at least one edge references it.
ConnectivityPartition partition_connectivity(const MemoryGraph& graph);

// New graph without the given text nodes and their incident edges. Entity
// nodes stay even when their degree drops to zero. Unknown ids are an error.
MemoryGraph remove_text_nodes(const MemoryGraph& graph, const std::vector<std::int64_t>& ids);

// (id, embedding) pair used by the selection routines.
using IdEmbedding = std::pair<std::int64_t, std::vector<double>>;

std::string to_string(EntityKind kind);
EntityKind entity_kind_from_string(const std::string& s);

}  // namespace memgc
