#pragma once

#include <stdexcept>
#include <string>

#include "memgc/graph.hpp"

namespace memgc {

struct GraphIoError : std::runtime_error {
  explicit GraphIoError(const std::string& what) : std::runtime_error(what) {}
};

// Reads a graph file and returns the canonical form (arrays ordered by id).
// Embeddings off unit norm are re-normalized; ones already unit within the
// validation tolerance keep their exact bits. Parse and field errors throw
// GraphIoError with context; a zero-norm embedding or a failed structural
// check is an error too.
MemoryGraph load_graph(const std::string& path);

// Writes the canonical form. Reals are serialized with full round-trip
// precision, so save/load preserves ids, clips and weights exactly.
void save_graph(const MemoryGraph& graph, const std::string& path);

}  // namespace memgc
