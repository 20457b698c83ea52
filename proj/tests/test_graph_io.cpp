#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "memgc/benchkit.hpp"
#include "memgc/graph_io.hpp"
#include "memgc/vecmath.hpp"

using memgc::GraphIoError;
using memgc::MemoryGraph;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/memgc_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) const {
    std::ofstream out(path);
    out << content;
  }
  std::string read() const {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
};

MemoryGraph sample() {
  memgc::GenConfig cfg;
  cfg.n_text = 40;
  cfg.n_entities = 6;
  cfg.n_segments = 4;
  cfg.n_topics = 3;
  cfg.embedding_dim = 5;
  cfg.seed = 77;
  return memgc::generate(cfg);
}

}  // namespace

TEST_CASE("save/load round trip preserves the graph") {
  const auto g = sample();
  TempFile f("roundtrip.json");
  memgc::save_graph(g, f.path);
  const auto back = memgc::load_graph(f.path);

  REQUIRE(back.text_nodes.size() == g.text_nodes.size());
  REQUIRE(back.entity_nodes.size() == g.entity_nodes.size());
  REQUIRE(back.edges.size() == g.edges.size());
  CHECK(back.embedding_dim == g.embedding_dim);
  for (std::size_t i = 0; i < g.text_nodes.size(); ++i) {
    CHECK(back.text_nodes[i].id == g.text_nodes[i].id);
    CHECK(back.text_nodes[i].content == g.text_nodes[i].content);
    CHECK(back.text_nodes[i].clip == g.text_nodes[i].clip);
    for (std::size_t d = 0; d < g.text_nodes[i].embedding.size(); ++d)
      CHECK(back.text_nodes[i].embedding[d] ==
            doctest::Approx(g.text_nodes[i].embedding[d]).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < g.entity_nodes.size(); ++i) {
    CHECK(back.entity_nodes[i].id == g.entity_nodes[i].id);
    CHECK(back.entity_nodes[i].kind == g.entity_nodes[i].kind);
    CHECK(back.entity_nodes[i].label == g.entity_nodes[i].label);
  }
  // the stored graph orders edges by (entity, text)
  auto expected = g.edges;
  std::sort(expected.begin(), expected.end(), [](const memgc::Edge& a, const memgc::Edge& b) {
    return std::tie(a.entity_id, a.text_id) < std::tie(b.entity_id, b.text_id);
  });
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(back.edges[i].entity_id == expected[i].entity_id);
    CHECK(back.edges[i].text_id == expected[i].text_id);
    CHECK(back.edges[i].weight == expected[i].weight);  // full-precision reals
  }
}

TEST_CASE("a second save of the loaded graph is byte-identical") {
  const auto g = sample();
  TempFile a("stable_a.json"), b("stable_b.json");
  memgc::save_graph(g, a.path);
  memgc::save_graph(memgc::load_graph(a.path), b.path);
  CHECK(a.read() == b.read());
}

TEST_CASE("load canonicalizes array order by id") {
  TempFile f("shuffled.json");
  f.write(R"({
    "embedding_dim": 2,
    "text_nodes": [
      {"id": 5, "content": "later", "embedding": [0.0, 1.0], "clip": 1},
      {"id": 2, "content": "earlier", "embedding": [1.0, 0.0], "clip": 0}
    ],
    "entity_nodes": [
      {"id": 9, "kind": "voice", "label": "v"},
      {"id": 4, "kind": "face", "label": "f"}
    ],
    "edges": [
      {"entity": 9, "text": 5, "weight": 1.5},
      {"entity": 4, "text": 2, "weight": 0.5},
      {"entity": 4, "text": 5, "weight": 2.5}
    ]
  })");
  const auto g = memgc::load_graph(f.path);
  CHECK(g.text_nodes[0].id == 2);
  CHECK(g.text_nodes[1].id == 5);
  CHECK(g.entity_nodes[0].id == 4);
  CHECK(g.entity_nodes[1].id == 9);
  CHECK(g.edges[0].entity_id == 4);
  CHECK(g.edges[0].text_id == 2);
  CHECK(g.edges[1].entity_id == 4);
  CHECK(g.edges[1].text_id == 5);
  CHECK(g.edges[2].entity_id == 9);
}

TEST_CASE("load re-normalizes embeddings") {
  TempFile f("nonunit.json");
  f.write(R"({
    "embedding_dim": 2,
    "text_nodes": [{"id": 0, "content": "x", "embedding": [3.0, 4.0], "clip": 0}],
    "entity_nodes": [],
    "edges": []
  })");
  const auto g = memgc::load_graph(f.path);
  CHECK(g.text_nodes[0].embedding[0] == doctest::Approx(0.6));
  CHECK(g.text_nodes[0].embedding[1] == doctest::Approx(0.8));
}

TEST_CASE("load errors carry context") {
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(memgc::load_graph("/tmp/memgc_no_such_file.json"),
                         doctest::Contains("cannot open"), GraphIoError);
  }
  SUBCASE("malformed json names the file") {
    TempFile f("broken.json");
    f.write("{ not json");
    CHECK_THROWS_WITH_AS(memgc::load_graph(f.path), doctest::Contains(f.path.c_str()),
                         GraphIoError);
  }
  SUBCASE("missing field is named") {
    TempFile f("nofield.json");
    f.write(R"({
      "embedding_dim": 2,
      "text_nodes": [{"id": 0, "content": "x", "clip": 0}],
      "entity_nodes": [],
      "edges": []
    })");
    CHECK_THROWS_WITH_AS(memgc::load_graph(f.path),
                         doctest::Contains("missing field 'embedding' in text_nodes[0]"),
                         GraphIoError);
  }
  SUBCASE("zero-norm embedding names the node") {
    TempFile f("zeronorm.json");
    f.write(R"({
      "embedding_dim": 2,
      "text_nodes": [{"id": 7, "content": "x", "embedding": [0.0, 0.0], "clip": 0}],
      "entity_nodes": [],
      "edges": []
    })");
    CHECK_THROWS_WITH_AS(memgc::load_graph(f.path),
                         doctest::Contains("zero-norm embedding on text node 7"), GraphIoError);
  }
  SUBCASE("dimension mismatch rejected") {
    TempFile f("badim.json");
    f.write(R"({
      "embedding_dim": 3,
      "text_nodes": [{"id": 0, "content": "x", "embedding": [1.0, 0.0], "clip": 0}],
      "entity_nodes": [],
      "edges": []
    })");
    CHECK_THROWS_AS(memgc::load_graph(f.path), GraphIoError);
  }
  SUBCASE("structural defects listed with codes") {
    TempFile f("dupid.json");
    f.write(R"({
      "embedding_dim": 2,
      "text_nodes": [
        {"id": 0, "content": "x", "embedding": [1.0, 0.0], "clip": 0},
        {"id": 0, "content": "y", "embedding": [0.0, 1.0], "clip": 0}
      ],
      "entity_nodes": [],
      "edges": []
    })");
    CHECK_THROWS_WITH_AS(memgc::load_graph(f.path), doctest::Contains("duplicate-text-id"),
                         GraphIoError);
  }
  SUBCASE("negative edge weight rejected") {
    TempFile f("negw.json");
    f.write(R"({
      "embedding_dim": 2,
      "text_nodes": [{"id": 0, "content": "x", "embedding": [1.0, 0.0], "clip": 0}],
      "entity_nodes": [{"id": 0, "kind": "face", "label": "f"}],
      "edges": [{"entity": 0, "text": 0, "weight": -1.0}]
    })");
    CHECK_THROWS_WITH_AS(memgc::load_graph(f.path), doctest::Contains("negative-weight"),
                         GraphIoError);
  }
}

TEST_CASE("save rejects an invalid graph") {
  auto g = sample();
  g.text_nodes[0].id = g.text_nodes[1].id;
  TempFile f("invalid_save.json");
  CHECK_THROWS_AS(memgc::save_graph(g, f.path), GraphIoError);
}
