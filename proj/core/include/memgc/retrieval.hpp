#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memgc/graph.hpp"

namespace memgc {

enum class DecayKind { exponential, linear, piecewise };
enum class RetrievalMode { character_topk, semantic_segments, tmr };

struct RetrievalConfig {
  std::int64_t k = 10;
  double lambda = 0.1;
  DecayKind decay = DecayKind::exponential;
  RetrievalMode mode = RetrievalMode::tmr;
};

struct ScoredNode {
  std::int64_t id = 0;
  double score = 0.0;  // cosine to the query
};

// Top min(k, N) text nodes by cosine, descending; ties to the lower id.
std::vector<ScoredNode> character_topk(const MemoryGraph& graph,
                                       const std::vector<double>& query,
                                       std::int64_t k);

// Picks the two segments (distinct clips) whose best-matching node scores
// highest and returns all their nodes, segment-chronological then id order.
std::vector<ScoredNode> semantic_segments(const MemoryGraph& graph,
                                          const std::vector<double>& query);

// exponential: exp(-lambda * age); linear: max(0, 1 - lambda * age);
// piecewise: halved every five segments of age, lambda ignored.
double decay_factor(DecayKind kind, double lambda, std::int64_t age);

struct SegmentScore {
  std::int64_t index = 0;  // chronological rank j, 1-based
  std::int64_t clip = 0;
  std::vector<std::int64_t> member_ids;
  double aggregated = 0.0;  // sum of clamped similarities
  double mean = 0.0;        // aggregated / segment size
  double decayed = 0.0;     // mean * decay(t - j)
  std::int64_t allocated = 0;
};

struct TmrResult {
  std::vector<ScoredNode> nodes;  // segment-chronological, then score desc, id asc
  std::vector<SegmentScore> segments;
};

// Time-decayed retrieval: segments are scored by mean clamped similarity
// times a recency decay, the budget min(k, N) is split across segments by
// largest remainder, and each segment returns its most similar nodes. When
// every decayed score is zero this falls back to character_topk.
TmrResult tmr_retrieve(const MemoryGraph& graph,
                       const std::vector<double>& query,
                       const RetrievalConfig& cfg);

// Budget split used by tmr_retrieve, exposed for testing. Largest-remainder
// rounding of budget * score_j / sum(scores) with remainder ties to the more
// recent segment; counts are capped at the segment sizes and any surplus is
// handed to the non-saturated segment with the highest score.
std::vector<std::int64_t> allocate_segment_counts(const std::vector<double>& decayed_scores,
                                                  const std::vector<std::int64_t>& segment_sizes,
                                                  std::int64_t budget);

// Dispatch on cfg.mode.
std::vector<ScoredNode> retrieve(const MemoryGraph& graph,
                                 const std::vector<double>& query,
                                 const RetrievalConfig& cfg);

std::string to_string(DecayKind kind);
std::string to_string(RetrievalMode mode);

}  // namespace memgc
