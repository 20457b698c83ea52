#include "memgc/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "memgc/vecmath.hpp"

namespace memgc {

namespace {

std::vector<double> score_all(const MemoryGraph& graph, const std::vector<double>& query) {
  if (graph.text_nodes.empty()) throw std::invalid_argument("retrieval: empty graph");
  if (static_cast<int>(query.size()) != graph.embedding_dim)
    throw std::invalid_argument("retrieval: query dimension mismatch");
  std::vector<double> scores;
  scores.reserve(graph.text_nodes.size());
  for (const auto& node : graph.text_nodes) scores.push_back(cosine(node.embedding, query));
  return scores;
}

// Indices sorted by score descending, id ascending.
std::vector<std::size_t> rank_by_score(const MemoryGraph& graph, const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return graph.text_nodes[a].id < graph.text_nodes[b].id;
  });
  return order;
}

}  // namespace

std::vector<ScoredNode> character_topk(const MemoryGraph& graph,
                                       const std::vector<double>& query,
                                       std::int64_t k) {
  if (k < 1) throw std::invalid_argument("character_topk: k must be positive");
  const std::vector<double> scores = score_all(graph, query);
  const auto order = rank_by_score(graph, scores);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::vector<ScoredNode> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back(ScoredNode{graph.text_nodes[order[i]].id, scores[order[i]]});
  return out;
}

std::vector<ScoredNode> semantic_segments(const MemoryGraph& graph,
                                          const std::vector<double>& query) {
  const std::vector<double> scores = score_all(graph, query);

  std::map<std::int64_t, std::vector<std::size_t>> segments;  // clip -> node indices
  for (std::size_t i = 0; i < graph.text_nodes.size(); ++i)
    segments[graph.text_nodes[i].clip].push_back(i);

  // Each segment is represented by its best-matching node.
  std::vector<std::pair<std::int64_t, double>> reps;  // (clip, best score)
  for (const auto& [clip, idxs] : segments) {
    double best = scores[idxs[0]];
    for (std::size_t i : idxs) best = std::max(best, scores[i]);
    reps.push_back({clip, best});
  }
  std::stable_sort(reps.begin(), reps.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::int64_t> picked;
  for (std::size_t i = 0; i < reps.size() && i < 2; ++i) picked.push_back(reps[i].first);
  std::sort(picked.begin(), picked.end());  // chronological output

  std::vector<ScoredNode> out;
  for (std::int64_t clip : picked) {
    auto idxs = segments[clip];
    std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
      return graph.text_nodes[a].id < graph.text_nodes[b].id;
    });
    for (std::size_t i : idxs) out.push_back(ScoredNode{graph.text_nodes[i].id, scores[i]});
  }
  return out;
}

double decay_factor(DecayKind kind, double lambda, std::int64_t age) {
  if (age < 0) throw std::invalid_argument("decay_factor: negative age");
  switch (kind) {
    case DecayKind::exponential:
      return std::exp(-lambda * static_cast<double>(age));
    case DecayKind::linear:
      return std::max(0.0, 1.0 - lambda * static_cast<double>(age));
    case DecayKind::piecewise:
      return std::pow(0.5, static_cast<double>(age / 5));  // lambda unused
  }
  throw std::invalid_argument("decay_factor: unknown kind");
}

std::vector<std::int64_t> allocate_segment_counts(const std::vector<double>& decayed_scores,
                                                  const std::vector<std::int64_t>& segment_sizes,
                                                  std::int64_t budget) {
  const std::size_t t = decayed_scores.size();
  if (t == 0 || segment_sizes.size() != t)
    throw std::invalid_argument("allocate_segment_counts: length mismatch");
  std::int64_t total_size = 0;
  for (std::int64_t s : segment_sizes) {
    if (s < 1) throw std::invalid_argument("allocate_segment_counts: empty segment");
    total_size += s;
  }
  if (budget < 0 || budget > total_size)
    throw std::invalid_argument("allocate_segment_counts: budget out of range");

  double score_sum = 0.0;
  for (double s : decayed_scores) {
    if (s < 0.0) throw std::invalid_argument("allocate_segment_counts: negative score");
    score_sum += s;
  }
  if (score_sum <= 0.0)
    throw std::invalid_argument("allocate_segment_counts: all scores zero");

  // Largest remainder over the raw shares; remainder ties favor the more
  // recent (higher-index) segment.
  std::vector<std::int64_t> counts(t);
  std::vector<double> fractional(t);
  std::int64_t assigned = 0;
  for (std::size_t j = 0; j < t; ++j) {
    const double share = decayed_scores[j] / score_sum * static_cast<double>(budget);
    counts[j] = static_cast<std::int64_t>(std::floor(share));
    fractional[j] = share - std::floor(share);
    assigned += counts[j];
  }
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fractional[a] != fractional[b]) return fractional[a] > fractional[b];
    return a > b;
  });
  std::int64_t residual = budget - assigned;
  while (residual > 0) {
    for (std::size_t j : order) {
      if (residual == 0) break;
      ++counts[j];
      --residual;
    }
  }

  // Cap at the segment sizes; surplus goes to the non-saturated segment with
  // the highest score, repeating until exhausted.
  std::int64_t surplus = 0;
  for (std::size_t j = 0; j < t; ++j) {
    if (counts[j] > segment_sizes[j]) {
      surplus += counts[j] - segment_sizes[j];
      counts[j] = segment_sizes[j];
    }
  }
  while (surplus > 0) {
    std::size_t best = t;
    for (std::size_t j = 0; j < t; ++j) {
      if (counts[j] >= segment_sizes[j]) continue;
      if (best == t || decayed_scores[j] > decayed_scores[best] ||
          (decayed_scores[j] == decayed_scores[best] && j > best))
        best = j;
    }
    const std::int64_t room = segment_sizes[best] - counts[best];
    const std::int64_t give = std::min(room, surplus);
    counts[best] += give;
    surplus -= give;
  }
  return counts;
}

TmrResult tmr_retrieve(const MemoryGraph& graph,
                       const std::vector<double>& query,
                       const RetrievalConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("tmr_retrieve: k must be positive");
  const std::vector<double> scores = score_all(graph, query);
  const std::int64_t n = static_cast<std::int64_t>(graph.text_nodes.size());

  std::map<std::int64_t, std::vector<std::size_t>> by_clip;
  for (std::size_t i = 0; i < graph.text_nodes.size(); ++i)
    by_clip[graph.text_nodes[i].clip].push_back(i);
  const std::int64_t t = static_cast<std::int64_t>(by_clip.size());

  TmrResult result;
  result.segments.reserve(static_cast<std::size_t>(t));
  std::int64_t j = 0;
  for (const auto& [clip, idxs] : by_clip) {
    ++j;  // chronological rank, 1-based
    SegmentScore seg;
    seg.index = j;
    seg.clip = clip;
    seg.member_ids.reserve(idxs.size());
    for (std::size_t i : idxs) {
      seg.member_ids.push_back(graph.text_nodes[i].id);
      seg.aggregated += std::max(0.0, scores[i]);
    }
    seg.mean = seg.aggregated / static_cast<double>(idxs.size());
    seg.decayed = seg.mean * decay_factor(cfg.decay, cfg.lambda, t - j);
    result.segments.push_back(std::move(seg));
  }

  double decayed_sum = 0.0;
  for (const auto& seg : result.segments) decayed_sum += seg.decayed;

  const std::int64_t budget = std::min(cfg.k, n);
  if (decayed_sum <= 0.0) {
    // No segment carries any positive similarity mass; recency weighting has
    // nothing to rank, so fall back to the plain top-k.
    result.nodes = character_topk(graph, query, cfg.k);
    for (auto& seg : result.segments) {
      seg.allocated = 0;
      for (const auto& scored : result.nodes)
        if (std::find(seg.member_ids.begin(), seg.member_ids.end(), scored.id) !=
            seg.member_ids.end())
          ++seg.allocated;
    }
    return result;
  }

  std::vector<double> decayed(result.segments.size());
  std::vector<std::int64_t> sizes(result.segments.size());
  for (std::size_t s = 0; s < result.segments.size(); ++s) {
    decayed[s] = result.segments[s].decayed;
    sizes[s] = static_cast<std::int64_t>(result.segments[s].member_ids.size());
  }
  const auto counts = allocate_segment_counts(decayed, sizes, budget);

  std::size_t s = 0;
  for (const auto& [clip, idxs] : by_clip) {
    result.segments[s].allocated = counts[s];
    if (counts[s] > 0) {
      std::vector<std::size_t> ranked = idxs;
      std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return graph.text_nodes[a].id < graph.text_nodes[b].id;
      });
      for (std::int64_t i = 0; i < counts[s]; ++i)
        result.nodes.push_back(
            ScoredNode{graph.text_nodes[ranked[static_cast<std::size_t>(i)]].id,
                       scores[ranked[static_cast<std::size_t>(i)]]});
    }
    ++s;
  }
  return result;
}

std::vector<ScoredNode> retrieve(const MemoryGraph& graph,
                                 const std::vector<double>& query,
                                 const RetrievalConfig& cfg) {
  switch (cfg.mode) {
    case RetrievalMode::character_topk:
      return character_topk(graph, query, cfg.k);
    case RetrievalMode::semantic_segments:
      return semantic_segments(graph, query);
    case RetrievalMode::tmr:
      return tmr_retrieve(graph, query, cfg).nodes;
  }
  throw std::invalid_argument("retrieve: unknown mode");
}

std::string to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::exponential: return "exp";
    case DecayKind::linear: return "linear";
    case DecayKind::piecewise: return "piecewise";
  }
  return "?";
}

std::string to_string(RetrievalMode mode) {
  switch (mode) {
    case RetrievalMode::character_topk: return "character";
    case RetrievalMode::semantic_segments: return "semantic";
    case RetrievalMode::tmr: return "tmr";
  }
  return "?";
}

}  // namespace memgc
