#include "ngfix/search.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "ngfix/distance.hpp"

namespace ngfix {

namespace {

using HeapEntry = std::pair<float, VertexId>;  // (dist, id), lexicographic total order

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>>;
using MaxHeap = std::priority_queue<HeapEntry>;

}  // namespace

SearchResult greedy_search(const GraphIndex& graph, const VectorStore& store, const float* query,
                           std::size_t k, VertexId ep, std::size_t l,
                           const SearchOptions& options, SearchContext* ctx) {
  SearchResult result;
  if (graph.size() == 0) return result;
  if (ep >= graph.size() || !graph.is_navigable(ep)) {
    throw std::invalid_argument("greedy_search: dead entry point " + std::to_string(ep));
  }
  if (l < k) throw std::invalid_argument("greedy_search: L must be >= k");

  SearchContext local;
  if (!ctx) ctx = &local;
  ctx->prepare(graph.size());
  ctx->counter.reset();

  MinHeap candidates;
  MaxHeap beam;  // R: bounded to l, live vertices only

  ctx->mark_visited(ep);
  const float ep_dist = store.distance_to(query, ep, ctx->counter);
  if (options.capture_visited) result.visited.emplace_back(ep, ep_dist);
  candidates.emplace(ep_dist, ep);
  if (graph.is_live(ep)) beam.emplace(ep_dist, ep);

  std::vector<VertexId>& nbrs = ctx->scratch_ids;
  while (!candidates.empty()) {
    const HeapEntry current = candidates.top();
    candidates.pop();
    if (beam.size() == l && current > beam.top()) break;

    nbrs.clear();
    graph.neighbors_into(current.second, options.locked_reads, nbrs);
    for (VertexId v : nbrs) {
      if (!ctx->mark_visited(v)) continue;
      const float dist = store.distance_to(query, v, ctx->counter);
      if (options.capture_visited) result.visited.emplace_back(v, dist);
      const HeapEntry entry(dist, v);
      if (beam.size() < l || entry < beam.top()) {
        candidates.push(entry);
        if (graph.is_live(v)) {
          beam.push(entry);
          if (beam.size() > l) beam.pop();
        }
      }
    }
  }

  std::vector<HeapEntry> ordered(beam.size());
  for (std::size_t i = beam.size(); i-- > 0;) {
    ordered[i] = beam.top();
    beam.pop();
  }
  const std::size_t take = std::min(k, ordered.size());
  result.ids.reserve(take);
  result.dists.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.dists.push_back(ordered[i].first);
    result.ids.push_back(ordered[i].second);
  }
  result.ndc = ctx->counter.ndc;
  return result;
}

std::vector<VertexId> range_collect(const GraphIndex& graph, const VectorStore& store,
                                    const float* query, float radius, std::size_t l_big,
                                    bool locked_reads, SearchContext* ctx) {
  if (l_big < 1) throw std::invalid_argument("range_collect: L must be >= 1");
  SearchOptions options;
  options.capture_visited = true;
  options.locked_reads = locked_reads;
  SearchResult probe = greedy_search(graph, store, query, 1, graph.entry(), l_big, options, ctx);
  std::vector<VertexId> out;
  for (const auto& [id, dist] : probe.visited) {
    if (dist < radius && graph.is_live(id)) out.push_back(id);
  }
  return out;
}

}  // namespace ngfix
