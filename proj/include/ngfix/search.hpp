#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ngfix/graph_index.hpp"
#include "ngfix/types.hpp"
#include "ngfix/vector_store.hpp"

namespace ngfix {

struct SearchResult {
  std::vector<VertexId> ids;   // sorted by (dist, id) ascending, live only
  std::vector<float> dists;    // matching metric values
  std::uint64_t ndc = 0;       // distance evaluations for this search
  std::vector<std::pair<VertexId, float>> visited;  // evaluation order, only if captured
};

struct SearchOptions {
  bool capture_visited = false;
  /// Take the per-vertex lock around adjacency reads. Required while a fix
  /// or build phase may be mutating adjacency on other threads.
  bool locked_reads = false;
};

/// Reusable per-thread scratch: epoch-stamped visited array plus heap
/// buffers, so repeated searches cost O(1) to reset.
class SearchContext {
 public:
  void prepare(std::size_t n) {
    if (stamps_.size() < n) {
      stamps_.assign(n, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {  // wrapped
      stamps_.assign(stamps_.size(), 0);
      epoch_ = 1;
    }
  }
  bool mark_visited(VertexId v) {
    if (stamps_[v] == epoch_) return false;
    stamps_[v] = epoch_;
    return true;
  }
  DistanceCounter counter;
  std::vector<VertexId> scratch_ids;

 private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t epoch_ = 0;
};

/// Best-first beam search. Pops the nearest unexpanded candidate, stops
/// when it is farther than the worst of a full result set, admits
/// neighbors that beat the current worst (or while the set is not full),
/// and returns the k closest. All orderings use the strict total order
/// (distance, id). Tombstoned vertices navigate (candidate heap) but are
/// never admitted to the result set.
SearchResult greedy_search(const GraphIndex& graph, const VectorStore& store, const float* query,
                           std::size_t k, VertexId ep, std::size_t l,
                           const SearchOptions& options = {}, SearchContext* ctx = nullptr);

/// Runs a visited-capturing search with beam `l_big` and returns every
/// visited live vertex with distance(v, query) < radius, in visited order.
std::vector<VertexId> range_collect(const GraphIndex& graph, const VectorStore& store,
                                    const float* query, float radius, std::size_t l_big,
                                    bool locked_reads = false, SearchContext* ctx = nullptr);

}  // namespace ngfix
