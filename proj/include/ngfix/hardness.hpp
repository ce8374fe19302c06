#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ngfix/graph_index.hpp"
#include "ngfix/workload.hpp"

namespace ngfix {

/// Subgraph induced by the top-S neighbors of a query. Rank r (1-based)
/// maps to ids[r-1]; adjacency is rank-indexed and 0-based internally.
struct NeighboringGraph {
  std::vector<VertexId> ids;
  std::vector<std::vector<std::uint32_t>> adj;  // adj[r0] = out-neighbors (0-based ranks)
  std::size_t size() const { return ids.size(); }

  /// Builds a synthetic rank digraph (test/oracle surface). Edges are
  /// 1-based (i, j) rank pairs.
  static NeighboringGraph from_rank_edges(std::size_t s,
                                          std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);
};

/// Induces the subgraph of `graph` (base plus extra edges) on the top-S
/// entries of `knn`. Errors when the list is shorter than S.
NeighboringGraph neighboring_graph(const GraphIndex& graph, const KnnList& knn, std::size_t s,
                                   bool locked_reads = false);

/// Escape-hardness matrix over the first n_q ranks. Entries are minimax
/// path ranks in {1..MaxS} or kEhInfinite for pairs not connected within
/// the MaxS-rank subgraph. at(i,i) == i.
struct HardnessMatrix {
  std::uint32_t n_q = 0;
  std::uint32_t max_s = 0;
  std::vector<std::uint32_t> h;  // row-major n_q x n_q

  std::uint32_t at(std::uint32_t i, std::uint32_t j) const {  // 1-based ranks
    return h[static_cast<std::size_t>(i - 1) * n_q + (j - 1)];
  }
};

/// Incremental transitive closure over the rank-ordered subgraph: rank h
/// joins at step h, connectivity flips record max(i, j, h). The closure
/// rows are packed bitsets; the inner update is a row-wise OR. Exits early
/// once every tracked pair is finite.
HardnessMatrix compute_hardness(const NeighboringGraph& ng, std::uint32_t n_q);

/// K_h-thresholded boolean reachability matrix.
struct ReachableMatrix {
  std::uint32_t n_q = 0;
  std::vector<std::uint8_t> t;  // row-major n_q x n_q

  bool at(std::uint32_t i, std::uint32_t j) const {  // 1-based ranks
    return t[static_cast<std::size_t>(i - 1) * n_q + (j - 1)] != 0;
  }
  void set(std::uint32_t i, std::uint32_t j) {
    t[static_cast<std::size_t>(i - 1) * n_q + (j - 1)] = 1;
  }
  bool all_ones() const;
};

/// Errors when k_h < n_q (the threshold must cover the tracked ranks).
ReachableMatrix reachable_matrix(const HardnessMatrix& h, std::uint32_t k_h);

/// Literal oracle: smallest S in [max(i,j), MaxS] such that rank i reaches
/// rank j by BFS inside the S-rank prefix subgraph, else kEhInfinite.
/// Test-grade (small instances only).
std::uint32_t brute_force_eh(const NeighboringGraph& ng, std::uint32_t i, std::uint32_t j);

}  // namespace ngfix
