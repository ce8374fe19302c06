#pragma once

#include <cstdint>
#include <span>

#include "ngfix/graph_index.hpp"
#include "ngfix/vector_store.hpp"

namespace ngfix {

struct BaseBuildConfig {
  std::uint32_t m = 16;                // max base out-degree
  std::uint32_t ef_construction = 200; // construction beam width, >= m
  std::uint64_t seed = 1;              // reserved for randomized insertion orders
  std::uint32_t m_ex = 48;             // extra-degree cap carried by the index
  int threads = 1;                     // parallel insertion (single-threaded is deterministic)
};

/// Incremental proximity-graph construction: points are inserted in id
/// order; each insertion beam-searches the current graph, selects up to M
/// neighbors with the RNG rule (keep v iff for every kept r,
/// delta(v,new) < delta(v,r)), and adds reverse edges pruned the same way.
/// The entry point is the medoid of the final store.
GraphIndex build_base(const VectorStore& store, const BaseBuildConfig& cfg);

/// Appends `vec` to the store and links it exactly as build_base would.
/// Extra adjacency is never touched; the entry point is not recomputed.
/// Requires exclusive access to graph and store.
VertexId insert_point(GraphIndex& graph, VectorStore& store, std::span<const float> vec,
                      const BaseBuildConfig& cfg);

}  // namespace ngfix
