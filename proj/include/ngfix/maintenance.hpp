#pragma once

#include <cstdint>
#include <span>

#include "ngfix/fixing.hpp"
#include "ngfix/graph_index.hpp"
#include "ngfix/vector_store.hpp"
#include "ngfix/workload.hpp"

namespace ngfix {

struct MaintenanceConfig {
  double delete_threshold = 0.01;          // tombstone fraction that triggers compaction
  FixConfig repair_fix{100, 100, 500, 0};  // NGFix parameters for deletion repair
  std::uint32_t repair_l = 800;            // beam for the approximate repair ground truth
  int threads = 1;
};

/// Ages the extra edges and replays part of the historical workload:
/// per vertex, removes floor(r * deg_ex) random extra edges and zeroes the
/// surviving tags, then fixes ceil(r * |T|) randomly sampled historical
/// queries. r = 0 is a full no-op. Ground truth for the sampled queries is
/// taken from `history` when present, else computed exactly.
FixReport partial_rebuild(GraphIndex& graph, const VectorStore& store, const QuerySet& history,
                          double r, std::span<const FixConfig> schedule, std::uint64_t seed,
                          const FixWorkloadOptions& opts = {});

/// Lazy deletion: the vertex keeps navigating but is excluded from search
/// results. Deleting the entry point moves it to the nearest live vertex
/// to the mean. Idempotent on tombstoned vertices.
void delete_point(GraphIndex& graph, const VectorStore& store, VertexId id);

/// Removes every tombstoned vertex and all edges into it, then repairs
/// each removed point's neighborhood by treating its vector as a query:
/// approximate kNN over the live points (collected before the edges go
/// away) followed by NGFix on the cleaned graph. Returns the number of
/// removed points; no-op below the threshold unless forced.
std::size_t compact(GraphIndex& graph, const VectorStore& store, const MaintenanceConfig& cfg,
                    bool force = false);

}  // namespace ngfix
