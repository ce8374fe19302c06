#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ngfix/graph_index.hpp"
#include "ngfix/search.hpp"
#include "ngfix/types.hpp"
#include "ngfix/vector_store.hpp"

namespace ngfix {

/// Ground-truth neighbor list for one query: rank i (1-based) maps to
/// ids[i-1]. Strictly sorted by (distance, id).
struct KnnList {
  std::vector<VertexId> ids;
  std::vector<float> dists;
  std::size_t size() const { return ids.size(); }
};

enum class GtProvenance : std::uint8_t { None, Exact, Approx };

struct QuerySet {
  VectorStore vectors;
  std::vector<KnnList> gt;
  GtProvenance gt_provenance = GtProvenance::None;
  std::uint32_t gt_search_width = 0;  // beam used when provenance == Approx
  bool synthetic = false;
  std::size_t size() const { return vectors.count(); }
};

/// Exact top-`depth` by (distance, id), via a bounded heap with early
/// rejection. Vertices whose state is not Live are excluded when `states`
/// is provided.
KnnList exact_knn(const VectorStore& store, const float* query, std::size_t depth,
                  std::span<const VertexState> states = {});

/// Independent reference: materializes every distance and fully sorts.
/// Kept as the oracle for exact_knn and as the serial baseline in the
/// kernel benchmark.
KnnList naive_knn_reference(const VectorStore& store, const float* query, std::size_t depth,
                            std::span<const VertexState> states = {});

/// Batched exact ground truth, parallel over queries.
std::vector<KnnList> exact_knn_batch(const VectorStore& store, const VectorStore& queries,
                                     std::size_t depth, int threads,
                                     std::span<const VertexState> states = {});

/// Approximate ground truth from a wide greedy search (L_gt >= depth).
KnnList approx_knn(const GraphIndex& graph, const VectorStore& store, const float* query,
                   std::size_t depth, std::size_t l_gt, SearchContext* ctx = nullptr);

std::vector<KnnList> approx_knn_batch(const GraphIndex& graph, const VectorStore& store,
                                      const VectorStore& queries, std::size_t depth,
                                      std::size_t l_gt, int threads);

/// Removes every query whose distance to an earlier kept query is
/// <= tolerance (exact duplicates at tolerance 0). Keeps first occurrences.
QuerySet dedup(const QuerySet& queries, float tolerance);

enum class NoiseInterp : std::uint8_t {
  Variance,  // per-dimension noise variance = sqrt(c/d)  (literal reading)
  StdDev,    // per-dimension noise std-dev  = sqrt(c/d)
};

/// Gaussian query augmentation: emits ceil(ratio) synthetic queries per
/// input query with i.i.d. per-dimension noise controlled by c. Cosine
/// stores re-normalize the synthetic queries.
QuerySet augment(const QuerySet& queries, double ratio, double c, std::uint64_t seed,
                 NoiseInterp interp = NoiseInterp::Variance);

/// Recomputes distances for externally supplied ground-truth id lists and
/// enforces (distance, id) order.
KnnList knn_from_ids(const VectorStore& store, const float* query, std::span<const VertexId> ids);

}  // namespace ngfix
