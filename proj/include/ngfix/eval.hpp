#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ngfix/graph_index.hpp"
#include "ngfix/search.hpp"
#include "ngfix/workload.hpp"

namespace ngfix {

/// |top-k(result) intersect top-k(gt)| / k. Both sides are already in
/// (distance, id) order, which settles ties at the k-th distance. A short
/// result intersects what it has; the denominator stays k.
double recall_at_k(const SearchResult& result, const KnnList& gt, std::size_t k);

/// Mean over ranks of delta(ANN_i)/delta(N_i) - 1. Euclidean evaluates on
/// rooted distances; zero true distances contribute 0 when matched exactly
/// and are skipped otherwise. Unsupported for inner product.
double rderr_at_k(const SearchResult& result, const KnnList& gt, std::size_t k, MetricKind metric);

struct SweepRow {
  std::size_t l = 0;
  double recall = 0.0;
  double rderr = 0.0;  // NaN when the metric does not support it
  double mean_ndc = 0.0;
  double qps = 0.0;
};

struct SweepConfig {
  std::size_t k = 10;
  std::size_t l_start = 0;  // 0 -> k
  std::size_t l_step = 10;
  std::size_t l_max = 100;
};

/// Timed single-threaded search loop per L; ground truth and metric
/// evaluation stay outside the timed region.
std::vector<SweepRow> sweep(const GraphIndex& graph, const VectorStore& store,
                            const QuerySet& queries, const SweepConfig& cfg);

/// Header "L,recall,rderr,ndc,qps" plus one row per swept L.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace ngfix
