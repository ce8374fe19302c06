#include "ngfix/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "ngfix/distance.hpp"

namespace ngfix {

double recall_at_k(const SearchResult& result, const KnnList& gt, std::size_t k) {
  if (k == 0) throw std::invalid_argument("recall_at_k: k must be positive");
  if (gt.size() < k) throw std::invalid_argument("recall_at_k: ground truth shorter than k");
  std::unordered_set<VertexId> truth(gt.ids.begin(), gt.ids.begin() + k);
  const std::size_t have = std::min(k, result.ids.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < have; ++i) {
    if (truth.count(result.ids[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

double rderr_at_k(const SearchResult& result, const KnnList& gt, std::size_t k, MetricKind metric) {
  if (!metric_supports_rderr(metric)) {
    throw std::invalid_argument("rderr_at_k: unsupported for the inner-product metric");
  }
  if (gt.size() < k) throw std::invalid_argument("rderr_at_k: ground truth shorter than k");
  const bool rooted = metric == MetricKind::SquaredL2;
  const std::size_t have = std::min(k, result.ids.size());
  double sum = 0.0;
  std::size_t terms = 0;
  for (std::size_t i = 0; i < have; ++i) {
    double approx = result.dists[i];
    double truth = gt.dists[i];
    if (rooted) {
      approx = std::sqrt(std::max(0.0, approx));
      truth = std::sqrt(std::max(0.0, truth));
    }
    if (truth == 0.0) {
      if (approx == 0.0) {
        ++terms;  // contributes 0
      }
      continue;  // undefined ratio otherwise: term skipped, denominator reduced
    }
    sum += approx / truth - 1.0;
    ++terms;
  }
  return terms == 0 ? 0.0 : sum / static_cast<double>(terms);
}

std::vector<SweepRow> sweep(const GraphIndex& graph, const VectorStore& store,
                            const QuerySet& queries, const SweepConfig& cfg) {
  if (queries.gt_provenance == GtProvenance::None) {
    throw std::invalid_argument("sweep: queries carry no ground truth");
  }
  const std::size_t l_start = cfg.l_start ? cfg.l_start : cfg.k;
  std::vector<SweepRow> rows;
  if (cfg.l_max < l_start) return rows;

  const std::size_t nq = queries.size();
  std::vector<SearchResult> results(nq);
  SearchContext ctx;
  for (std::size_t l = l_start; l <= cfg.l_max; l += cfg.l_step) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t qi = 0; qi < nq; ++qi) {
      results[qi] =
          greedy_search(graph, store, queries.vectors.vector(static_cast<VertexId>(qi)), cfg.k,
                        graph.entry(), l, {}, &ctx);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    SweepRow row;
    row.l = l;
    row.qps = elapsed > 0.0 ? static_cast<double>(nq) / elapsed : 0.0;
    double ndc = 0.0, recall = 0.0, rderr = 0.0;
    const bool has_rderr = metric_supports_rderr(store.metric());
    for (std::size_t qi = 0; qi < nq; ++qi) {
      ndc += static_cast<double>(results[qi].ndc);
      recall += recall_at_k(results[qi], queries.gt[qi], cfg.k);
      if (has_rderr) rderr += rderr_at_k(results[qi], queries.gt[qi], cfg.k, store.metric());
    }
    row.mean_ndc = ndc / static_cast<double>(nq);
    row.recall = recall / static_cast<double>(nq);
    row.rderr = has_rderr ? rderr / static_cast<double>(nq)
                          : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
    if (cfg.l_step == 0) break;
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "L,recall,rderr,ndc,qps\n";
  for (const SweepRow& row : rows) {
    out << row.l << ',' << row.recall << ',' << row.rderr << ',' << row.mean_ndc << ',' << row.qps
        << '\n';
  }
}

}  // namespace ngfix
