#include "ngfix/workload.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include "ngfix/distance.hpp"
#include "ngfix/parallel.hpp"

namespace ngfix {

namespace {

using HeapEntry = std::pair<float, VertexId>;

std::size_t live_total(const VectorStore& store, std::span<const VertexState> states) {
  if (states.empty()) return store.count();
  std::size_t n = 0;
  for (std::size_t i = 0; i < store.count(); ++i) {
    if (states[i] == VertexState::Live) ++n;
  }
  return n;
}

}  // namespace

KnnList exact_knn(const VectorStore& store, const float* query, std::size_t depth,
                  std::span<const VertexState> states) {
  if (depth == 0) throw std::invalid_argument("exact_knn: depth must be positive");
  if (depth > live_total(store, states)) {
    throw std::invalid_argument("exact_knn: depth exceeds live point count");
  }
  std::priority_queue<HeapEntry> heap;  // max-heap of the best `depth`
  for (std::size_t i = 0; i < store.count(); ++i) {
    if (!states.empty() && states[i] != VertexState::Live) continue;
    const VertexId id = static_cast<VertexId>(i);
    const float dist = store.distance_to(query, id);
    const HeapEntry entry(dist, id);
    if (heap.size() < depth) {
      heap.push(entry);
    } else if (entry < heap.top()) {
      heap.push(entry);
      heap.pop();
    }
  }
  KnnList out;
  out.ids.resize(heap.size());
  out.dists.resize(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    out.dists[i] = heap.top().first;
    out.ids[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

KnnList naive_knn_reference(const VectorStore& store, const float* query, std::size_t depth,
                            std::span<const VertexState> states) {
  std::vector<HeapEntry> all;
  all.reserve(store.count());
  for (std::size_t i = 0; i < store.count(); ++i) {
    if (!states.empty() && states[i] != VertexState::Live) continue;
    const VertexId id = static_cast<VertexId>(i);
    all.emplace_back(store.distance_to(query, id), id);
  }
  if (depth > all.size()) throw std::invalid_argument("naive_knn_reference: depth too large");
  std::sort(all.begin(), all.end());
  KnnList out;
  out.ids.reserve(depth);
  out.dists.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    out.dists.push_back(all[i].first);
    out.ids.push_back(all[i].second);
  }
  return out;
}

std::vector<KnnList> exact_knn_batch(const VectorStore& store, const VectorStore& queries,
                                     std::size_t depth, int threads,
                                     std::span<const VertexState> states) {
  if (queries.dim() != store.dim()) throw std::invalid_argument("exact_knn_batch: dim mismatch");
  std::vector<KnnList> out(queries.count());
  const int nthreads = resolve_threads(threads);
  const long long nq = static_cast<long long>(queries.count());
#pragma omp parallel for schedule(dynamic, 8) num_threads(nthreads) if (nthreads > 1)
  for (long long i = 0; i < nq; ++i) {
    out[static_cast<std::size_t>(i)] =
        exact_knn(store, queries.vector(static_cast<VertexId>(i)), depth, states);
  }
  return out;
}

KnnList approx_knn(const GraphIndex& graph, const VectorStore& store, const float* query,
                   std::size_t depth, std::size_t l_gt, SearchContext* ctx) {
  if (l_gt < depth) throw std::invalid_argument("approx_knn: L_gt must be >= depth");
  SearchResult res = greedy_search(graph, store, query, depth, graph.entry(), l_gt, {}, ctx);
  KnnList out;
  out.ids = std::move(res.ids);
  out.dists = std::move(res.dists);
  return out;
}

std::vector<KnnList> approx_knn_batch(const GraphIndex& graph, const VectorStore& store,
                                      const VectorStore& queries, std::size_t depth,
                                      std::size_t l_gt, int threads) {
  std::vector<KnnList> out(queries.count());
  const int nthreads = resolve_threads(threads);
  const long long nq = static_cast<long long>(queries.count());
#pragma omp parallel num_threads(nthreads) if (nthreads > 1)
  {
    SearchContext ctx;
#pragma omp for schedule(dynamic, 8)
    for (long long i = 0; i < nq; ++i) {
      out[static_cast<std::size_t>(i)] =
          approx_knn(graph, store, queries.vector(static_cast<VertexId>(i)), depth, l_gt, &ctx);
    }
  }
  return out;
}

QuerySet dedup(const QuerySet& queries, float tolerance) {
  if (tolerance < 0.0f) throw std::invalid_argument("dedup: tolerance must be >= 0");
  const std::size_t d = queries.vectors.dim();
  std::vector<VertexId> kept;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const float* q = queries.vectors.vector(static_cast<VertexId>(i));
    bool duplicate = false;
    for (VertexId j : kept) {
      if (distance(q, queries.vectors.vector(j), d, queries.vectors.metric()) <= tolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(static_cast<VertexId>(i));
  }
  std::vector<float> data;
  data.reserve(kept.size() * d);
  for (VertexId j : kept) {
    const float* q = queries.vectors.vector(j);
    data.insert(data.end(), q, q + d);
  }
  QuerySet out;
  out.vectors = VectorStore::create(std::move(data), d, queries.vectors.metric());
  out.synthetic = queries.synthetic;
  if (queries.gt_provenance != GtProvenance::None) {
    for (VertexId j : kept) out.gt.push_back(queries.gt[j]);
    out.gt_provenance = queries.gt_provenance;
    out.gt_search_width = queries.gt_search_width;
  }
  return out;
}

QuerySet augment(const QuerySet& queries, double ratio, double c, std::uint64_t seed,
                 NoiseInterp interp) {
  if (c <= 0.0) throw std::invalid_argument("augment: c must be positive");
  if (ratio <= 0.0) throw std::invalid_argument("augment: ratio must be positive");
  const std::size_t d = queries.vectors.dim();
  const std::size_t per_query = static_cast<std::size_t>(std::ceil(ratio));
  const double variance_target = std::sqrt(c / static_cast<double>(d));
  const double sigma =
      interp == NoiseInterp::Variance ? std::sqrt(variance_target) : variance_target;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<float> data;
  data.reserve(queries.size() * per_query * d);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const float* q = queries.vectors.vector(static_cast<VertexId>(i));
    for (std::size_t r = 0; r < per_query; ++r) {
      for (std::size_t j = 0; j < d; ++j) {
        data.push_back(q[j] + static_cast<float>(noise(rng)));
      }
    }
  }
  QuerySet out;
  out.vectors = VectorStore::create(std::move(data), d, queries.vectors.metric());
  out.synthetic = true;
  return out;
}

KnnList knn_from_ids(const VectorStore& store, const float* query, std::span<const VertexId> ids) {
  std::vector<HeapEntry> entries;
  entries.reserve(ids.size());
  for (VertexId id : ids) {
    if (id >= store.count()) throw std::invalid_argument("knn_from_ids: id out of range");
    entries.emplace_back(store.distance_to(query, id), id);
  }
  std::sort(entries.begin(), entries.end());
  KnnList out;
  out.ids.reserve(entries.size());
  out.dists.reserve(entries.size());
  for (const auto& [dist, id] : entries) {
    out.dists.push_back(dist);
    out.ids.push_back(id);
  }
  return out;
}

}  // namespace ngfix
