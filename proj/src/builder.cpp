#include "ngfix/builder.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "ngfix/distance.hpp"
#include "ngfix/parallel.hpp"
#include "ngfix/search.hpp"

namespace ngfix {

namespace {

struct Candidate {
  float dist;  // to the vertex being linked
  VertexId id;
  bool operator<(const Candidate& o) const {
    return dist < o.dist || (dist == o.dist && id < o.id);
  }
};

/// RNG-rule selection over candidates sorted ascending by (dist, id):
/// candidate v survives iff for every already-kept r, delta(v, anchor)
/// is strictly below delta(v, r). Caps the result at max_degree.
void select_neighbors(const VectorStore& store, std::vector<Candidate>& candidates,
                      std::uint32_t max_degree, std::vector<VertexId>& out) {
  std::sort(candidates.begin(), candidates.end());
  out.clear();
  for (const Candidate& cand : candidates) {
    if (out.size() >= max_degree) break;
    bool keep = true;
    for (VertexId kept : out) {
      const float between = store.distance_between(cand.id, kept);
      if (between <= cand.dist) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(cand.id);
  }
}

/// Inserts one point: beam search for efC candidates, RNG selection, then
/// reverse links with the same pruning. Adjacency mutations take the
/// vertex lock so insertions may run concurrently.
void link_point(GraphIndex& graph, const VectorStore& store, VertexId id,
                const BaseBuildConfig& cfg, bool locked, SearchContext& ctx) {
  const float* vec = store.vector(id);
  SearchOptions options;
  options.locked_reads = locked;
  SearchResult found =
      greedy_search(graph, store, vec, cfg.ef_construction, graph.entry(), cfg.ef_construction,
                    options, &ctx);

  std::vector<Candidate> candidates;
  candidates.reserve(found.ids.size());
  for (std::size_t i = 0; i < found.ids.size(); ++i) {
    if (found.ids[i] == id) continue;  // re-insertion safety
    candidates.push_back({found.dists[i], found.ids[i]});
  }

  std::vector<VertexId> selected;
  select_neighbors(store, candidates, cfg.m, selected);
  {
    std::lock_guard<std::mutex> guard(graph.vertex_lock(id));
    graph.set_base_neighbors(id, selected);
  }

  std::vector<Candidate> reverse;
  std::vector<VertexId> pruned;
  for (VertexId target : selected) {
    std::lock_guard<std::mutex> guard(graph.vertex_lock(target));
    auto current = graph.base_neighbors(target);
    if (std::find(current.begin(), current.end(), id) != current.end()) continue;
    if (current.size() < cfg.m) {
      graph.append_base_neighbor(target, id);
      continue;
    }
    reverse.clear();
    reverse.push_back({store.distance_between(id, target), id});
    for (VertexId existing : current) {
      reverse.push_back({store.distance_between(existing, target), existing});
    }
    select_neighbors(store, reverse, cfg.m, pruned);
    graph.set_base_neighbors(target, pruned);
  }
}

}  // namespace

GraphIndex build_base(const VectorStore& store, const BaseBuildConfig& cfg) {
  if (store.count() == 0) throw std::invalid_argument("build_base: empty store");
  if (cfg.m < 2) throw std::invalid_argument("build_base: M must be >= 2");
  if (cfg.ef_construction < cfg.m) {
    throw std::invalid_argument("build_base: efC must be >= M");
  }

  GraphIndex graph(store.count(), cfg.m, cfg.m_ex, store.metric(),
                   static_cast<std::uint32_t>(store.dim()));
  graph.set_entry(0);

  const std::size_t n = store.count();
  const int threads = resolve_threads(cfg.threads);
  if (threads <= 1 || n < 3) {
    SearchContext ctx;
    for (std::size_t i = 1; i < n; ++i) {
      link_point(graph, store, static_cast<VertexId>(i), cfg, false, ctx);
    }
  } else {
#pragma omp parallel num_threads(threads)
    {
      SearchContext ctx;
#pragma omp for schedule(dynamic, 64)
      for (long long i = 1; i < static_cast<long long>(n); ++i) {
        link_point(graph, store, static_cast<VertexId>(i), cfg, true, ctx);
      }
    }
  }

  graph.set_entry(medoid(store));
  return graph;
}

VertexId insert_point(GraphIndex& graph, VectorStore& store, std::span<const float> vec,
                      const BaseBuildConfig& cfg) {
  const VertexId id = store.append(vec);
  const VertexId graph_id = graph.add_vertex();
  if (id != graph_id) throw std::logic_error("insert_point: store and graph out of sync");
  if (id == 0) {
    graph.set_entry(0);
    return id;
  }
  SearchContext ctx;
  link_point(graph, store, id, cfg, false, ctx);
  return id;
}

}  // namespace ngfix
