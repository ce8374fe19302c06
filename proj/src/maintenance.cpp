#include "ngfix/maintenance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ngfix/parallel.hpp"

namespace ngfix {

FixReport partial_rebuild(GraphIndex& graph, const VectorStore& store, const QuerySet& history,
                          double r, std::span<const FixConfig> schedule, std::uint64_t seed,
                          const FixWorkloadOptions& opts) {
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("partial_rebuild: r must be in [0, 1]");
  if (r == 0.0) {
    FixReport report;
    for (const FixConfig& cfg : schedule) report.rounds.push_back({cfg});
    return report;
  }

  std::mt19937_64 rng(seed);

  // Age the extra adjacency: drop floor(r * deg) random edges per vertex,
  // zero the tags of the survivors (their hardness no longer reflects the
  // graph that will exist after the replay).
  std::vector<std::uint32_t> victims;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const std::size_t deg = graph.extra_neighbors(static_cast<VertexId>(v)).size();
    const std::size_t drop = static_cast<std::size_t>(r * static_cast<double>(deg));
    if (deg == 0) continue;
    victims.resize(deg);
    std::iota(victims.begin(), victims.end(), 0);
    for (std::size_t i = 0; i < drop; ++i) {  // partial Fisher-Yates
      std::uniform_int_distribution<std::size_t> pick(i, deg - 1);
      std::swap(victims[i], victims[pick(rng)]);
    }
    victims.resize(drop);
    std::sort(victims.begin(), victims.end());
    graph.drop_extra_edges(static_cast<VertexId>(v), victims, /*reset_tags=*/true);
  }

  // Sample ceil(r * |T|) historical queries without replacement.
  const std::size_t total = history.size();
  const std::size_t sample =
      std::min(total, static_cast<std::size_t>(std::ceil(r * static_cast<double>(total))));
  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < sample; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(sample);

  QuerySet replay;
  const std::size_t d = history.vectors.dim();
  std::vector<float> data;
  data.reserve(sample * d);
  for (std::uint32_t qi : order) {
    const float* q = history.vectors.vector(qi);
    data.insert(data.end(), q, q + d);
  }
  replay.vectors = VectorStore::create(std::move(data), d, history.vectors.metric());
  replay.synthetic = history.synthetic;

  std::uint32_t depth_needed = 0;
  const std::size_t live = graph.live_count();
  for (const FixConfig& cfg : schedule) {
    depth_needed = std::max(depth_needed, cfg.effective_max_s(live));
  }
  if (history.gt_provenance != GtProvenance::None) {
    for (std::uint32_t qi : order) replay.gt.push_back(history.gt[qi]);
    replay.gt_provenance = history.gt_provenance;
    replay.gt_search_width = history.gt_search_width;
  } else {
    replay.gt = exact_knn_batch(store, replay.vectors, depth_needed, opts.threads, graph.states());
    replay.gt_provenance = GtProvenance::Exact;
  }

  return fix_workload(graph, store, replay, schedule, opts);
}

void delete_point(GraphIndex& graph, const VectorStore& store, VertexId id) {
  if (id >= graph.size()) throw std::out_of_range("delete_point: vertex out of range");
  if (graph.state(id) == VertexState::Removed) {
    throw std::invalid_argument("delete_point: vertex already compacted away");
  }
  if (graph.state(id) == VertexState::Tombstoned) return;  // idempotent
  graph.set_state(id, VertexState::Tombstoned);
  if (graph.entry() == id) {
    graph.set_entry(graph.live_count() > 0 ? medoid(store, graph.states()) : kInvalidVertex);
  }
}

std::size_t compact(GraphIndex& graph, const VectorStore& store, const MaintenanceConfig& cfg,
                    bool force) {
  std::vector<VertexId> dead;
  std::vector<bool> dead_set(graph.size(), false);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (graph.state(static_cast<VertexId>(v)) == VertexState::Tombstoned) {
      dead.push_back(static_cast<VertexId>(v));
      dead_set[v] = true;
    }
  }
  const double threshold = cfg.delete_threshold * static_cast<double>(graph.size());
  if (dead.empty() || (!force && static_cast<double>(dead.size()) < threshold)) return 0;

  // Entry must be live before the repair searches run.
  if (graph.entry() == kInvalidVertex || !graph.is_live(graph.entry())) {
    if (graph.live_count() == 0) {
      graph.set_entry(kInvalidVertex);
    } else {
      graph.set_entry(medoid(store, graph.states()));
    }
  }

  const std::size_t live = graph.live_count();
  const std::uint32_t max_s = cfg.repair_fix.effective_max_s(live);

  // Collect each deleted point's neighbor list while the tombstones still
  // navigate; results contain live points only.
  std::vector<KnnList> repair_gt(dead.size());
  if (live > 0 && max_s > 0) {
    const std::size_t l_gt = std::max<std::size_t>(cfg.repair_l, max_s);
    const int threads = resolve_threads(cfg.threads);
    const long long n_dead = static_cast<long long>(dead.size());
#pragma omp parallel num_threads(threads) if (threads > 1)
    {
      SearchContext ctx;
#pragma omp for schedule(dynamic, 8)
      for (long long i = 0; i < n_dead; ++i) {
        repair_gt[static_cast<std::size_t>(i)] =
            approx_knn(graph, store, store.vector(dead[static_cast<std::size_t>(i)]), max_s, l_gt,
                       &ctx);
      }
    }
  }

  graph.remove_edges_into(dead_set);
  for (VertexId v : dead) {
    graph.clear_adjacency(v);
    graph.set_state(v, VertexState::Removed);
  }

  if (live == 0) return dead.size();

  const std::uint32_t cfg_n_q = cfg.repair_fix.n_q;
  for (std::size_t i = 0; i < dead.size(); ++i) {
    const KnnList& knn = repair_gt[i];
    const std::uint32_t s = static_cast<std::uint32_t>(std::min<std::size_t>(knn.size(), max_s));
    if (s == 0) continue;
    const std::uint32_t n_q = std::min(cfg_n_q, s);
    const NeighboringGraph ng = neighboring_graph(graph, knn, s);
    const HardnessMatrix h = compute_hardness(ng, n_q);
    ReachableMatrix t = reachable_matrix(h, std::max(cfg.repair_fix.k_h, n_q));
    ngfix(graph, store, knn, cfg.repair_fix, h, t);
  }
  return dead.size();
}

}  // namespace ngfix
