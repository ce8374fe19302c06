#include "ngfix/fixing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ngfix/distance.hpp"
#include "ngfix/parallel.hpp"

namespace ngfix {

std::uint32_t FixConfig::effective_max_s(std::size_t live) const {
  const std::uint64_t cap = max_s_cap ? max_s_cap : std::uint64_t{5} * n_q;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(cap, live));
}

std::vector<FixConfig> parse_fix_schedule(const std::string& text) {
  std::vector<FixConfig> schedule;
  std::stringstream rounds(text);
  std::string round;
  while (std::getline(rounds, round, ',')) {
    if (round.empty()) continue;
    FixConfig cfg;
    if (std::sscanf(round.c_str(), "%u:%u:%u", &cfg.n_q, &cfg.k_h, &cfg.max_s_cap) != 3) {
      throw std::invalid_argument("bad fix round '" + round + "' (expected nq:kh:maxs)");
    }
    if (cfg.n_q == 0) throw std::invalid_argument("fix round with n_q = 0");
    if (cfg.k_h < cfg.n_q) throw std::invalid_argument("fix round with K_h < N_q");
    schedule.push_back(cfg);
  }
  if (schedule.empty()) throw std::invalid_argument("empty fix schedule");
  return schedule;
}

namespace detail {

NgfixStats ngfix_impl(GraphIndex& graph, const VectorStore& store, const KnnList& knn,
                      const FixConfig& cfg, const HardnessMatrix& h, ReachableMatrix& t,
                      bool skip_reach_update) {
  const std::uint32_t n_q = h.n_q;
  if (t.n_q != n_q) throw std::invalid_argument("ngfix: H and T disagree on n_q");
  if (n_q > cfg.n_q) throw std::invalid_argument("ngfix: H tracks more ranks than configured");
  if (knn.size() < n_q) throw std::invalid_argument("ngfix: knn list shorter than n_q");

  struct Candidate {
    float dist;
    std::uint32_t i, j;  // 1-based ranks
    bool operator<(const Candidate& o) const {
      if (dist != o.dist) return dist < o.dist;
      if (i != o.i) return i < o.i;
      return j < o.j;
    }
  };

  std::vector<Candidate> ec;
  for (std::uint32_t i = 1; i <= n_q; ++i) {
    for (std::uint32_t j = 1; j <= n_q; ++j) {
      if (i == j || t.at(i, j)) continue;
      ec.push_back({store.distance_between(knn.ids[i - 1], knn.ids[j - 1]), i, j});
    }
  }
  std::sort(ec.begin(), ec.end());

  NgfixStats stats;
  for (const Candidate& cand : ec) {
    const std::uint32_t s = cand.i, tt = cand.j;
    if (t.at(s, tt)) continue;  // fixed transitively since sorting
    t.set(s, tt);
    ++stats.link_attempts;

    const std::uint32_t raw = h.at(s, tt);
    const std::uint16_t tag =
        raw == kEhInfinite ? kEhTagInfinite
                           : static_cast<std::uint16_t>(std::min<std::uint32_t>(raw, kEhTagInfinite - 1));
    const EdgeAddResult res = graph.add_extra_edge(knn.ids[s - 1], knn.ids[tt - 1], tag);
    if (res == EdgeAddResult::Added || res == EdgeAddResult::Replaced) ++stats.edges_added;

    if (skip_reach_update) continue;
    // Compose reachability through the new edge: i ~> s -> t ~> j.
    for (std::uint32_t i = 1; i <= n_q; ++i) {
      if (!t.at(i, s)) continue;
      std::uint8_t* row_i = t.t.data() + static_cast<std::size_t>(i - 1) * n_q;
      const std::uint8_t* row_t = t.t.data() + static_cast<std::size_t>(tt - 1) * n_q;
      for (std::uint32_t j = 0; j < n_q; ++j) row_i[j] |= row_t[j];
    }
  }
  return stats;
}

}  // namespace detail

NgfixStats ngfix(GraphIndex& graph, const VectorStore& store, const KnnList& knn,
                 const FixConfig& cfg, const HardnessMatrix& h, ReachableMatrix& t) {
  return detail::ngfix_impl(graph, store, knn, cfg, h, t, false);
}

RfixStats rfix_once(GraphIndex& graph, const VectorStore& store, const float* query,
                    const KnnList& knn, std::uint32_t n_q, const RfixOptions& opts,
                    SearchContext* ctx) {
  if (n_q == 0) throw std::invalid_argument("rfix_once: n_q must be positive");
  if (knn.size() < n_q) throw std::invalid_argument("rfix_once: knn list shorter than n_q");

  RfixStats stats;
  SearchOptions probe_opts;
  probe_opts.locked_reads = opts.locked_reads;
  SearchResult probe = greedy_search(graph, store, query, 1, graph.entry(), n_q, probe_opts, ctx);
  if (probe.ids.empty()) {
    stats.outcome = RfixOutcome::Capped;
    return stats;
  }
  const VertexId ann1 = probe.ids[0];
  const float ann1_dist = probe.dists[0];
  if (!(ann1_dist > knn.dists[n_q - 1])) {
    stats.outcome = RfixOutcome::Unnecessary;
    return stats;
  }

  // Candidate set S = points strictly closer to the query than ANN_1.
  std::vector<VertexId> closer;
  if (opts.brute_force_candidates) {
    for (std::size_t v = 0; v < store.count(); ++v) {
      const VertexId id = static_cast<VertexId>(v);
      if (!graph.is_live(id)) continue;
      if (store.distance_to(query, id) < ann1_dist) closer.push_back(id);
    }
  } else {
    const std::size_t l_probe = opts.l_probe ? opts.l_probe : std::size_t{5} * n_q;
    closer = range_collect(graph, store, query, ann1_dist, l_probe, opts.locked_reads, ctx);
  }
  if (closer.empty()) {
    stats.outcome = RfixOutcome::Capped;
    return stats;
  }

  struct Ranked {
    float dist;  // to ANN_1
    VertexId id;
    bool operator<(const Ranked& o) const {
      return dist < o.dist || (dist == o.dist && id < o.id);
    }
  };
  std::vector<Ranked> ranked;
  ranked.reserve(closer.size());
  const float* ann1_vec = store.vector(ann1);
  for (VertexId v : closer) ranked.push_back({store.distance_to(ann1_vec, v), v});
  std::sort(ranked.begin(), ranked.end());

  // MRNG-style pruning spreads the new edges across directions.
  std::vector<Ranked> kept;
  for (const Ranked& cand : ranked) {
    bool keep = true;
    for (const Ranked& r : kept) {
      if (!(store.distance_between(cand.id, r.id) > cand.dist)) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(cand);
  }

  for (const Ranked& cand : kept) {
    const EdgeAddResult res = graph.add_extra_edge(ann1, cand.id, kEhTagInfinite);
    if (res == EdgeAddResult::Added || res == EdgeAddResult::Replaced) ++stats.edges_added;
  }
  stats.outcome = stats.edges_added > 0 ? RfixOutcome::Fixed : RfixOutcome::Capped;
  return stats;
}

std::uint32_t rfix(GraphIndex& graph, const VectorStore& store, const float* query,
                   const KnnList& knn, std::uint32_t n_q, const RfixOptions& opts,
                   SearchContext* ctx) {
  if (opts.max_iters < 1) throw std::invalid_argument("rfix: max_iters must be >= 1");
  std::uint32_t iterations = 0;
  for (std::uint32_t i = 0; i < opts.max_iters; ++i) {
    const RfixStats stats = rfix_once(graph, store, query, knn, n_q, opts, ctx);
    if (stats.outcome == RfixOutcome::Unnecessary) break;
    ++iterations;
    if (stats.outcome == RfixOutcome::Capped) break;
  }
  return iterations;
}

std::uint64_t FixReport::total_edges_added() const {
  std::uint64_t total = 0;
  for (const auto& r : rounds) total += r.ngfix_edges + r.rfix_edges;
  return total;
}

FixReport fix_workload(GraphIndex& graph, const VectorStore& store, const QuerySet& queries,
                       std::span<const FixConfig> schedule, const FixWorkloadOptions& opts) {
  if (schedule.empty()) throw std::invalid_argument("fix_workload: empty schedule");
  FixReport report;
  if (queries.size() == 0) {
    for (const FixConfig& cfg : schedule) report.rounds.push_back({cfg});
    return report;
  }
  if (queries.gt_provenance == GtProvenance::None) {
    throw std::invalid_argument("fix_workload: queries carry no ground truth");
  }

  const std::size_t live = graph.live_count();
  if (live == 0) throw std::invalid_argument("fix_workload: no live vertices to fix");
  for (std::size_t round = 0; round < schedule.size(); ++round) {
    const FixConfig& cfg = schedule[round];
    if (cfg.k_h < cfg.n_q) throw std::invalid_argument("fix_workload: K_h < N_q");
    const std::uint32_t max_s = cfg.effective_max_s(live);
    for (const KnnList& knn : queries.gt) {
      if (knn.size() < max_s) {
        throw std::invalid_argument("fix_workload: ground truth depth " +
                                    std::to_string(knn.size()) + " below MaxS " +
                                    std::to_string(max_s));
      }
    }
    if (cfg.m_ex) graph.set_m_ex(cfg.m_ex);

    FixRoundReport rr;
    rr.cfg = cfg;
    rr.queries = queries.size();
    const bool final_round = round + 1 == schedule.size();
    const auto t0 = std::chrono::steady_clock::now();

    const int threads = resolve_threads(opts.threads);
    const bool locked = threads > 1;
    graph.ensure_locks();
    const std::uint32_t n_q = std::min<std::uint32_t>(cfg.n_q, max_s);

    const long long nq_queries = static_cast<long long>(queries.size());
#pragma omp parallel num_threads(threads) if (threads > 1)
    {
      SearchContext ctx;
      RfixOptions rfix_opts = opts.rfix;
      rfix_opts.locked_reads = locked;
#pragma omp for schedule(dynamic, 1)
      for (long long qi = 0; qi < nq_queries; ++qi) {
        const KnnList& knn = queries.gt[static_cast<std::size_t>(qi)];
        const float* qvec = queries.vectors.vector(static_cast<VertexId>(qi));
        NgfixStats stats;
        if (opts.run_ngfix) {
          const NeighboringGraph ng = neighboring_graph(graph, knn, max_s, locked);
          const HardnessMatrix h = compute_hardness(ng, n_q);
          ReachableMatrix t = reachable_matrix(h, cfg.k_h);
          stats = ngfix(graph, store, knn, cfg, h, t);
        }
        std::uint32_t rfix_edges = 0;
        RfixOutcome final_outcome = RfixOutcome::Unnecessary;
        if (final_round && opts.run_rfix) {
          for (std::uint32_t it = 0; it < rfix_opts.max_iters; ++it) {
            const RfixStats rs = rfix_once(graph, store, qvec, knn, n_q, rfix_opts, &ctx);
            final_outcome = rs.outcome;
            rfix_edges += rs.edges_added;
            if (rs.outcome != RfixOutcome::Fixed) break;
          }
        }
#pragma omp critical(ngfix_report)
        {
          rr.ngfix_edges += stats.edges_added;
          rr.ngfix_link_attempts += stats.link_attempts;
          rr.max_links_per_query = std::max(rr.max_links_per_query, stats.link_attempts);
          rr.rfix_edges += rfix_edges;
          if (final_round && opts.run_rfix) {
            if (final_outcome == RfixOutcome::Unnecessary) ++rr.rfix_unnecessary;
            else if (final_outcome == RfixOutcome::Capped) ++rr.rfix_capped;
            if (rfix_edges > 0) ++rr.rfix_fixed;
          }
        }
      }
    }
    rr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.rounds.push_back(std::move(rr));
  }
  return report;
}

}  // namespace ngfix
