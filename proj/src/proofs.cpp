#include "ngfix/proofs.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ngfix/builder.hpp"
#include "ngfix/fixing.hpp"
#include "ngfix/hardness.hpp"
#include "ngfix/search.hpp"
#include "ngfix/synth.hpp"
#include "ngfix/workload.hpp"

namespace ngfix {

namespace {

VectorStore random_store(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::vector<float> data(n * d);
  for (float& x : data) x = gauss(rng);
  return VectorStore::create(std::move(data), d, MetricKind::SquaredL2);
}

GraphIndex random_graph(std::mt19937_64& rng, const VectorStore& store, std::uint32_t max_deg) {
  const std::size_t n = store.count();
  GraphIndex g(n, max_deg, kUnlimitedDegree, store.metric(),
               static_cast<std::uint32_t>(store.dim()));
  std::uniform_int_distribution<std::uint32_t> deg_pick(1, max_deg);
  std::uniform_int_distribution<std::size_t> target_pick(0, n - 1);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<VertexId> adj;
    const std::uint32_t deg = deg_pick(rng);
    for (std::uint32_t e = 0; e < deg; ++e) {
      const VertexId t = static_cast<VertexId>(target_pick(rng));
      if (t != v) adj.push_back(t);
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    g.set_base_neighbors(static_cast<VertexId>(v), std::move(adj));
  }
  g.set_entry(0);
  return g;
}

std::vector<float> random_query(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::uniform_real_distribution<float> scale(0.5f, 3.0f);
  const float s = scale(rng);
  std::vector<float> q(d);
  for (float& x : q) x = s * gauss(rng);
  return q;
}

/// Rank-space BFS inside the S-rank prefix of a neighboring graph.
std::vector<std::uint8_t> ng_reachable(const NeighboringGraph& ng, std::uint32_t from_rank0) {
  std::vector<std::uint8_t> seen(ng.size(), 0);
  std::vector<std::uint32_t> stack{from_rank0};
  seen[from_rank0] = 1;
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    for (std::uint32_t v : ng.adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

bool visited_contains(const SearchResult& res, VertexId id) {
  for (const auto& [v, dist] : res.visited) {
    if (v == id) return true;
  }
  return false;
}

std::string note(std::uint64_t trial_seed, const std::string& detail) {
  std::ostringstream os;
  os << "trial_seed=" << trial_seed << " " << detail;
  return os.str();
}

}  // namespace

PropertyCheck subgraph_visit_suite(std::uint64_t seed, std::size_t trials, std::size_t max_n) {
  if (trials == 0) throw std::invalid_argument("subgraph_visit_suite: trials must be >= 1");
  PropertyCheck check;
  check.name = "subgraph-reach-implies-visit";
  std::mt19937_64 master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> n_pick(8, max_n);
    std::uniform_int_distribution<std::size_t> d_pick(2, 8);
    const std::size_t n = n_pick(rng);
    const VectorStore store = random_store(rng, n, d_pick(rng));
    const GraphIndex graph = random_graph(rng, store, 4);
    const std::vector<float> query = random_query(rng, store.dim());
    std::uniform_int_distribution<std::size_t> s_pick(2, n);
    const std::size_t s = s_pick(rng);
    const KnnList knn = naive_knn_reference(store, query.data(), s);
    const NeighboringGraph ng = neighboring_graph(graph, knn, s);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> reachable_pairs;
    for (std::uint32_t i = 0; i < s; ++i) {
      const auto seen = ng_reachable(ng, i);
      for (std::uint32_t j = 0; j < s; ++j) {
        if (i != j && seen[j]) reachable_pairs.emplace_back(i, j);
      }
    }
    std::shuffle(reachable_pairs.begin(), reachable_pairs.end(), rng);
    if (reachable_pairs.size() > 12) reachable_pairs.resize(12);

    SearchContext ctx;
    SearchOptions opts;
    opts.capture_visited = true;
    for (const auto& [i, j] : reachable_pairs) {
      ++check.checks;
      const SearchResult res =
          greedy_search(graph, store, query.data(), 1, knn.ids[i], s, opts, &ctx);
      if (!visited_contains(res, knn.ids[j])) {
        ++check.failures;
        std::ostringstream detail;
        detail << "n=" << n << " S=" << s << " i=" << i + 1 << " j=" << j + 1;
        check.failure_notes.push_back(note(trial_seed, detail.str()));
      }
    }
  }
  check.trials = trials;
  return check;
}

PropertyCheck hardness_beam_suite(std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("hardness_beam_suite: trials must be >= 1");
  PropertyCheck check;
  check.name = "hardness-bounds-beam";
  std::mt19937_64 master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> n_pick(12, 300);
    std::uniform_int_distribution<std::size_t> d_pick(2, 8);
    std::uniform_int_distribution<std::uint32_t> nq_pick(2, 10);
    const std::size_t n = n_pick(rng);
    const VectorStore store = random_store(rng, n, d_pick(rng));
    const GraphIndex graph = random_graph(rng, store, 4);
    const std::vector<float> query = random_query(rng, store.dim());
    const std::uint32_t n_q = nq_pick(rng);
    const std::size_t max_s = std::min<std::size_t>(5 * n_q, n);
    const KnnList knn = naive_knn_reference(store, query.data(), max_s);
    const NeighboringGraph ng = neighboring_graph(graph, knn, max_s);
    const HardnessMatrix h = compute_hardness(ng, std::min<std::uint32_t>(n_q, max_s));

    std::vector<std::pair<std::uint32_t, std::uint32_t>> finite_pairs;
    for (std::uint32_t i = 1; i <= h.n_q; ++i) {
      for (std::uint32_t j = 1; j <= h.n_q; ++j) {
        if (i != j && h.at(i, j) != kEhInfinite) finite_pairs.emplace_back(i, j);
      }
    }
    std::shuffle(finite_pairs.begin(), finite_pairs.end(), rng);
    if (finite_pairs.size() > 12) finite_pairs.resize(12);

    SearchContext ctx;
    SearchOptions opts;
    opts.capture_visited = true;
    for (const auto& [i, j] : finite_pairs) {
      ++check.checks;
      const std::size_t l = h.at(i, j);
      const SearchResult res =
          greedy_search(graph, store, query.data(), 1, knn.ids[i - 1], l, opts, &ctx);
      if (!visited_contains(res, knn.ids[j - 1])) {
        ++check.failures;
        std::ostringstream detail;
        detail << "n=" << n << " n_q=" << h.n_q << " i=" << i << " j=" << j << " H=" << l;
        check.failure_notes.push_back(note(trial_seed, detail.str()));
      }
    }
  }
  check.trials = trials;
  return check;
}

PropertyCheck closure_oracle_suite(std::uint64_t seed, std::size_t trials, std::size_t max_s) {
  if (trials == 0) throw std::invalid_argument("closure_oracle_suite: trials must be >= 1");
  PropertyCheck check;
  check.name = "closure-matches-oracle";
  std::mt19937_64 master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> s_pick(2, max_s);
    const std::size_t s = s_pick(rng);
    std::uniform_int_distribution<std::size_t> edges_pick(0, 3 * s);
    std::uniform_int_distribution<std::uint32_t> rank_pick(1, static_cast<std::uint32_t>(s));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    const std::size_t n_edges = edges_pick(rng);
    for (std::size_t e = 0; e < n_edges; ++e) {
      const std::uint32_t i = rank_pick(rng);
      const std::uint32_t j = rank_pick(rng);
      if (i != j) edges.emplace_back(i, j);
    }
    const NeighboringGraph ng = NeighboringGraph::from_rank_edges(s, edges);
    std::uniform_int_distribution<std::uint32_t> nq_pick(1, static_cast<std::uint32_t>(s));
    const std::uint32_t n_q = nq_pick(rng);
    const HardnessMatrix h = compute_hardness(ng, n_q);
    for (std::uint32_t i = 1; i <= n_q; ++i) {
      for (std::uint32_t j = 1; j <= n_q; ++j) {
        ++check.checks;
        const std::uint32_t expected = brute_force_eh(ng, i, j);
        if (h.at(i, j) != expected) {
          ++check.failures;
          std::ostringstream detail;
          detail << "S=" << s << " n_q=" << n_q << " i=" << i << " j=" << j << " got=" << h.at(i, j)
                 << " want=" << expected;
          check.failure_notes.push_back(note(trial_seed, detail.str()));
        }
      }
    }
  }
  check.trials = trials;
  return check;
}

PropertyCheck edge_bound_suite(std::uint64_t seed, std::size_t trials, bool inject_skip_reach_update) {
  if (trials == 0) throw std::invalid_argument("edge_bound_suite: trials must be >= 1");
  PropertyCheck check;
  check.name = "edge-budget-bound";
  std::mt19937_64 master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> n_pick(16, 250);
    std::uniform_int_distribution<std::size_t> d_pick(2, 8);
    std::uniform_int_distribution<std::uint32_t> nq_pick(2, 12);
    const std::size_t n = n_pick(rng);
    const VectorStore store = random_store(rng, n, d_pick(rng));
    GraphIndex graph = random_graph(rng, store, 4);
    std::uniform_int_distribution<int> mex_pick(0, 1);
    graph.set_m_ex(mex_pick(rng) ? kUnlimitedDegree : 4);
    const std::vector<float> query = random_query(rng, store.dim());
    const std::uint32_t n_q = nq_pick(rng);
    FixConfig cfg;
    cfg.n_q = n_q;
    cfg.k_h = n_q + (nq_pick(rng) % n_q);
    const std::uint32_t max_s = cfg.effective_max_s(n);
    const KnnList knn = naive_knn_reference(store, query.data(), max_s);
    const NeighboringGraph ng = neighboring_graph(graph, knn, max_s);
    const std::uint32_t n_q_eff = std::min<std::uint32_t>(n_q, max_s);
    const HardnessMatrix h = compute_hardness(ng, n_q_eff);
    ReachableMatrix t = reachable_matrix(h, std::max(cfg.k_h, n_q_eff));
    const NgfixStats stats =
        detail::ngfix_impl(graph, store, knn, cfg, h, t, inject_skip_reach_update);
    ++check.checks;
    if (stats.link_attempts > 2 * (n_q_eff - 1)) {
      ++check.failures;
      std::ostringstream detail;
      detail << "n=" << n << " n_q=" << n_q_eff << " links=" << stats.link_attempts
             << " bound=" << 2 * (n_q_eff - 1);
      check.failure_notes.push_back(note(trial_seed, detail.str()));
    }
  }
  check.trials = trials;
  return check;
}

PropertyCheck full_recall_suite(std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("full_recall_suite: trials must be >= 1");
  PropertyCheck check;
  check.name = "historical-full-recall";
  std::mt19937_64 master(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);
    std::uniform_int_distribution<std::size_t> n_pick(200, 600);
    std::uniform_int_distribution<std::size_t> d_pick(4, 12);
    std::uniform_int_distribution<std::size_t> q_pick(5, 16);
    std::uniform_int_distribution<std::uint32_t> nq_pick(3, 8);
    std::uniform_real_distribution<double> shift_pick(0.0, 10.0);

    SynthConfig synth_cfg;
    synth_cfg.n = n_pick(rng);
    synth_cfg.dim = d_pick(rng);
    synth_cfg.n_queries = q_pick(rng);
    synth_cfg.shift = shift_pick(rng);
    synth_cfg.seed = trial_seed;
    synth_cfg.ood_fraction = 0.5;
    SynthData data = synth_ood(synth_cfg);

    BaseBuildConfig build_cfg;
    build_cfg.m = 6;
    build_cfg.ef_construction = 32;
    GraphIndex graph = build_base(data.base, build_cfg);
    graph.set_m_ex(kUnlimitedDegree);

    const std::uint32_t n_q = nq_pick(rng);
    FixConfig fix_cfg;
    fix_cfg.n_q = n_q;
    fix_cfg.k_h = n_q;
    fix_cfg.m_ex = kUnlimitedDegree;
    const std::uint32_t max_s = fix_cfg.effective_max_s(synth_cfg.n);
    data.queries.gt = exact_knn_batch(data.base, data.queries.vectors, max_s, 1);
    data.queries.gt_provenance = GtProvenance::Exact;

    FixWorkloadOptions opts;
    opts.rfix.brute_force_candidates = true;
    opts.rfix.max_iters = 64;
    fix_workload(graph, data.base, data.queries, {&fix_cfg, 1}, opts);

    SearchContext ctx;
    for (std::size_t qi = 0; qi < data.queries.size(); ++qi) {
      const float* q = data.queries.vectors.vector(static_cast<VertexId>(qi));
      for (std::size_t k : {std::size_t{1}, std::size_t{n_q / 2}, std::size_t{n_q}}) {
        if (k == 0) continue;
        ++check.checks;
        const SearchResult res =
            greedy_search(graph, data.base, q, k, graph.entry(), fix_cfg.k_h, {}, &ctx);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < std::min(k, res.ids.size()); ++i) {
          if (res.ids[i] == data.queries.gt[qi].ids[i]) ++hits;
        }
        if (hits != k) {
          ++check.failures;
          std::ostringstream detail;
          detail << "n=" << synth_cfg.n << " n_q=" << n_q << " query=" << qi << " k=" << k;
          check.failure_notes.push_back(note(trial_seed, detail.str()));
        }
      }
    }
  }
  check.trials = trials;
  return check;
}

bool PropertyReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
}

std::string PropertyReport::summary() const {
  std::ostringstream os;
  for (const PropertyCheck& c : checks) {
    os << (c.passed() ? "PASS" : "FAIL") << " " << c.name << ": " << c.trials << " trials, "
       << c.checks << " checks, " << c.failures << " failures\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(c.failure_notes.size(), 5); ++i) {
      os << "  repro: " << c.failure_notes[i] << "\n";
    }
  }
  return os.str();
}

PropertyReport run_property_suite(const PropertySuiteConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("run_property_suite: trials must be >= 1");
  const std::size_t t5 =
      cfg.full_recall_trials ? cfg.full_recall_trials : std::max<std::size_t>(3, cfg.trials / 50);
  PropertyReport report;
  report.checks.push_back(subgraph_visit_suite(cfg.seed, cfg.trials));
  report.checks.push_back(hardness_beam_suite(cfg.seed + 1, cfg.trials));
  report.checks.push_back(closure_oracle_suite(cfg.seed + 2, cfg.trials));
  report.checks.push_back(edge_bound_suite(cfg.seed + 3, cfg.trials, cfg.inject_skip_reach_update));
  report.checks.push_back(full_recall_suite(cfg.seed + 4, t5));
  return report;
}

}  // namespace ngfix
