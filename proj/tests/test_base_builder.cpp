#include <doctest.h>

#include <numeric>
#include <random>

#include "ngfix/builder.hpp"
#include "ngfix/eval.hpp"
#include "ngfix/search.hpp"
#include "ngfix/workload.hpp"

using namespace ngfix;

namespace {

VectorStore gaussian_store(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::vector<float> data(n * d);
  for (float& x : data) x = gauss(rng);
  return VectorStore::create(std::move(data), d, MetricKind::SquaredL2);
}

double probe_recall(const GraphIndex& graph, const VectorStore& store, const VectorStore& queries,
                    std::size_t k, std::size_t l) {
  SearchContext ctx;
  double total = 0.0;
  for (std::size_t i = 0; i < queries.count(); ++i) {
    const float* q = queries.vector(static_cast<VertexId>(i));
    const KnnList gt = exact_knn(store, q, k);
    const SearchResult res = greedy_search(graph, store, q, k, graph.entry(), l, {}, &ctx);
    total += recall_at_k(res, gt, k);
  }
  return total / static_cast<double>(queries.count());
}

bool weakly_connected(const GraphIndex& g) {
  if (g.size() == 0) return true;
  std::vector<std::vector<VertexId>> undirected(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (VertexId t : g.neighbors(static_cast<VertexId>(v))) {
      undirected[v].push_back(t);
      undirected[t].push_back(static_cast<VertexId>(v));
    }
  }
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (VertexId t : undirected[u]) {
      if (!seen[t]) {
        seen[t] = 1;
        ++reached;
        stack.push_back(t);
      }
    }
  }
  return reached == g.size();
}

}  // namespace

TEST_CASE("degenerate builds") {
  SUBCASE("one point") {
    auto store = gaussian_store(1, 1, 4);
    const GraphIndex g = build_base(store, {});
    CHECK(g.size() == 1);
    CHECK(g.neighbors(0).empty());
    CHECK(g.entry() == 0);
  }
  SUBCASE("two points link mutually") {
    auto store = gaussian_store(2, 2, 4);
    const GraphIndex g = build_base(store, {});
    CHECK(g.neighbors(0) == std::vector<VertexId>{1});
    CHECK(g.neighbors(1) == std::vector<VertexId>{0});
  }
  SUBCASE("config validation") {
    auto store = gaussian_store(3, 4, 4);
    BaseBuildConfig bad;
    bad.m = 1;
    CHECK_THROWS(build_base(store, bad));
    bad.m = 8;
    bad.ef_construction = 4;
    CHECK_THROWS(build_base(store, bad));
  }
}

TEST_CASE("1k gaussian build reaches recall 0.95 at L=100") {
  auto store = gaussian_store(10, 1000, 8);
  BaseBuildConfig cfg;
  cfg.m = 16;
  cfg.ef_construction = 200;
  const GraphIndex g = build_base(store, cfg);

  for (std::size_t v = 0; v < g.size(); ++v) {
    CHECK(g.base_neighbors(static_cast<VertexId>(v)).size() <= cfg.m);
  }
  CHECK(weakly_connected(g));

  auto queries = gaussian_store(11, 100, 8);
  CHECK(probe_recall(g, store, queries, 10, 100) >= 0.95);
}

TEST_CASE("insert into an empty graph") {
  VectorStore store = VectorStore::create(std::vector<float>{}, 1, MetricKind::SquaredL2);
  GraphIndex g(0, 8, 8, MetricKind::SquaredL2, 1);
  const std::vector<float> vec{3.0f};
  const VertexId id = insert_point(g, store, vec, {});
  CHECK(id == 0);
  CHECK(g.size() == 1);
  CHECK(g.neighbors(0).empty());
  CHECK(g.entry() == 0);
}

TEST_CASE("inserting a duplicate connects to the original") {
  auto store = gaussian_store(12, 50, 4);
  BaseBuildConfig cfg;
  cfg.m = 8;
  cfg.ef_construction = 32;
  GraphIndex g = build_base(store, cfg);
  std::vector<float> dup(store.vector(7), store.vector(7) + 4);
  const VertexId id = insert_point(g, store, dup, cfg);
  const auto nbrs = g.base_neighbors(id);
  REQUIRE(!nbrs.empty());
  CHECK(nbrs[0] == 7);  // the zero-distance neighbor is kept first
}

TEST_CASE("incremental insertion matches a from-scratch build within 2 recall points") {
  auto big = gaussian_store(13, 1100, 8);
  BaseBuildConfig cfg;
  cfg.m = 12;
  cfg.ef_construction = 100;

  // From scratch over all 1100.
  const GraphIndex scratch = build_base(big, cfg);

  // 1000 first, then insert the remaining 100 in id order.
  std::vector<float> first(big.data().begin(), big.data().begin() + 1000 * 8);
  VectorStore incremental_store = VectorStore::create(std::move(first), 8, big.metric());
  GraphIndex incremental = build_base(incremental_store, cfg);
  for (std::size_t i = 1000; i < 1100; ++i) {
    insert_point(incremental, incremental_store, big.row(static_cast<VertexId>(i)), cfg);
  }

  for (std::size_t v = 0; v < incremental.size(); ++v) {
    CHECK(incremental.base_neighbors(static_cast<VertexId>(v)).size() <= cfg.m);
  }

  auto probes = gaussian_store(14, 50, 8);
  const double recall_scratch = probe_recall(scratch, big, probes, 10, 100);
  const double recall_incremental = probe_recall(incremental, incremental_store, probes, 10, 100);
  CHECK(std::abs(recall_scratch - recall_incremental) <= 0.02);
}

TEST_CASE("parallel build keeps the caps and stays searchable") {
  auto store = gaussian_store(15, 800, 8);
  BaseBuildConfig cfg;
  cfg.m = 12;
  cfg.ef_construction = 80;
  cfg.threads = 2;
  const GraphIndex g = build_base(store, cfg);
  for (std::size_t v = 0; v < g.size(); ++v) {
    CHECK(g.base_neighbors(static_cast<VertexId>(v)).size() <= cfg.m);
  }
  auto queries = gaussian_store(16, 60, 8);
  CHECK(probe_recall(g, store, queries, 10, 80) >= 0.9);
}
