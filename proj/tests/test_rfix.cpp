#include <doctest.h>

#include <random>

#include "ngfix/fixing.hpp"
#include "ngfix/workload.hpp"
#include "support/defect_gen.hpp"

using namespace ngfix;

namespace {

/// Two 1-d clusters {0,1,2} and {10,11} with no edges between them; the
/// entry (medoid) is 2, so a query past the far cluster stalls at 2.
struct TwoIslands {
  VectorStore store;
  GraphIndex graph;
};

TwoIslands two_islands() {
  auto store = VectorStore::create({0.0f, 1.0f, 2.0f, 10.0f, 11.0f}, 1, MetricKind::SquaredL2);
  GraphIndex g(5, 4, 4, store.metric(), 1);
  g.set_base_neighbors(0, {1});
  g.set_base_neighbors(1, {0, 2});
  g.set_base_neighbors(2, {1});
  g.set_base_neighbors(3, {4});
  g.set_base_neighbors(4, {3});
  g.set_entry(medoid(store));
  return {std::move(store), std::move(g)};
}

}  // namespace

TEST_CASE("stalled search gains a navigation edge") {
  TwoIslands inst = two_islands();
  CHECK(inst.graph.entry() == 2);  // mean 4.8 -> value 2

  const float q[1] = {12.0f};
  const KnnList knn = exact_knn(inst.store, q, 2);  // N_1 = 11 (id 4), N_2 = 10 (id 3)
  CHECK(knn.ids == std::vector<VertexId>{4, 3});

  RfixOptions opts;
  opts.brute_force_candidates = true;
  const RfixStats stats = rfix_once(inst.graph, inst.store, q, knn, 2, opts);
  CHECK(stats.outcome == RfixOutcome::Fixed);
  CHECK(stats.edges_added == 1);

  // The pruning keeps only id 3 (value 10): delta(11,10)=1 is not above
  // delta(2,11)=81, so id 4 is dropped.
  const auto extra = inst.graph.extra_neighbors(2);
  REQUIRE(extra.size() == 1);
  CHECK(extra[0].id == 3);
  CHECK(extra[0].tag == kEhTagInfinite);

  // The repaired graph now resolves the query.
  const SearchResult res = greedy_search(inst.graph, inst.store, q, 1, inst.graph.entry(), 2);
  REQUIRE(res.ids.size() == 1);
  CHECK(res.ids[0] == 4);
}

TEST_CASE("search that already reaches the vicinity is untouched") {
  TwoIslands inst = two_islands();
  const float q[1] = {1.4f};
  const KnnList knn = exact_knn(inst.store, q, 2);
  RfixOptions opts;
  opts.brute_force_candidates = true;
  const RfixStats stats = rfix_once(inst.graph, inst.store, q, knn, 2, opts);
  CHECK(stats.outcome == RfixOutcome::Unnecessary);
  CHECK(stats.edges_added == 0);
  CHECK(inst.graph.extra_edge_count() == 0);
}

TEST_CASE("kept candidates satisfy the pruning rule pairwise") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<float> data(200 * 4);
    for (float& x : data) x = gauss(rng);
    auto store = VectorStore::create(std::move(data), 4, MetricKind::SquaredL2);
    GraphIndex g(200, 4, kUnlimitedDegree, store.metric(), 4);
    // A deliberately weak graph: short forward chains only.
    for (std::size_t v = 0; v < 200; ++v) {
      g.set_base_neighbors(static_cast<VertexId>(v), {static_cast<VertexId>((v + 1) % 200)});
    }
    g.set_entry(medoid(store));
    std::vector<float> q(4);
    for (float& x : q) x = 4.0f * gauss(rng);
    const KnnList knn = exact_knn(store, q.data(), 5);

    RfixOptions opts;
    opts.brute_force_candidates = true;
    const RfixStats stats = rfix_once(g, store, q.data(), knn, 5, opts);
    if (stats.outcome != RfixOutcome::Fixed) continue;

    // All new edges leave a single vertex; recover it.
    VertexId ann1 = kInvalidVertex;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!g.extra_neighbors(static_cast<VertexId>(v)).empty()) {
        CHECK(ann1 == kInvalidVertex);
        ann1 = static_cast<VertexId>(v);
      }
    }
    REQUIRE(ann1 != kInvalidVertex);
    const auto kept = g.extra_neighbors(ann1);
    for (std::size_t b = 0; b < kept.size(); ++b) {
      for (std::size_t a = 0; a < b; ++a) {
        CHECK(store.distance_between(kept[b].id, kept[a].id) >
              store.distance_to(store.vector(ann1), kept[b].id));
      }
    }
  }
}

TEST_CASE("rfix loop") {
  SUBCASE("max_iters below one is rejected") {
    TwoIslands inst = two_islands();
    const float q[1] = {12.0f};
    const KnnList knn = exact_knn(inst.store, q, 2);
    RfixOptions opts;
    opts.max_iters = 0;
    CHECK_THROWS(rfix(inst.graph, inst.store, q, knn, 2, opts));
  }
  SUBCASE("zero iterations when the first probe reaches the vicinity") {
    TwoIslands inst = two_islands();
    const float q[1] = {1.4f};
    const KnnList knn = exact_knn(inst.store, q, 2);
    RfixOptions opts;
    opts.brute_force_candidates = true;
    CHECK(rfix(inst.graph, inst.store, q, knn, 2, opts) == 0);
  }
  SUBCASE("terminates with the vicinity reachable or capped") {
    auto maybe = ngfix::testing::make_delaunay_defect(7, 26);
    REQUIRE(maybe.has_value());
    auto& inst = *maybe;
    const std::uint32_t n_q = 2;
    const KnnList knn = exact_knn(inst.store, inst.query.data(), n_q);
    RfixOptions opts;
    opts.brute_force_candidates = true;
    opts.max_iters = 32;
    rfix(inst.graph, inst.store, inst.query.data(), knn, n_q, opts);
    const SearchResult probe =
        greedy_search(inst.graph, inst.store, inst.query.data(), 1, inst.graph.entry(), n_q);
    REQUIRE(!probe.ids.empty());
    CHECK(!(probe.dists[0] > knn.dists[n_q - 1]));  // vicinity reached (cap is unlimited here)
  }
}
