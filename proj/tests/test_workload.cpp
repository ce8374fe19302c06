#include <doctest.h>

#include <cmath>
#include <random>

#include "ngfix/builder.hpp"
#include "ngfix/eval.hpp"
#include "ngfix/synth.hpp"
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

}  // namespace

TEST_CASE("exact knn basics") {
  SUBCASE("a stored query is its own first neighbor") {
    auto store = gaussian_store(1, 64, 6);
    const KnnList knn = exact_knn(store, store.vector(17), 3);
    CHECK(knn.ids[0] == 17);
    CHECK(knn.dists[0] == 0.0f);
  }
  SUBCASE("1-d example") {
    auto store = VectorStore::create({1.0f, 2.0f, 3.0f, 4.0f, 5.0f}, 1, MetricKind::SquaredL2);
    const float q[1] = {0.0f};
    const KnnList knn = exact_knn(store, q, 3);
    CHECK(knn.ids == std::vector<VertexId>{0, 1, 2});
  }
  SUBCASE("depth beyond the live count errors") {
    auto store = gaussian_store(2, 10, 4);
    const float q[4] = {0, 0, 0, 0};
    CHECK_THROWS(exact_knn(store, q, 11));
    std::vector<VertexState> states(10, VertexState::Live);
    states[0] = VertexState::Removed;
    CHECK_THROWS(exact_knn(store, q, 10, states));
    CHECK(exact_knn(store, q, 9, states).size() == 9);
  }
}

TEST_CASE("exact knn agrees with the naive scan") {
  auto store = gaussian_store(3, 500, 8);
  auto queries = gaussian_store(4, 40, 8);
  std::vector<VertexState> states(500, VertexState::Live);
  states[3] = VertexState::Tombstoned;
  states[99] = VertexState::Removed;

  const auto batch = exact_knn_batch(store, queries, 25, 2, states);
  for (std::size_t i = 0; i < queries.count(); ++i) {
    const KnnList naive =
        naive_knn_reference(store, queries.vector(static_cast<VertexId>(i)), 25, states);
    CHECK(batch[i].ids == naive.ids);
    CHECK(batch[i].dists == naive.dists);
    for (VertexId id : batch[i].ids) CHECK(states[id] == VertexState::Live);
  }
}

TEST_CASE("approx knn") {
  SUBCASE("full beam on a complete graph equals exact") {
    auto store = gaussian_store(5, 60, 4);
    GraphIndex g(60, 64, 8, store.metric(), 4);
    for (std::size_t v = 0; v < 60; ++v) {
      std::vector<VertexId> adj;
      for (std::size_t t = 0; t < 60; ++t) {
        if (t != v) adj.push_back(static_cast<VertexId>(t));
      }
      g.set_base_neighbors(static_cast<VertexId>(v), std::move(adj));
    }
    g.set_entry(medoid(store));
    const float q[4] = {0.4f, -0.1f, 0.9f, 0.0f};
    const KnnList approx = approx_knn(g, store, q, 10, 60);
    const KnnList exact = exact_knn(store, q, 10);
    CHECK(approx.ids == exact.ids);
  }
  SUBCASE("default width reaches 0.95 recall against exact truth") {
    auto store = gaussian_store(6, 1000, 8);
    BaseBuildConfig cfg;
    cfg.m = 16;
    cfg.ef_construction = 200;
    const GraphIndex g = build_base(store, cfg);
    auto queries = gaussian_store(7, 50, 8);
    const std::size_t depth = 20;
    const auto approx = approx_knn_batch(g, store, queries, depth, 8 * depth, 1);
    double recall = 0.0;
    for (std::size_t i = 0; i < queries.count(); ++i) {
      const KnnList exact = exact_knn(store, queries.vector(static_cast<VertexId>(i)), depth);
      SearchResult as_result;
      as_result.ids = approx[i].ids;
      as_result.dists = approx[i].dists;
      recall += recall_at_k(as_result, exact, depth);
    }
    CHECK(recall / queries.count() >= 0.95);
  }
  SUBCASE("width below depth errors") {
    auto store = gaussian_store(8, 30, 4);
    const GraphIndex g = build_base(store, {});
    CHECK_THROWS(approx_knn(g, store, store.vector(0), 10, 5));
  }
}

TEST_CASE("dedup") {
  const std::size_t d = 3;
  SUBCASE("exact duplicates collapse at tolerance zero") {
    std::vector<float> data = {1, 2, 3, 4, 5, 6, 1, 2, 3};
    QuerySet qs;
    qs.vectors = VectorStore::create(std::move(data), d, MetricKind::SquaredL2);
    const QuerySet out = dedup(qs, 0.0f);
    CHECK(out.size() == 2);
    CHECK(out.vectors.vector(1)[0] == 4.0f);
  }
  SUBCASE("distinct sets are unchanged") {
    auto qs_store = gaussian_store(9, 40, d);
    QuerySet qs;
    qs.vectors = std::move(qs_store);
    CHECK(dedup(qs, 0.0f).size() == 40);
  }
  SUBCASE("matches a quadratic reference under positive tolerance") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> data(300 * d);
    for (float& x : data) x = u(rng);
    QuerySet qs;
    qs.vectors = VectorStore::create(std::move(data), d, MetricKind::SquaredL2);
    const float tol = 0.05f;
    const QuerySet out = dedup(qs, tol);

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      bool dup = false;
      for (std::size_t j : kept) {
        if (qs.vectors.distance_between(static_cast<VertexId>(j), static_cast<VertexId>(i)) <= tol)
          dup = true;
      }
      if (!dup) kept.push_back(i);
    }
    REQUIRE(out.size() == kept.size());
    CHECK(out.size() < qs.size());  // the tolerance actually bites on uniform data
    for (std::size_t i = 0; i < kept.size(); ++i) {
      CHECK(out.vectors.vector(static_cast<VertexId>(i))[0] ==
            qs.vectors.vector(static_cast<VertexId>(kept[i]))[0]);
    }
  }
}

TEST_CASE("augment") {
  SUBCASE("vanishing noise reproduces the inputs") {
    auto qs_store = gaussian_store(11, 20, 6);
    QuerySet qs;
    qs.vectors = std::move(qs_store);
    const QuerySet out = augment(qs, 1.0, 1e-20, 7);  // noise scale ~ c^(1/4)
    REQUIRE(out.size() == 20);
    CHECK(out.synthetic);
    const QuerySet again = augment(qs, 1.0, 1e-20, 7);
    CHECK(out.vectors.data() == again.vectors.data());  // deterministic under the seed
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::abs(out.vectors.vector(static_cast<VertexId>(i))[j] -
                       qs.vectors.vector(static_cast<VertexId>(i))[j]) <= 1e-4f);
      }
    }
  }
  SUBCASE("ratio rounds up per input query") {
    auto qs_store = gaussian_store(12, 5, 4);
    QuerySet qs;
    qs.vectors = std::move(qs_store);
    CHECK(augment(qs, 2.5, 0.3, 1).size() == 15);
  }
  SUBCASE("per-dimension sample variance approximates sqrt(c/d)") {
    const std::size_t d = 4;
    const double c = 0.3;
    QuerySet qs;
    qs.vectors = VectorStore::create(std::vector<float>(d, 0.0f), d, MetricKind::SquaredL2);
    const std::size_t copies = 25000;
    const QuerySet out = augment(qs, static_cast<double>(copies), c, 99);
    REQUIRE(out.size() == copies);
    const double target = std::sqrt(c / static_cast<double>(d));
    for (std::size_t dim = 0; dim < d; ++dim) {
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t i = 0; i < copies; ++i) {
        const double x = out.vectors.vector(static_cast<VertexId>(i))[dim];
        sum += x;
        sum_sq += x * x;
      }
      const double mean = sum / copies;
      const double variance = sum_sq / copies - mean * mean;
      CHECK(variance == doctest::Approx(target).epsilon(0.05));
    }
  }
  SUBCASE("std-dev interpretation narrows the noise") {
    const std::size_t d = 4;
    QuerySet qs;
    qs.vectors = VectorStore::create(std::vector<float>(d, 0.0f), d, MetricKind::SquaredL2);
    const QuerySet out = augment(qs, 20000.0, 0.3, 99, NoiseInterp::StdDev);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double x = out.vectors.vector(static_cast<VertexId>(i))[0];
      sum_sq += x * x;
    }
    const double target = std::sqrt(0.3 / 4.0);  // std-dev -> variance = c/d
    CHECK(sum_sq / out.size() == doctest::Approx(target * target).epsilon(0.08));
  }
}

TEST_CASE("synthetic workload generator") {
  SUBCASE("deterministic under the seed") {
    SynthConfig cfg;
    cfg.n = 500;
    cfg.dim = 8;
    cfg.n_queries = 50;
    cfg.seed = 42;
    const SynthData a = synth_ood(cfg);
    const SynthData b = synth_ood(cfg);
    CHECK(a.base.data() == b.base.data());
    CHECK(a.queries.vectors.data() == b.queries.vectors.data());
    CHECK(a.is_ood == b.is_ood);
  }
  SUBCASE("zero shift is statistically in-distribution") {
    SynthConfig cfg;
    cfg.n = 2000;
    cfg.dim = 8;
    cfg.n_queries = 200;
    cfg.shift = 0.0;
    cfg.seed = 5;
    const SynthData data = synth_ood(cfg);
    // Mean nearest-neighbor distance of the queries stays within the range
    // spanned by base-point spacing.
    double q_nn = 0.0, b_nn = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
      q_nn += exact_knn(data.base, data.queries.vectors.vector(static_cast<VertexId>(i)), 1)
                  .dists[0];
      b_nn += exact_knn(data.base, data.base.vector(static_cast<VertexId>(i)), 2).dists[1];
    }
    CHECK(q_nn / 100.0 <= 3.0 * (b_nn / 100.0));
  }
  SUBCASE("large shift degrades base-graph recall: the defect generator") {
    SynthConfig cfg;
    cfg.n = 4000;
    cfg.dim = 16;
    cfg.n_queries = 400;
    cfg.shift = 10.0;
    cfg.ood_fraction = 0.5;  // first half OOD, second half ID
    cfg.seed = 6;
    const SynthData data = synth_ood(cfg);
    BaseBuildConfig bcfg;
    bcfg.m = 12;
    bcfg.ef_construction = 100;
    const GraphIndex g = build_base(data.base, bcfg);

    SearchContext ctx;
    double ood_recall = 0.0, id_recall = 0.0;
    std::size_t n_ood = 0, n_id = 0;
    for (std::size_t i = 0; i < data.queries.size(); ++i) {
      const float* q = data.queries.vectors.vector(static_cast<VertexId>(i));
      const KnnList gt = exact_knn(data.base, q, 10);
      const SearchResult res = greedy_search(g, data.base, q, 10, g.entry(), 50, {}, &ctx);
      const double r = recall_at_k(res, gt, 10);
      if (data.is_ood[i]) {
        ood_recall += r;
        ++n_ood;
      } else {
        id_recall += r;
        ++n_id;
      }
    }
    ood_recall /= static_cast<double>(n_ood);
    id_recall /= static_cast<double>(n_id);
    CHECK(ood_recall < id_recall);  // measurable gap for the fixer to close
  }
}

TEST_CASE("knn_from_ids recomputes and orders") {
  auto store = VectorStore::create({5.0f, 1.0f, 3.0f}, 1, MetricKind::SquaredL2);
  const float q[1] = {0.0f};
  const std::vector<VertexId> ids = {0, 1, 2};
  const KnnList knn = knn_from_ids(store, q, ids);
  CHECK(knn.ids == std::vector<VertexId>{1, 2, 0});
  CHECK(knn.dists == std::vector<float>{1.0f, 9.0f, 25.0f});
}
