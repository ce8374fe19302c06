#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ngfix/builder.hpp"
#include "ngfix/eval.hpp"
#include "ngfix/synth.hpp"

using namespace ngfix;

namespace {

SearchResult make_result(std::vector<VertexId> ids, std::vector<float> dists) {
  SearchResult res;
  res.ids = std::move(ids);
  res.dists = std::move(dists);
  return res;
}

KnnList make_gt(std::vector<VertexId> ids, std::vector<float> dists) {
  KnnList gt;
  gt.ids = std::move(ids);
  gt.dists = std::move(dists);
  return gt;
}

}  // namespace

TEST_CASE("recall") {
  const KnnList gt = make_gt({0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
                             {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(recall_at_k(make_result({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, std::vector<float>(10, 0.0f)), gt,
                    10) == 1.0);
  CHECK(recall_at_k(make_result({10, 11, 12}, {1, 2, 3}), gt, 3) == 0.0);
  CHECK(recall_at_k(make_result({0, 1, 2, 3, 4, 10, 11, 12, 13, 14}, std::vector<float>(10, 0.0f)),
                    gt, 10) == 0.5);
  // Short result: intersection over what exists, denominator stays k.
  CHECK(recall_at_k(make_result({0, 1}, {1, 2}), gt, 10) == 0.2);
  CHECK_THROWS(recall_at_k(make_result({}, {}), make_gt({0}, {1.0f}), 2));
}

TEST_CASE("rderr") {
  SUBCASE("exact results have zero error") {
    const KnnList gt = make_gt({0, 1}, {1.0f, 1.0f});
    CHECK(rderr_at_k(make_result({0, 1}, {1.0f, 1.0f}), gt, 2, MetricKind::Cosine) == 0.0);
  }
  SUBCASE("cosine arithmetic example") {
    const KnnList gt = make_gt({0, 1}, {1.0f, 1.0f});
    const SearchResult res = make_result({0, 2}, {1.0f, 2.0f});
    CHECK(rderr_at_k(res, gt, 2, MetricKind::Cosine) == doctest::Approx(0.5));
  }
  SUBCASE("euclidean evaluates on rooted distances") {
    const KnnList gt = make_gt({0, 1}, {1.0f, 1.0f});        // squared
    const SearchResult res = make_result({0, 2}, {1.0f, 4.0f});  // sqrt -> 1, 2
    CHECK(rderr_at_k(res, gt, 2, MetricKind::SquaredL2) == doctest::Approx(0.5));
  }
  SUBCASE("zero true distances") {
    const KnnList gt = make_gt({0, 1}, {0.0f, 1.0f});
    // matched zero contributes 0 over two terms
    CHECK(rderr_at_k(make_result({0, 1}, {0.0f, 2.0f}), gt, 2, MetricKind::Cosine) ==
          doctest::Approx(0.5));
    // unmatched zero is skipped, denominator reduced to 1
    CHECK(rderr_at_k(make_result({5, 1}, {0.5f, 2.0f}), gt, 2, MetricKind::Cosine) ==
          doctest::Approx(1.0));
  }
  SUBCASE("inner product is unsupported") {
    const KnnList gt = make_gt({0}, {-3.0f});
    CHECK_THROWS(rderr_at_k(make_result({0}, {-3.0f}), gt, 1, MetricKind::InnerProduct));
  }
}

TEST_CASE("sweep") {
  SynthConfig cfg;
  cfg.n = 1500;
  cfg.dim = 8;
  cfg.n_queries = 80;
  cfg.shift = 5.0;
  cfg.seed = 17;
  SynthData data = synth_ood(cfg);
  BaseBuildConfig bcfg;
  bcfg.m = 12;
  bcfg.ef_construction = 80;
  const GraphIndex g = build_base(data.base, bcfg);
  data.queries.gt = exact_knn_batch(data.base, data.queries.vectors, 10, 1);
  data.queries.gt_provenance = GtProvenance::Exact;

  SUBCASE("empty curve when the range is inverted") {
    SweepConfig sw;
    sw.k = 10;
    sw.l_start = 50;
    sw.l_max = 20;
    CHECK(sweep(g, data.base, data.queries, sw).empty());
  }
  SUBCASE("rows are bounded and reproducible except for QPS") {
    SweepConfig sw;
    sw.k = 10;
    sw.l_max = 40;
    const auto rows = sweep(g, data.base, data.queries, sw);
    REQUIRE(rows.size() == 4);  // L = 10, 20, 30, 40
    for (const SweepRow& row : rows) {
      CHECK(row.recall >= 0.0);
      CHECK(row.recall <= 1.0);
      CHECK(row.mean_ndc > 0.0);
      CHECK(std::isfinite(row.rderr));
    }
    const auto again = sweep(g, data.base, data.queries, sw);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].l == again[i].l);
      CHECK(rows[i].recall == again[i].recall);
      CHECK(rows[i].rderr == again[i].rderr);
      CHECK(rows[i].mean_ndc == again[i].mean_ndc);
    }
  }
  SUBCASE("csv contract") {
    SweepConfig sw;
    sw.k = 10;
    sw.l_max = 20;
    const auto rows = sweep(g, data.base, data.queries, sw);
    std::ostringstream os;
    write_sweep_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.rfind("L,recall,rderr,ndc,qps\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(rows.size()));
  }
  SUBCASE("ground truth is required") {
    QuerySet bare;
    bare.vectors = VectorStore::create(std::vector<float>(8, 0.0f), 8, MetricKind::SquaredL2);
    CHECK_THROWS(sweep(g, data.base, bare, {}));
  }
}
