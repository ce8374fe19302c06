// Compares the serial reference implementations against the OpenMP
// kernels on a synthetic workload: exact ground truth, base-graph
// construction and the fixing pipeline.
#include <chrono>
#include <cstdio>
#include <string>

#include "ngfix/builder.hpp"
#include "ngfix/fixing.hpp"
#include "ngfix/parallel.hpp"
#include "ngfix/synth.hpp"
#include "ngfix/workload.hpp"

namespace {

using namespace ngfix;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, int threads) {
  std::printf("%-24s serial %8.3f s   omp(%d) %8.3f s   speedup %.2fx\n", name, serial_s, threads,
              parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 20000, dim = 32, n_queries = 500;
  if (argc > 1) n = std::stoul(argv[1]);
  if (argc > 2) n_queries = std::stoul(argv[2]);
  const int threads = resolve_threads(0);
  std::printf("n=%zu dim=%zu queries=%zu threads=%d\n", n, dim, n_queries, threads);

  SynthConfig cfg;
  cfg.n = n;
  cfg.dim = dim;
  cfg.n_queries = n_queries;
  cfg.shift = 8.0;
  cfg.ood_fraction = 0.5;
  SynthData data = synth_ood(cfg);

  // Exact ground truth: naive full-sort reference vs heap kernel across threads.
  const std::size_t depth = 100;
  auto t0 = Clock::now();
  std::vector<KnnList> reference(data.queries.size());
  for (std::size_t i = 0; i < data.queries.size(); ++i) {
    reference[i] =
        naive_knn_reference(data.base, data.queries.vectors.vector(static_cast<VertexId>(i)), depth);
  }
  const double gt_serial = seconds_since(t0);

  t0 = Clock::now();
  auto parallel_gt = exact_knn_batch(data.base, data.queries.vectors, depth, threads);
  const double gt_parallel = seconds_since(t0);
  report("exact ground truth", gt_serial, gt_parallel, threads);

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i].ids != parallel_gt[i].ids) ++mismatches;
  }
  std::printf("%-24s %zu/%zu lists differ from the reference\n", "  agreement", mismatches,
              reference.size());

  // Base construction: single-threaded vs locked parallel insertion.
  BaseBuildConfig build_cfg;
  build_cfg.m = 16;
  build_cfg.ef_construction = 100;
  t0 = Clock::now();
  GraphIndex serial_graph = build_base(data.base, build_cfg);
  const double build_serial = seconds_since(t0);

  build_cfg.threads = threads;
  t0 = Clock::now();
  GraphIndex parallel_graph = build_base(data.base, build_cfg);
  const double build_parallel = seconds_since(t0);
  report("base construction", build_serial, build_parallel, threads);

  // Fixing pipeline over the historical queries.
  data.queries.gt = std::move(parallel_gt);
  data.queries.gt_provenance = GtProvenance::Exact;
  const FixConfig round{20, 20, 100, 48};

  GraphIndex fix_serial = serial_graph.clone();
  FixWorkloadOptions fix_opts;
  fix_opts.threads = 1;
  t0 = Clock::now();
  fix_workload(fix_serial, data.base, data.queries, {&round, 1}, fix_opts);
  const double fix_serial_s = seconds_since(t0);

  GraphIndex fix_parallel = serial_graph.clone();
  fix_opts.threads = threads;
  t0 = Clock::now();
  fix_workload(fix_parallel, data.base, data.queries, {&round, 1}, fix_opts);
  const double fix_parallel_s = seconds_since(t0);
  report("fix workload", fix_serial_s, fix_parallel_s, threads);
  return 0;
}
