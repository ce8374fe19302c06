// Command-line surface for building, repairing, maintaining and
// benchmarking the graph index. One subcommand per library operation;
// file formats are fvecs/ivecs/bvecs plus the .ngfx index format.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "ngfix/builder.hpp"
#include "ngfix/eval.hpp"
#include "ngfix/fixing.hpp"
#include "ngfix/maintenance.hpp"
#include "ngfix/proofs.hpp"
#include "ngfix/synth.hpp"
#include "ngfix/vec_io.hpp"
#include "ngfix/workload.hpp"

namespace {

using namespace ngfix;

struct GtMode {
  bool exact = true;
  std::size_t width = 0;  // approx beam; 0 -> 8 * depth
};

GtMode parse_gt_mode(const std::string& text) {
  GtMode mode;
  if (text == "exact") return mode;
  if (text.rfind("approx", 0) == 0) {
    mode.exact = false;
    if (text.size() > 7 && text[6] == ':') mode.width = std::stoul(text.substr(7));
    return mode;
  }
  throw CLI::ValidationError("--mode", "expected exact or approx[:L]");
}

void attach_gt(QuerySet& queries, const VectorStore& store, const std::string& gt_arg,
               const GraphIndex& graph, std::size_t depth, std::size_t approx_width, int threads) {
  if (gt_arg == "approx") {
    const std::size_t width = approx_width ? approx_width : 8 * depth;
    queries.gt = approx_knn_batch(graph, store, queries.vectors, depth, width, threads);
    queries.gt_provenance = GtProvenance::Approx;
    queries.gt_search_width = static_cast<std::uint32_t>(width);
    return;
  }
  const auto lists = read_id_lists(gt_arg);
  if (lists.size() != queries.size()) {
    throw std::runtime_error("ground truth has " + std::to_string(lists.size()) +
                             " records for " + std::to_string(queries.size()) + " queries");
  }
  queries.gt.reserve(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    queries.gt.push_back(knn_from_ids(store, queries.vectors.vector(static_cast<VertexId>(i)),
                                      lists[i]));
  }
  queries.gt_provenance = GtProvenance::Exact;
}

int run(int argc, char** argv) {
  CLI::App app{"graph ANN index with workload-driven defect repair"};
  app.require_subcommand(1);

  // ---- build ----
  auto* build = app.add_subcommand("build", "build the base proximity graph");
  std::string build_input, build_metric = "l2", build_out;
  BaseBuildConfig build_cfg;
  build->add_option("--input", build_input, "base vectors (.fvecs/.bvecs)")->required();
  build->add_option("--metric", build_metric, "l2|cosine|ip");
  build->add_option("-M,--m", build_cfg.m, "max base out-degree");
  build->add_option("--efc", build_cfg.ef_construction, "construction beam width");
  build->add_option("--mex", build_cfg.m_ex, "extra-degree cap stored in the index");
  build->add_option("--seed", build_cfg.seed, "seed");
  build->add_option("--threads", build_cfg.threads, "0 = auto");
  build->add_option("--out", build_out, "output index path")->required();

  // ---- gt ----
  auto* gt = app.add_subcommand("gt", "compute ground-truth neighbor ids");
  std::string gt_base, gt_queries, gt_metric = "l2", gt_mode = "exact", gt_index, gt_out;
  std::size_t gt_depth = 100;
  int gt_threads = 0;
  gt->add_option("--base", gt_base, "base vectors")->required();
  gt->add_option("--queries", gt_queries, "query vectors")->required();
  gt->add_option("--metric", gt_metric, "l2|cosine|ip");
  gt->add_option("--depth", gt_depth, "neighbors per query");
  gt->add_option("--mode", gt_mode, "exact | approx:L (approx needs --index)");
  gt->add_option("--index", gt_index, "index for approx mode");
  gt->add_option("--threads", gt_threads, "0 = auto");
  gt->add_option("--out", gt_out, "output .ivecs")->required();

  // ---- fix ----
  auto* fix = app.add_subcommand("fix", "repair graph defects around historical queries");
  std::string fix_index, fix_base, fix_queries, fix_gt, fix_out;
  std::string fix_rounds = "100:100:500,10:10:50";
  std::uint32_t fix_mex = 48;
  std::size_t fix_gt_width = 0;
  int fix_threads = 1;
  bool fix_rfix_only = false, fix_no_rfix = false;
  std::uint32_t fix_l_probe = 0, fix_max_iters = 10;
  fix->add_option("--index", fix_index, "input index")->required();
  fix->add_option("--base", fix_base, "base vectors")->required();
  fix->add_option("--queries", fix_queries, "historical queries (.fvecs)")->required();
  fix->add_option("--gt", fix_gt, "ground-truth .ivecs, or 'approx'")->required();
  fix->add_option("--gt-width", fix_gt_width, "beam for approx ground truth (0 = 8*depth)");
  fix->add_option("--rounds", fix_rounds, "schedule nq:kh:maxs[,...]");
  fix->add_option("--mex", fix_mex, "extra-degree cap (0 keeps index value)");
  fix->add_option("--threads", fix_threads, "0 = auto");
  fix->add_flag("--rfix-only", fix_rfix_only, "skip NGFix, only repair navigability");
  fix->add_flag("--no-rfix", fix_no_rfix, "skip RFix");
  fix->add_option("--l-probe", fix_l_probe, "RFix probe beam (0 = 5*nq)");
  fix->add_option("--max-iters", fix_max_iters, "RFix iteration cap");
  fix->add_option("--out", fix_out, "output index path")->required();

  // ---- insert ----
  auto* insert = app.add_subcommand("insert", "append points to the index");
  std::string ins_index, ins_base, ins_add, ins_out, ins_out_base, ins_queries, ins_gt_mode = "exact";
  std::string ins_rounds = "100:100:500,10:10:50";
  double ins_rebuild = 0.0;
  std::uint64_t ins_seed = 1;
  int ins_threads = 1;
  BaseBuildConfig ins_cfg;
  insert->add_option("--index", ins_index)->required();
  insert->add_option("--base", ins_base)->required();
  insert->add_option("--add", ins_add, "new vectors (.fvecs)")->required();
  insert->add_option("-M,--m", ins_cfg.m, "insertion out-degree (match the build)");
  insert->add_option("--efc", ins_cfg.ef_construction);
  insert->add_option("--partial-rebuild", ins_rebuild, "rebuild proportion r in [0,1]");
  insert->add_option("--queries", ins_queries, "historical queries for the rebuild");
  insert->add_option("--rounds", ins_rounds, "rebuild fix schedule");
  insert->add_option("--gt-mode", ins_gt_mode, "exact | approx:L for the rebuild ground truth");
  insert->add_option("--seed", ins_seed);
  insert->add_option("--threads", ins_threads, "0 = auto");
  insert->add_option("--out", ins_out, "output index")->required();
  insert->add_option("--out-base", ins_out_base, "write merged base vectors (.fvecs)");

  // ---- delete ----
  auto* del = app.add_subcommand("delete", "tombstone points, optionally compact");
  std::string del_index, del_base, del_ids, del_out;
  bool del_compact = false;
  MaintenanceConfig del_cfg;
  del->add_option("--index", del_index)->required();
  del->add_option("--base", del_base)->required();
  del->add_option("--ids", del_ids, "ids to delete (.ivecs, one record)")->required();
  del->add_flag("--compact", del_compact, "force compaction with repair");
  del->add_option("--threshold", del_cfg.delete_threshold, "auto-compaction fraction");
  del->add_option("--repair-l", del_cfg.repair_l, "repair ground-truth beam");
  del->add_option("--threads", del_cfg.threads, "0 = auto");
  del->add_option("--out", del_out)->required();

  // ---- search ----
  auto* search_cmd = app.add_subcommand("search", "run queries and report accuracy");
  std::string s_index, s_base, s_queries, s_gt;
  std::size_t s_k = 10, s_l = 100;
  search_cmd->add_option("--index", s_index)->required();
  search_cmd->add_option("--base", s_base)->required();
  search_cmd->add_option("--queries", s_queries)->required();
  search_cmd->add_option("-k", s_k);
  search_cmd->add_option("-L", s_l, "search list size");
  search_cmd->add_option("--gt", s_gt, "optional exact ground truth (.ivecs)");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "recall/rderr/NDC/QPS curve over L");
  std::string w_index, w_base, w_queries, w_gt, w_out, w_format = "csv";
  SweepConfig w_cfg;
  sweep_cmd->add_option("--index", w_index)->required();
  sweep_cmd->add_option("--base", w_base)->required();
  sweep_cmd->add_option("--queries", w_queries)->required();
  sweep_cmd->add_option("--gt", w_gt, "exact ground truth (.ivecs)")->required();
  sweep_cmd->add_option("-k", w_cfg.k);
  sweep_cmd->add_option("--l-start", w_cfg.l_start, "0 = k");
  sweep_cmd->add_option("--l-step", w_cfg.l_step);
  sweep_cmd->add_option("--l-max", w_cfg.l_max);
  sweep_cmd->add_option("--format", w_format, "csv");
  sweep_cmd->add_option("--out", w_out, "output path (default stdout)");

  // ---- augment ----
  auto* aug = app.add_subcommand("augment", "Gaussian query augmentation");
  std::string a_queries, a_out, a_metric = "l2", a_interp = "var";
  double a_ratio = 4.0, a_c = 0.3;
  std::uint64_t a_seed = 1;
  aug->add_option("--queries", a_queries)->required();
  aug->add_option("--metric", a_metric, "l2|cosine|ip");
  aug->add_option("--ratio", a_ratio, "synthetic queries per input query");
  aug->add_option("-c", a_c, "noise level");
  aug->add_option("--seed", a_seed);
  aug->add_option("--noise-interp", a_interp, "var|std: read sqrt(c/d) as variance or std-dev");
  aug->add_option("--out", a_out)->required();

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "synthetic clustered base + OOD/ID queries");
  SynthConfig sy_cfg;
  std::string sy_metric = "l2", sy_out_base, sy_out_queries, sy_out_flags;
  synth->add_option("--n", sy_cfg.n);
  synth->add_option("-d,--dim", sy_cfg.dim);
  synth->add_option("--n-queries", sy_cfg.n_queries);
  synth->add_option("--shift", sy_cfg.shift, "OOD displacement");
  synth->add_option("--ood-fraction", sy_cfg.ood_fraction);
  synth->add_option("--clusters", sy_cfg.clusters);
  synth->add_option("--seed", sy_cfg.seed);
  synth->add_option("--metric", sy_metric, "l2|cosine|ip");
  synth->add_option("--out-base", sy_out_base)->required();
  synth->add_option("--out-queries", sy_out_queries)->required();
  synth->add_option("--out-flags", sy_out_flags, "per-query OOD flags (.ivecs)");

  // ---- test ----
  auto* testcmd = app.add_subcommand("test", "run the randomized property suites");
  std::string t_suite = "theorems";
  PropertySuiteConfig t_cfg;
  testcmd->add_option("--suite", t_suite, "theorems");
  testcmd->add_option("--trials", t_cfg.trials);
  testcmd->add_option("--seed", t_cfg.seed);

  CLI11_PARSE(app, argc, argv);

  if (*build) {
    const VectorStore store = load_vector_file(build_input, parse_metric(build_metric));
    const GraphIndex graph = build_base(store, build_cfg);
    graph.serialize(build_out);
    std::cout << "built " << graph.size() << " vertices, " << graph.base_edge_count()
              << " base edges, entry " << graph.entry() << "\n";
    return 0;
  }

  if (*gt) {
    const MetricKind metric = parse_metric(gt_metric);
    const VectorStore store = load_vector_file(gt_base, metric);
    const VectorStore queries = load_vector_file(gt_queries, metric);
    const GtMode mode = parse_gt_mode(gt_mode);
    std::vector<KnnList> lists;
    if (mode.exact) {
      lists = exact_knn_batch(store, queries, gt_depth, gt_threads);
    } else {
      if (gt_index.empty()) throw std::runtime_error("approx mode requires --index");
      const GraphIndex graph = GraphIndex::deserialize(gt_index);
      const std::size_t width = mode.width ? mode.width : 8 * gt_depth;
      lists = approx_knn_batch(graph, store, queries, gt_depth, width, gt_threads);
    }
    std::vector<std::vector<VertexId>> ids(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i) ids[i] = lists[i].ids;
    write_id_lists(gt_out, ids);
    std::cout << "wrote " << ids.size() << " lists of depth " << gt_depth << "\n";
    return 0;
  }

  if (*fix) {
    GraphIndex graph = GraphIndex::deserialize(fix_index);
    const VectorStore store = load_vector_file(fix_base, graph.metric());
    QuerySet queries;
    queries.vectors = load_vector_file(fix_queries, graph.metric());
    auto schedule = parse_fix_schedule(fix_rounds);
    if (fix_mex) {
      for (auto& round : schedule) round.m_ex = fix_mex;
    }
    std::size_t depth = 0;
    for (const auto& round : schedule) {
      depth = std::max<std::size_t>(depth, round.effective_max_s(graph.live_count()));
    }
    attach_gt(queries, store, fix_gt, graph, depth, fix_gt_width, fix_threads);

    FixWorkloadOptions opts;
    opts.threads = fix_threads;
    opts.run_ngfix = !fix_rfix_only;
    opts.run_rfix = !fix_no_rfix;
    opts.rfix.l_probe = fix_l_probe;
    opts.rfix.max_iters = fix_max_iters;
    const FixReport report = fix_workload(graph, store, queries, schedule, opts);
    graph.serialize(fix_out);
    for (std::size_t r = 0; r < report.rounds.size(); ++r) {
      const auto& round = report.rounds[r];
      std::cout << "round " << r + 1 << " (nq=" << round.cfg.n_q << "): " << round.ngfix_edges
                << " ngfix edges, " << round.rfix_edges << " rfix edges, "
                << round.rfix_capped << " capped, " << round.seconds << " s\n";
    }
    return 0;
  }

  if (*insert) {
    GraphIndex graph = GraphIndex::deserialize(ins_index);
    VectorStore store = load_vector_file(ins_base, graph.metric());
    const VectorStore add = load_vector_file(ins_add, graph.metric());
    ins_cfg.threads = 1;
    for (std::size_t i = 0; i < add.count(); ++i) {
      insert_point(graph, store, add.row(static_cast<VertexId>(i)), ins_cfg);
    }
    std::cout << "inserted " << add.count() << " points (now " << graph.size() << ")\n";
    if (ins_rebuild > 0.0) {
      if (ins_queries.empty()) throw std::runtime_error("--partial-rebuild requires --queries");
      QuerySet history;
      history.vectors = load_vector_file(ins_queries, graph.metric());
      const auto schedule = parse_fix_schedule(ins_rounds);
      const GtMode mode = parse_gt_mode(ins_gt_mode);
      FixWorkloadOptions opts;
      opts.threads = ins_threads;
      if (!mode.exact) {
        std::size_t depth = 0;
        for (const auto& round : schedule) {
          depth = std::max<std::size_t>(depth, round.effective_max_s(graph.live_count()));
        }
        const std::size_t width = mode.width ? mode.width : 8 * depth;
        history.gt = approx_knn_batch(graph, store, history.vectors, depth, width, ins_threads);
        history.gt_provenance = GtProvenance::Approx;
        history.gt_search_width = static_cast<std::uint32_t>(width);
      }
      const FixReport report =
          partial_rebuild(graph, store, history, ins_rebuild, schedule, ins_seed, opts);
      std::cout << "partial rebuild r=" << ins_rebuild << ": " << report.total_edges_added()
                << " edges relinked\n";
    }
    graph.serialize(ins_out);
    if (!ins_out_base.empty()) write_fvecs(ins_out_base, store.data(), store.dim());
    return 0;
  }

  if (*del) {
    GraphIndex graph = GraphIndex::deserialize(del_index);
    const VectorStore store = load_vector_file(del_base, graph.metric());
    const auto lists = read_id_lists(del_ids);
    std::size_t tombstoned = 0;
    for (const auto& list : lists) {
      for (VertexId id : list) {
        delete_point(graph, store, id);
        ++tombstoned;
      }
    }
    std::cout << "tombstoned " << tombstoned << " points\n";
    const std::size_t removed = compact(graph, store, del_cfg, del_compact);
    if (removed > 0) std::cout << "compacted " << removed << " points with repair\n";
    graph.serialize(del_out);
    return 0;
  }

  if (*search_cmd) {
    const GraphIndex graph = GraphIndex::deserialize(s_index);
    const VectorStore store = load_vector_file(s_base, graph.metric());
    QuerySet queries;
    queries.vectors = load_vector_file(s_queries, graph.metric());
    if (!s_gt.empty()) attach_gt(queries, store, s_gt, graph, s_k, 0, 1);
    SearchContext ctx;
    double recall = 0.0, ndc = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const SearchResult res = greedy_search(
          graph, store, queries.vectors.vector(static_cast<VertexId>(i)), s_k, graph.entry(), s_l,
          {}, &ctx);
      ndc += static_cast<double>(res.ndc);
      if (!queries.gt.empty()) recall += recall_at_k(res, queries.gt[i], s_k);
    }
    std::cout << "queries: " << queries.size() << "  mean NDC: " << ndc / queries.size();
    if (!queries.gt.empty()) std::cout << "  recall@" << s_k << ": " << recall / queries.size();
    std::cout << "\n";
    return 0;
  }

  if (*sweep_cmd) {
    if (w_format != "csv") throw std::runtime_error("only --format csv is supported");
    const GraphIndex graph = GraphIndex::deserialize(w_index);
    const VectorStore store = load_vector_file(w_base, graph.metric());
    QuerySet queries;
    queries.vectors = load_vector_file(w_queries, graph.metric());
    attach_gt(queries, store, w_gt, graph, w_cfg.k, 0, 1);
    const auto rows = sweep(graph, store, queries, w_cfg);
    if (w_out.empty()) {
      write_sweep_csv(std::cout, rows);
    } else {
      std::ofstream out(w_out);
      if (!out) throw std::runtime_error("cannot open " + w_out);
      write_sweep_csv(out, rows);
    }
    return 0;
  }

  if (*aug) {
    QuerySet queries;
    queries.vectors = load_vector_file(a_queries, parse_metric(a_metric));
    const NoiseInterp interp = a_interp == "std" ? NoiseInterp::StdDev : NoiseInterp::Variance;
    const QuerySet out = augment(queries, a_ratio, a_c, a_seed, interp);
    write_fvecs(a_out, out.vectors.data(), out.vectors.dim());
    std::cout << "wrote " << out.size() << " synthetic queries\n";
    return 0;
  }

  if (*synth) {
    sy_cfg.metric = parse_metric(sy_metric);
    const SynthData data = synth_ood(sy_cfg);
    write_fvecs(sy_out_base, data.base.data(), data.base.dim());
    write_fvecs(sy_out_queries, data.queries.vectors.data(), data.queries.vectors.dim());
    if (!sy_out_flags.empty()) {
      std::vector<std::int32_t> flags(data.is_ood.begin(), data.is_ood.end());
      write_ivecs(sy_out_flags, flags, 1);
    }
    std::cout << "wrote " << data.base.count() << " base vectors, " << data.queries.size()
              << " queries\n";
    return 0;
  }

  if (*testcmd) {
    if (t_suite != "theorems") throw std::runtime_error("unknown suite '" + t_suite + "'");
    const PropertyReport report = run_property_suite(t_cfg);
    std::cout << report.summary();
    return report.all_passed() ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
