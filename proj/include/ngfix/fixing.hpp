#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ngfix/graph_index.hpp"
#include "ngfix/hardness.hpp"
#include "ngfix/search.hpp"
#include "ngfix/workload.hpp"

namespace ngfix {

/// One fixing round: how many neighbors per query are repaired, the
/// reachability threshold, the subgraph cap, and the extra-degree cap.
struct FixConfig {
  std::uint32_t n_q = 100;
  std::uint32_t k_h = 100;
  std::uint32_t max_s_cap = 0;  // 0 -> 5 * n_q, always clamped to the live count
  std::uint32_t m_ex = 0;       // 0 -> keep the graph's current cap

  std::uint32_t effective_max_s(std::size_t live) const;
};

/// Parses a schedule of the form "100:100:500,10:10:50" (n_q:k_h:max_s).
std::vector<FixConfig> parse_fix_schedule(const std::string& text);

struct NgfixStats {
  std::uint32_t link_attempts = 0;  // candidate pairs that reached the link step
  std::uint32_t edges_added = 0;    // Added + Replaced outcomes
};

/// Distance-ordered, degree-capped repair of one query's neighborhood:
/// processes unreachable rank pairs in ascending (distance, i, j) order,
/// skips pairs fixed transitively, links N_i -> N_j tagged with the pair's
/// escape hardness, and composes the reachability matrix through each new
/// edge. T is mutated in place.
NgfixStats ngfix(GraphIndex& graph, const VectorStore& store, const KnnList& knn,
                 const FixConfig& cfg, const HardnessMatrix& h, ReachableMatrix& t);

namespace detail {
/// Fault-injection surface for the property suite: skipping the
/// reachability update must trip the edge-budget property suite.
NgfixStats ngfix_impl(GraphIndex& graph, const VectorStore& store, const KnnList& knn,
                      const FixConfig& cfg, const HardnessMatrix& h, ReachableMatrix& t,
                      bool skip_reach_update);
}  // namespace detail

enum class RfixOutcome : std::uint8_t {
  Unnecessary,  // the probe search already reaches the query's vicinity
  Fixed,        // at least one navigation edge was added
  Capped,       // degree cap (or an empty candidate set) blocked progress
};

struct RfixOptions {
  std::uint32_t l_probe = 0;           // 0 -> 5 * n_q
  bool brute_force_candidates = false; // scan the store instead of the visited-set surrogate
  std::uint32_t max_iters = 10;
  bool locked_reads = false;
};

struct RfixStats {
  RfixOutcome outcome = RfixOutcome::Unnecessary;
  std::uint32_t edges_added = 0;
};

/// One navigability repair: probe with beam n_q from the entry point; if
/// the best hit is farther than the n_q-th true neighbor, collect the
/// points closer than it, RNG-prune them around the best hit, and link the
/// survivors out of it with infinite tags.
RfixStats rfix_once(GraphIndex& graph, const VectorStore& store, const float* query,
                    const KnnList& knn, std::uint32_t n_q, const RfixOptions& opts,
                    SearchContext* ctx = nullptr);

/// Repeats rfix_once until the probe reaches the vicinity, the cap blocks
/// progress, or max_iters is hit. Returns the number of fixing iterations.
std::uint32_t rfix(GraphIndex& graph, const VectorStore& store, const float* query,
                   const KnnList& knn, std::uint32_t n_q, const RfixOptions& opts,
                   SearchContext* ctx = nullptr);

struct FixRoundReport {
  FixConfig cfg;
  std::size_t queries = 0;
  std::uint64_t ngfix_edges = 0;
  std::uint64_t ngfix_link_attempts = 0;
  std::uint32_t max_links_per_query = 0;
  std::uint64_t rfix_edges = 0;
  std::size_t rfix_unnecessary = 0;
  std::size_t rfix_fixed = 0;
  std::size_t rfix_capped = 0;
  double seconds = 0.0;
};

struct FixReport {
  std::vector<FixRoundReport> rounds;
  std::uint64_t total_edges_added() const;
};

struct FixWorkloadOptions {
  int threads = 1;
  bool run_ngfix = true;
  bool run_rfix = true;  // applied in the final round only
  RfixOptions rfix;
};

/// Runs the fixing schedule over a historical query set that carries
/// ground truth of depth >= the effective MaxS of every round. RFix runs
/// in the final round only.
FixReport fix_workload(GraphIndex& graph, const VectorStore& store, const QuerySet& queries,
                       std::span<const FixConfig> schedule, const FixWorkloadOptions& opts = {});

}  // namespace ngfix
