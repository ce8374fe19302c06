#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ngfix/types.hpp"

namespace ngfix {

struct ExtraEdge {
  VertexId id;
  std::uint16_t tag;  // escape hardness the edge was added to fix; 0xFFFF = infinite
};

enum class EdgeAddResult : std::uint8_t {
  Added,     // appended under the degree cap
  Replaced,  // evicted the minimum-tag edge
  Updated,   // duplicate target: tag raised to max(old, new)
  Rejected,  // cap reached and no strictly lower tag, or duplicates a base edge
};

/// Directed graph index G = (V, E, E_EX): capped base adjacency plus
/// EH-tagged extra adjacency, per-vertex tombstone/removed state, and a
/// fixed entry vertex. Concurrency: any number of readers, or per-vertex
/// exclusive writers; fix-phase readers use locked snapshots.
class GraphIndex {
 public:
  GraphIndex() = default;
  GraphIndex(std::size_t count, std::uint32_t m_base, std::uint32_t m_ex, MetricKind metric,
             std::uint32_t dim);

  GraphIndex(GraphIndex&&) noexcept = default;
  GraphIndex& operator=(GraphIndex&&) noexcept = default;
  GraphIndex(const GraphIndex&) = delete;
  GraphIndex& operator=(const GraphIndex&) = delete;
  GraphIndex clone() const;

  std::size_t size() const { return base_adj_.size(); }
  std::uint32_t m_base() const { return m_base_; }
  std::uint32_t m_ex() const { return m_ex_; }
  void set_m_ex(std::uint32_t m_ex) { m_ex_ = m_ex; }
  MetricKind metric() const { return metric_; }
  std::uint32_t dim() const { return dim_; }

  VertexId entry() const { return entry_; }
  void set_entry(VertexId v) { entry_ = v; }

  VertexState state(VertexId v) const { return states_[v]; }
  void set_state(VertexId v, VertexState s) { states_[v] = s; }
  std::span<const VertexState> states() const { return states_; }
  bool is_live(VertexId v) const { return states_[v] == VertexState::Live; }
  bool is_navigable(VertexId v) const { return states_[v] != VertexState::Removed; }
  std::size_t live_count() const;

  std::span<const VertexId> base_neighbors(VertexId v) const { return base_adj_[v]; }
  std::span<const ExtraEdge> extra_neighbors(VertexId v) const { return extra_adj_[v]; }

  /// Concatenation of base then extra out-neighbor ids. Tombstoned targets
  /// included (lazy deletion semantics).
  std::vector<VertexId> neighbors(VertexId v) const;

  /// Appends all out-neighbor ids of v to `out`, optionally under the
  /// vertex lock (required while another thread may be fixing).
  void neighbors_into(VertexId v, bool locked, std::vector<VertexId>& out) const;

  /// Replaces the base adjacency of v (builder/maintenance path).
  void set_base_neighbors(VertexId v, std::vector<VertexId> ids);
  void append_base_neighbor(VertexId v, VertexId target);

  /// Degree-capped tagged insertion. At the cap, the existing extra edge of
  /// u with minimum tag is evicted iff its tag is strictly lower than the
  /// incoming one. Duplicate (u,v) keeps the maximum tag. (u,v) already in
  /// the base adjacency is rejected outright.
  EdgeAddResult add_extra_edge(VertexId u, VertexId v, std::uint16_t tag);

  /// Uniformly removes `how_many` extra edges of v (indices drawn by the
  /// caller) and zeroes the tags of the survivors. Exclusive access.
  void drop_extra_edges(VertexId v, std::span<const std::uint32_t> sorted_indices, bool reset_tags);

  void clear_adjacency(VertexId v);
  void remove_edges_into(const std::vector<bool>& target_set);

  VertexId add_vertex();  // exclusive access
  void ensure_locks();    // call before entering a parallel mutation phase
  std::mutex& vertex_lock(VertexId v) const { return locks_[v]; }

  void serialize(const std::string& path) const;
  static GraphIndex deserialize(const std::string& path);

  bool same_structure(const GraphIndex& other) const;

  std::size_t base_edge_count() const;
  std::size_t extra_edge_count() const;

 private:
  std::uint32_t m_base_ = 0;
  std::uint32_t m_ex_ = kUnlimitedDegree;
  MetricKind metric_ = MetricKind::SquaredL2;
  std::uint32_t dim_ = 0;
  VertexId entry_ = kInvalidVertex;
  std::vector<std::vector<VertexId>> base_adj_;
  std::vector<std::vector<ExtraEdge>> extra_adj_;
  std::vector<VertexState> states_;
  mutable std::unique_ptr<std::mutex[]> locks_;
  std::size_t lock_count_ = 0;
};

}  // namespace ngfix
