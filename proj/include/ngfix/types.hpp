#pragma once

#include <cstdint>
#include <limits>

namespace ngfix {

using VertexId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

/// Sentinel for an unresolved escape-hardness entry (pair not connected
/// within the MaxS-rank subgraph).
inline constexpr std::uint32_t kEhInfinite = std::numeric_limits<std::uint32_t>::max();

/// 16-bit on-edge tag encoding infinite escape hardness. Edges carrying it
/// are maximally prune-resistant.
inline constexpr std::uint16_t kEhTagInfinite = 0xFFFF;

/// Unlimited extra out-degree (disables eviction).
inline constexpr std::uint32_t kUnlimitedDegree = std::numeric_limits<std::uint32_t>::max();

enum class MetricKind : std::uint32_t {
  SquaredL2 = 0,
  Cosine = 1,
  InnerProduct = 2,  // delta = -<a,b>, ordering proxy for MIPS
};

/// Counts distance evaluations (NDC). One counter per search context,
/// never shared between threads.
struct DistanceCounter {
  std::uint64_t ndc = 0;
  void reset() { ndc = 0; }
};

enum class VertexState : std::uint8_t {
  Live = 0,
  Tombstoned = 1,  // lazily deleted: navigable, never returned
  Removed = 2,     // compacted away: id retired forever
};

}  // namespace ngfix
