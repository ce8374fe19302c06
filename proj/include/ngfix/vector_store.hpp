#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ngfix/distance.hpp"
#include "ngfix/types.hpp"

namespace ngfix {

/// Dense row-major float32 vector set plus the metric. Immutable after
/// creation except for maintenance appends, which require exclusive access.
/// Under the cosine metric every vector is normalized at load, so the
/// cosine distance reduces to 1 - dot.
class VectorStore {
 public:
  VectorStore() = default;

  /// Takes ownership of `data` (count*dim row-major floats). Rejects
  /// non-finite components; rejects (and otherwise normalizes away)
  /// zero vectors under cosine.
  static VectorStore create(std::vector<float> data, std::size_t dim, MetricKind metric);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }
  MetricKind metric() const { return metric_; }
  bool empty() const { return count_ == 0; }

  const float* vector(VertexId id) const { return data_.data() + static_cast<std::size_t>(id) * dim_; }
  std::span<const float> row(VertexId id) const { return {vector(id), dim_}; }
  const std::vector<float>& data() const { return data_; }

  /// Maintenance append; returns the new vertex id.
  VertexId append(std::span<const float> vec);

  float distance_between(VertexId a, VertexId b) const {
    return distance(vector(a), vector(b), dim_, metric_);
  }
  float distance_to(const float* q, VertexId v) const {
    return distance(q, vector(v), dim_, metric_);
  }
  float distance_to(const float* q, VertexId v, DistanceCounter& counter) const {
    return distance(q, vector(v), dim_, metric_, counter);
  }

 private:
  void validate_and_fix(float* vec, std::size_t at_count);

  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  MetricKind metric_ = MetricKind::SquaredL2;
  std::vector<float> data_;
};

/// Id of the stored vector nearest to the arithmetic mean of the
/// considered vectors, ties by ascending id. When `states` is non-empty,
/// only Live vertices are considered (both for the mean and the scan).
VertexId medoid(const VectorStore& store, std::span<const VertexState> states = {});

}  // namespace ngfix
