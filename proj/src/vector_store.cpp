#include "ngfix/vector_store.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ngfix {

void VectorStore::validate_and_fix(float* vec, std::size_t at_count) {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(vec[i])) {
      throw std::runtime_error("non-finite component in vector " + std::to_string(at_count) +
                               " at dim " + std::to_string(i));
    }
  }
  if (metric_ == MetricKind::Cosine) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) norm_sq += static_cast<double>(vec[i]) * vec[i];
    if (norm_sq == 0.0) {
      throw std::runtime_error("zero vector " + std::to_string(at_count) +
                               " not representable under cosine metric");
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (std::size_t i = 0; i < dim_; ++i) vec[i] *= inv;
  }
}

VectorStore VectorStore::create(std::vector<float> data, std::size_t dim, MetricKind metric) {
  if (dim == 0) throw std::invalid_argument("vector dimension must be positive");
  if (data.size() % dim != 0) {
    throw std::invalid_argument("data size " + std::to_string(data.size()) +
                                " is not a multiple of dim " + std::to_string(dim));
  }
  VectorStore store;
  store.dim_ = dim;
  store.count_ = data.size() / dim;
  store.metric_ = metric;
  store.data_ = std::move(data);
  for (std::size_t i = 0; i < store.count_; ++i) {
    store.validate_and_fix(store.data_.data() + i * dim, i);
  }
  return store;
}

VertexId VectorStore::append(std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("append: dimension mismatch (" + std::to_string(vec.size()) +
                                " vs " + std::to_string(dim_) + ")");
  }
  const std::size_t offset = data_.size();
  data_.insert(data_.end(), vec.begin(), vec.end());
  validate_and_fix(data_.data() + offset, count_);
  return static_cast<VertexId>(count_++);
}

VertexId medoid(const VectorStore& store, std::span<const VertexState> states) {
  const std::size_t n = store.count();
  const std::size_t d = store.dim();
  auto alive = [&](std::size_t i) {
    return states.empty() || states[i] == VertexState::Live;
  };

  std::vector<double> mean(d, 0.0);
  std::size_t live = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive(i)) continue;
    const float* v = store.vector(static_cast<VertexId>(i));
    for (std::size_t j = 0; j < d; ++j) mean[j] += v[j];
    ++live;
  }
  if (live == 0) throw std::runtime_error("medoid of empty store");
  std::vector<float> mean_f(d);
  for (std::size_t j = 0; j < d; ++j) mean_f[j] = static_cast<float>(mean[j] / static_cast<double>(live));

  if (store.metric() == MetricKind::Cosine) {
    double norm_sq = 0.0;
    for (float x : mean_f) norm_sq += static_cast<double>(x) * x;
    if (norm_sq > 0.0) {
      const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
      for (float& x : mean_f) x *= inv;
    }
  }

  VertexId best = kInvalidVertex;
  float best_dist = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive(i)) continue;
    const float dist = store.distance_to(mean_f.data(), static_cast<VertexId>(i));
    if (best == kInvalidVertex || dist < best_dist) {
      best = static_cast<VertexId>(i);
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace ngfix
