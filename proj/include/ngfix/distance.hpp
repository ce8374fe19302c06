#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ngfix/types.hpp"

namespace ngfix {

inline float l2_sqr(const float* a, const float* b, std::size_t dim) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < dim; ++i) {
    const float d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline float dot_product(const float* a, const float* b, std::size_t dim) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < dim; ++i) acc += a[i] * b[i];
  return acc;
}

/// Metric value under "smaller is closer". Cosine assumes unit-norm inputs
/// (VectorStore normalizes at load); inner product is negated for ordering.
inline float distance(const float* a, const float* b, std::size_t dim, MetricKind kind) {
  switch (kind) {
    case MetricKind::SquaredL2:
      return l2_sqr(a, b, dim);
    case MetricKind::Cosine:
      return 1.0f - dot_product(a, b, dim);
    case MetricKind::InnerProduct:
      return -dot_product(a, b, dim);
  }
  return 0.0f;  // unreachable
}

inline float distance(const float* a, const float* b, std::size_t dim, MetricKind kind,
                      DistanceCounter& counter) {
  ++counter.ndc;
  return distance(a, b, dim, kind);
}

inline std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::SquaredL2: return "l2";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::InnerProduct: return "ip";
  }
  return "?";
}

inline MetricKind parse_metric(std::string_view name) {
  if (name == "l2" || name == "euclidean") return MetricKind::SquaredL2;
  if (name == "cosine") return MetricKind::Cosine;
  if (name == "ip" || name == "inner" || name == "mips") return MetricKind::InnerProduct;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "' (expected l2|cosine|ip)");
}

/// Relative distance error is defined only for metrics with non-negative
/// true distances; negated inner product breaks the ratio.
inline bool metric_supports_rderr(MetricKind kind) {
  return kind == MetricKind::SquaredL2 || kind == MetricKind::Cosine;
}

}  // namespace ngfix
