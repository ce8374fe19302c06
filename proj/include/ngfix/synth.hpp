#pragma once

#include <cstdint>
#include <vector>

#include "ngfix/workload.hpp"

namespace ngfix {

/// Desk-scale synthetic cross-distribution workload: the base data is a
/// mixture of Gaussian clusters; OOD queries displace cluster means by
/// `shift` along random directions, ID queries perturb base points.
struct SynthConfig {
  std::size_t n = 10000;
  std::size_t dim = 16;
  std::size_t n_queries = 1000;
  double shift = 8.0;
  std::uint64_t seed = 1;
  double ood_fraction = 1.0;  // leading fraction of queries drawn OOD
  std::size_t clusters = 8;
  double center_spread = 10.0;  // std-dev of cluster centers
  double cluster_sigma = 1.0;   // within-cluster noise
  double id_perturb = 0.25;     // perturbation of ID queries around base points
  MetricKind metric = MetricKind::SquaredL2;
};

struct SynthData {
  VectorStore base;
  QuerySet queries;
  std::vector<std::uint8_t> is_ood;  // per query
};

/// Deterministic under (config, seed): identical bits across runs.
SynthData synth_ood(const SynthConfig& cfg);

}  // namespace ngfix
