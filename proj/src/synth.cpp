#include "ngfix/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ngfix {

SynthData synth_ood(const SynthConfig& cfg) {
  if (cfg.n == 0 || cfg.dim == 0 || cfg.n_queries == 0) {
    throw std::invalid_argument("synth_ood: n, dim and n_queries must be positive");
  }
  const std::size_t k = std::max<std::size_t>(1, std::min(cfg.clusters, cfg.n));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<double> centers(k * cfg.dim);
  for (double& x : centers) x = cfg.center_spread * unit(rng);

  std::vector<float> base(cfg.n * cfg.dim);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double* center = centers.data() + (i % k) * cfg.dim;
    for (std::size_t j = 0; j < cfg.dim; ++j) {
      base[i * cfg.dim + j] = static_cast<float>(center[j] + cfg.cluster_sigma * unit(rng));
    }
  }

  const std::size_t n_ood =
      static_cast<std::size_t>(std::ceil(cfg.ood_fraction * static_cast<double>(cfg.n_queries)));
  std::vector<float> queries(cfg.n_queries * cfg.dim);
  std::vector<std::uint8_t> is_ood(cfg.n_queries, 0);
  std::uniform_int_distribution<std::size_t> pick_base(0, cfg.n - 1);
  std::vector<double> direction(cfg.dim);
  for (std::size_t i = 0; i < cfg.n_queries; ++i) {
    float* q = queries.data() + i * cfg.dim;
    if (i < n_ood) {
      is_ood[i] = 1;
      const double* center = centers.data() + (i % k) * cfg.dim;
      double norm_sq = 0.0;
      for (std::size_t j = 0; j < cfg.dim; ++j) {
        direction[j] = unit(rng);
        norm_sq += direction[j] * direction[j];
      }
      const double inv = norm_sq > 0.0 ? 1.0 / std::sqrt(norm_sq) : 0.0;
      for (std::size_t j = 0; j < cfg.dim; ++j) {
        q[j] = static_cast<float>(center[j] + cfg.shift * direction[j] * inv +
                                  cfg.cluster_sigma * unit(rng));
      }
    } else {
      const float* anchor = base.data() + pick_base(rng) * cfg.dim;
      for (std::size_t j = 0; j < cfg.dim; ++j) {
        q[j] = static_cast<float>(anchor[j] + cfg.id_perturb * unit(rng));
      }
    }
  }

  SynthData out;
  out.base = VectorStore::create(std::move(base), cfg.dim, cfg.metric);
  out.queries.vectors = VectorStore::create(std::move(queries), cfg.dim, cfg.metric);
  out.queries.synthetic = true;
  out.is_ood = std::move(is_ood);
  return out;
}

}  // namespace ngfix
