#include "ngfix/hardness.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ngfix {

NeighboringGraph NeighboringGraph::from_rank_edges(
    std::size_t s, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  NeighboringGraph ng;
  ng.ids.resize(s);
  for (std::size_t r = 0; r < s; ++r) ng.ids[r] = static_cast<VertexId>(r);
  ng.adj.resize(s);
  for (const auto& [i, j] : edges) {
    if (i < 1 || j < 1 || i > s || j > s) throw std::invalid_argument("rank edge out of range");
    if (i == j) continue;
    ng.adj[i - 1].push_back(j - 1);
  }
  for (auto& row : ng.adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return ng;
}

NeighboringGraph neighboring_graph(const GraphIndex& graph, const KnnList& knn, std::size_t s,
                                   bool locked_reads) {
  if (s == 0) throw std::invalid_argument("neighboring_graph: S must be positive");
  if (s > knn.size()) {
    throw std::invalid_argument("neighboring_graph: S=" + std::to_string(s) +
                                " exceeds knn depth " + std::to_string(knn.size()));
  }
  NeighboringGraph ng;
  ng.ids.assign(knn.ids.begin(), knn.ids.begin() + s);
  ng.adj.resize(s);

  std::unordered_map<VertexId, std::uint32_t> rank_of;
  rank_of.reserve(s * 2);
  for (std::size_t r = 0; r < s; ++r) rank_of.emplace(ng.ids[r], static_cast<std::uint32_t>(r));

  std::vector<VertexId> nbrs;
  for (std::size_t r = 0; r < s; ++r) {
    nbrs.clear();
    graph.neighbors_into(ng.ids[r], locked_reads, nbrs);
    auto& row = ng.adj[r];
    for (VertexId nb : nbrs) {
      auto it = rank_of.find(nb);
      if (it != rank_of.end() && it->second != r) row.push_back(it->second);
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return ng;
}

HardnessMatrix compute_hardness(const NeighboringGraph& ng, std::uint32_t n_q) {
  const std::size_t s = ng.size();
  if (n_q == 0 || n_q > s) {
    throw std::invalid_argument("compute_hardness: n_q must be in [1, MaxS]");
  }
  HardnessMatrix out;
  out.n_q = n_q;
  out.max_s = static_cast<std::uint32_t>(s);
  out.h.assign(static_cast<std::size_t>(n_q) * n_q, kEhInfinite);

  const std::size_t words = (s + 63) / 64;
  std::vector<std::uint64_t> closure(s * words, 0);
  auto row = [&](std::size_t i) { return closure.data() + i * words; };
  auto test_bit = [](const std::uint64_t* r, std::size_t j) {
    return (r[j >> 6] >> (j & 63)) & 1u;
  };

  for (std::size_t i = 0; i < s; ++i) {
    row(i)[i >> 6] |= std::uint64_t{1} << (i & 63);
    for (std::uint32_t j : ng.adj[i]) row(i)[j >> 6] |= std::uint64_t{1} << (j & 63);
  }

  // Seed direct pairs among the tracked ranks.
  std::size_t finite = 0;
  const std::size_t total = static_cast<std::size_t>(n_q) * n_q;
  for (std::uint32_t i = 0; i < n_q; ++i) {
    for (std::uint32_t j = 0; j < n_q; ++j) {
      if (test_bit(row(i), j)) {
        out.h[static_cast<std::size_t>(i) * n_q + j] = std::max(i, j) + 1;
        ++finite;
      }
    }
  }
  if (finite == total) return out;

  // Bits of a tracked row at positions >= n_q never touch H.
  const std::size_t nq_words = (n_q + 63) / 64;
  const std::uint64_t tail_mask =
      (n_q & 63) ? ((std::uint64_t{1} << (n_q & 63)) - 1) : ~std::uint64_t{0};

  for (std::size_t h = 0; h < s; ++h) {
    const std::uint64_t* pivot = row(h);
    for (std::size_t i = 0; i < s; ++i) {
      if (i == h) continue;
      std::uint64_t* self = row(i);
      if (!test_bit(self, h)) continue;
      if (i < n_q) {
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t diff = pivot[w] & ~self[w];
          self[w] |= pivot[w];
          if (w >= nq_words) continue;
          if (w == nq_words - 1) diff &= tail_mask;
          while (diff) {
            const std::size_t j = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(diff));
            diff &= diff - 1;
            out.h[i * n_q + j] =
                std::max({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                          static_cast<std::uint32_t>(h)}) +
                1;
            ++finite;
          }
        }
        if (finite == total) return out;
      } else {
        for (std::size_t w = 0; w < words; ++w) self[w] |= pivot[w];
      }
    }
  }
  return out;
}

bool ReachableMatrix::all_ones() const {
  return std::all_of(t.begin(), t.end(), [](std::uint8_t b) { return b != 0; });
}

ReachableMatrix reachable_matrix(const HardnessMatrix& h, std::uint32_t k_h) {
  if (k_h < h.n_q) {
    throw std::invalid_argument("reachable_matrix: K_h=" + std::to_string(k_h) +
                                " below N_q=" + std::to_string(h.n_q));
  }
  ReachableMatrix out;
  out.n_q = h.n_q;
  out.t.resize(h.h.size());
  for (std::size_t i = 0; i < h.h.size(); ++i) out.t[i] = h.h[i] <= k_h ? 1 : 0;
  return out;
}

std::uint32_t brute_force_eh(const NeighboringGraph& ng, std::uint32_t i, std::uint32_t j) {
  const std::size_t s = ng.size();
  if (i < 1 || j < 1 || i > s || j > s) throw std::invalid_argument("brute_force_eh: rank out of range");
  if (i == j) return i;
  std::vector<std::uint8_t> seen(s);
  std::vector<std::uint32_t> stack;
  for (std::size_t cap = std::max(i, j); cap <= s; ++cap) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.clear();
    stack.push_back(i - 1);
    seen[i - 1] = 1;
    bool reached = false;
    while (!stack.empty() && !reached) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t v : ng.adj[u]) {
        if (v >= cap || seen[v]) continue;
        if (v == j - 1) {
          reached = true;
          break;
        }
        seen[v] = 1;
        stack.push_back(v);
      }
    }
    if (reached) return static_cast<std::uint32_t>(cap);
  }
  return kEhInfinite;
}

}  // namespace ngfix
