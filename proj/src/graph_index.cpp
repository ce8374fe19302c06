#include "ngfix/graph_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ngfix {

namespace {

constexpr char kMagic[4] = {'N', 'G', 'F', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error(path + ": truncated index file");
  return value;
}

}  // namespace

GraphIndex::GraphIndex(std::size_t count, std::uint32_t m_base, std::uint32_t m_ex,
                       MetricKind metric, std::uint32_t dim)
    : m_base_(m_base),
      m_ex_(m_ex),
      metric_(metric),
      dim_(dim),
      base_adj_(count),
      extra_adj_(count),
      states_(count, VertexState::Live) {
  ensure_locks();
}

GraphIndex GraphIndex::clone() const {
  GraphIndex copy(size(), m_base_, m_ex_, metric_, dim_);
  copy.entry_ = entry_;
  copy.base_adj_ = base_adj_;
  copy.extra_adj_ = extra_adj_;
  copy.states_ = states_;
  return copy;
}

std::size_t GraphIndex::live_count() const {
  std::size_t n = 0;
  for (VertexState s : states_)
    if (s == VertexState::Live) ++n;
  return n;
}

std::vector<VertexId> GraphIndex::neighbors(VertexId v) const {
  if (v >= size()) throw std::out_of_range("neighbors: vertex " + std::to_string(v) + " out of range");
  std::vector<VertexId> out;
  neighbors_into(v, false, out);
  return out;
}

void GraphIndex::neighbors_into(VertexId v, bool locked, std::vector<VertexId>& out) const {
  std::unique_lock<std::mutex> guard;
  if (locked) guard = std::unique_lock<std::mutex>(locks_[v]);
  const auto& base = base_adj_[v];
  const auto& extra = extra_adj_[v];
  out.reserve(out.size() + base.size() + extra.size());
  out.insert(out.end(), base.begin(), base.end());
  for (const ExtraEdge& e : extra) out.push_back(e.id);
}

void GraphIndex::set_base_neighbors(VertexId v, std::vector<VertexId> ids) {
  base_adj_[v] = std::move(ids);
}

void GraphIndex::append_base_neighbor(VertexId v, VertexId target) {
  base_adj_[v].push_back(target);
}

EdgeAddResult GraphIndex::add_extra_edge(VertexId u, VertexId v, std::uint16_t tag) {
  if (u >= size() || v >= size()) throw std::out_of_range("add_extra_edge: vertex out of range");
  if (u == v) throw std::invalid_argument("add_extra_edge: self-loop");

  std::lock_guard<std::mutex> guard(locks_[u]);
  auto& base = base_adj_[u];
  if (std::find(base.begin(), base.end(), v) != base.end()) {
    return EdgeAddResult::Rejected;  // already reachable in one hop, don't waste degree
  }
  auto& extra = extra_adj_[u];
  for (ExtraEdge& e : extra) {
    if (e.id == v) {
      e.tag = std::max(e.tag, tag);
      return EdgeAddResult::Updated;
    }
  }
  if (extra.size() < m_ex_) {
    extra.push_back({v, tag});
    return EdgeAddResult::Added;
  }
  std::size_t min_at = 0;
  for (std::size_t i = 1; i < extra.size(); ++i) {
    if (extra[i].tag < extra[min_at].tag) min_at = i;
  }
  if (extra[min_at].tag < tag) {
    extra[min_at] = {v, tag};
    return EdgeAddResult::Replaced;
  }
  return EdgeAddResult::Rejected;
}

void GraphIndex::drop_extra_edges(VertexId v, std::span<const std::uint32_t> sorted_indices,
                                  bool reset_tags) {
  auto& extra = extra_adj_[v];
  for (auto it = sorted_indices.rbegin(); it != sorted_indices.rend(); ++it) {
    extra.erase(extra.begin() + *it);
  }
  if (reset_tags) {
    for (ExtraEdge& e : extra) e.tag = 0;
  }
}

void GraphIndex::clear_adjacency(VertexId v) {
  base_adj_[v].clear();
  base_adj_[v].shrink_to_fit();
  extra_adj_[v].clear();
  extra_adj_[v].shrink_to_fit();
}

void GraphIndex::remove_edges_into(const std::vector<bool>& target_set) {
  for (std::size_t v = 0; v < size(); ++v) {
    auto& base = base_adj_[v];
    base.erase(std::remove_if(base.begin(), base.end(), [&](VertexId t) { return target_set[t]; }),
               base.end());
    auto& extra = extra_adj_[v];
    extra.erase(
        std::remove_if(extra.begin(), extra.end(), [&](const ExtraEdge& e) { return target_set[e.id]; }),
        extra.end());
  }
}

VertexId GraphIndex::add_vertex() {
  base_adj_.emplace_back();
  extra_adj_.emplace_back();
  states_.push_back(VertexState::Live);
  ensure_locks();
  return static_cast<VertexId>(size() - 1);
}

void GraphIndex::ensure_locks() {
  if (locks_ && lock_count_ >= size()) return;
  // Amortized growth: mutexes are not movable, so appends reallocate.
  const std::size_t capacity = std::max<std::size_t>(std::max(size(), 2 * lock_count_), 16);
  locks_ = std::make_unique<std::mutex[]>(capacity);
  lock_count_ = capacity;
}

void GraphIndex::serialize(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(metric_));
  put(out, dim_);
  put(out, static_cast<std::uint64_t>(size()));
  put(out, static_cast<std::uint64_t>(entry_));
  put(out, m_base_);
  put(out, m_ex_);
  for (VertexState s : states_) put(out, static_cast<std::uint8_t>(s));
  for (const auto& adj : base_adj_) {
    put(out, static_cast<std::uint32_t>(adj.size()));
    for (VertexId id : adj) put(out, id);
  }
  for (const auto& adj : extra_adj_) {
    put(out, static_cast<std::uint32_t>(adj.size()));
    for (const ExtraEdge& e : adj) {
      put(out, e.id);
      put(out, e.tag);
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

GraphIndex GraphIndex::deserialize(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": not an NGFX index file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw std::runtime_error(path + ": unsupported index version " + std::to_string(version));
  }
  const auto metric = static_cast<MetricKind>(get<std::uint32_t>(in, path));
  const auto dim = get<std::uint32_t>(in, path);
  const auto count = get<std::uint64_t>(in, path);
  const auto entry = get<std::uint64_t>(in, path);
  const auto m_base = get<std::uint32_t>(in, path);
  const auto m_ex = get<std::uint32_t>(in, path);

  GraphIndex g(count, m_base, m_ex, metric, dim);
  g.entry_ = static_cast<VertexId>(entry);
  for (std::size_t v = 0; v < count; ++v) {
    g.states_[v] = static_cast<VertexState>(get<std::uint8_t>(in, path));
  }
  for (std::size_t v = 0; v < count; ++v) {
    const auto deg = get<std::uint32_t>(in, path);
    auto& adj = g.base_adj_[v];
    adj.resize(deg);
    for (auto& id : adj) id = get<VertexId>(in, path);
  }
  for (std::size_t v = 0; v < count; ++v) {
    const auto deg = get<std::uint32_t>(in, path);
    auto& adj = g.extra_adj_[v];
    adj.resize(deg);
    for (auto& e : adj) {
      e.id = get<VertexId>(in, path);
      e.tag = get<std::uint16_t>(in, path);
    }
  }
  return g;
}

bool GraphIndex::same_structure(const GraphIndex& other) const {
  if (size() != other.size() || entry_ != other.entry_ || m_base_ != other.m_base_ ||
      m_ex_ != other.m_ex_ || metric_ != other.metric_ || dim_ != other.dim_ ||
      states_ != other.states_ || base_adj_ != other.base_adj_) {
    return false;
  }
  for (std::size_t v = 0; v < size(); ++v) {
    const auto& a = extra_adj_[v];
    const auto& b = other.extra_adj_[v];
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].id != b[i].id || a[i].tag != b[i].tag) return false;
    }
  }
  return true;
}

std::size_t GraphIndex::base_edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : base_adj_) n += adj.size();
  return n;
}

std::size_t GraphIndex::extra_edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : extra_adj_) n += adj.size();
  return n;
}

}  // namespace ngfix
