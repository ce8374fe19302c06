#include "ngfix/vec_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ngfix {

namespace {

[[noreturn]] void fail(const std::string& path, std::uint64_t offset, const std::string& what) {
  throw std::runtime_error(path + ": " + what + " at byte offset " + std::to_string(offset));
}

class RecordReader {
 public:
  RecordReader(const std::string& path, std::size_t elem_size)
      : path_(path), elem_size_(elem_size), in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open '" + path + "'");
    in_.seekg(0, std::ios::end);
    file_size_ = static_cast<std::uint64_t>(in_.tellg());
    in_.seekg(0, std::ios::beg);
  }

  // Returns false at clean EOF. `payload` receives dim*elem_size bytes.
  bool next(std::vector<char>& payload, std::size_t& dim) {
    if (offset_ == file_size_) return false;
    std::int32_t d = 0;
    if (file_size_ - offset_ < sizeof(d)) fail(path_, offset_, "truncated record header");
    in_.read(reinterpret_cast<char*>(&d), sizeof(d));
    if (d <= 0) fail(path_, offset_, "non-positive record dimension " + std::to_string(d));
    const std::uint64_t payload_bytes = static_cast<std::uint64_t>(d) * elem_size_;
    if (file_size_ - offset_ - sizeof(d) < payload_bytes) {
      fail(path_, offset_, "truncated record payload (dim " + std::to_string(d) + ")");
    }
    payload.resize(payload_bytes);
    in_.read(payload.data(), static_cast<std::streamsize>(payload_bytes));
    dim = static_cast<std::size_t>(d);
    if (first_dim_ == 0) {
      first_dim_ = dim;
    } else if (dim != first_dim_) {
      fail(path_, offset_,
           "inconsistent dimension " + std::to_string(dim) + " (expected " + std::to_string(first_dim_) + ")");
    }
    record_offset_ = offset_;
    offset_ += sizeof(d) + payload_bytes;
    return true;
  }

  std::uint64_t record_offset() const { return record_offset_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t elem_size_;
  std::ifstream in_;
  std::uint64_t file_size_ = 0;
  std::uint64_t offset_ = 0;
  std::uint64_t record_offset_ = 0;
  std::size_t first_dim_ = 0;
};

template <typename T>
void write_records(const std::string& path, std::span<const T> data, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("write: dimension must be positive");
  if (data.size() % dim != 0) throw std::invalid_argument("write: data size not a multiple of dim");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const std::int32_t d32 = static_cast<std::int32_t>(dim);
  const std::size_t count = data.size() / dim;
  for (std::size_t i = 0; i < count; ++i) {
    out.write(reinterpret_cast<const char*>(&d32), sizeof(d32));
    out.write(reinterpret_cast<const char*>(data.data() + i * dim),
              static_cast<std::streamsize>(dim * sizeof(T)));
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

FvecsData read_fvecs(const std::string& path) {
  RecordReader reader(path, sizeof(float));
  FvecsData out;
  std::vector<char> payload;
  std::size_t dim = 0;
  while (reader.next(payload, dim)) {
    out.dim = dim;
    const std::size_t base = out.data.size();
    out.data.resize(base + dim);
    std::memcpy(out.data.data() + base, payload.data(), payload.size());
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(out.data[base + i])) {
        fail(path, reader.record_offset(), "non-finite float in record " + std::to_string(out.count));
      }
    }
    ++out.count;
  }
  return out;
}

IvecsData read_ivecs(const std::string& path) {
  RecordReader reader(path, sizeof(std::int32_t));
  IvecsData out;
  std::vector<char> payload;
  std::size_t dim = 0;
  while (reader.next(payload, dim)) {
    out.dim = dim;
    const std::size_t base = out.data.size();
    out.data.resize(base + dim);
    std::memcpy(out.data.data() + base, payload.data(), payload.size());
    ++out.count;
  }
  return out;
}

FvecsData read_bvecs(const std::string& path) {
  RecordReader reader(path, sizeof(std::uint8_t));
  FvecsData out;
  std::vector<char> payload;
  std::size_t dim = 0;
  while (reader.next(payload, dim)) {
    out.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
      out.data.push_back(static_cast<float>(static_cast<std::uint8_t>(payload[i])));
    }
    ++out.count;
  }
  return out;
}

void write_fvecs(const std::string& path, std::span<const float> data, std::size_t dim) {
  write_records(path, data, dim);
}

void write_ivecs(const std::string& path, std::span<const std::int32_t> data, std::size_t dim) {
  write_records(path, data, dim);
}

void write_bvecs(const std::string& path, std::span<const std::uint8_t> data, std::size_t dim) {
  write_records(path, data, dim);
}

VectorStore load_vector_file(const std::string& path, MetricKind metric) {
  FvecsData raw = ends_with(path, ".bvecs") ? read_bvecs(path) : read_fvecs(path);
  if (raw.count == 0) throw std::runtime_error("'" + path + "' contains no vectors");
  return VectorStore::create(std::move(raw.data), raw.dim, metric);
}

std::vector<std::vector<VertexId>> read_id_lists(const std::string& path) {
  IvecsData raw = read_ivecs(path);
  std::vector<std::vector<VertexId>> lists(raw.count);
  for (std::size_t i = 0; i < raw.count; ++i) {
    lists[i].reserve(raw.dim);
    for (std::size_t j = 0; j < raw.dim; ++j) {
      const std::int32_t v = raw.data[i * raw.dim + j];
      if (v < 0) {
        throw std::runtime_error(path + ": negative id " + std::to_string(v) + " in record " +
                                 std::to_string(i));
      }
      lists[i].push_back(static_cast<VertexId>(v));
    }
  }
  return lists;
}

void write_id_lists(const std::string& path, const std::vector<std::vector<VertexId>>& lists) {
  if (lists.empty()) throw std::invalid_argument("write_id_lists: empty list set");
  const std::size_t dim = lists.front().size();
  std::vector<std::int32_t> flat;
  flat.reserve(lists.size() * dim);
  for (const auto& l : lists) {
    if (l.size() != dim) throw std::invalid_argument("write_id_lists: ragged lists");
    for (VertexId id : l) flat.push_back(static_cast<std::int32_t>(id));
  }
  write_ivecs(path, flat, dim);
}

}  // namespace ngfix
