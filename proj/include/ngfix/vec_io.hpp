#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ngfix/vector_store.hpp"

namespace ngfix {

/// Raw .fvecs/.ivecs/.bvecs readers and writers. Each record is a
/// little-endian int32 dimension followed by `dim` payload elements
/// (float32 / int32 / uint8). Bit-exact with the public ANN benchmark
/// files; malformed input errors name the offending byte offset.

struct FvecsData {
  std::vector<float> data;
  std::size_t dim = 0;
  std::size_t count = 0;
};

struct IvecsData {
  std::vector<std::int32_t> data;
  std::size_t dim = 0;
  std::size_t count = 0;
};

FvecsData read_fvecs(const std::string& path);
IvecsData read_ivecs(const std::string& path);
FvecsData read_bvecs(const std::string& path);  // uint8 payload widened to float

void write_fvecs(const std::string& path, std::span<const float> data, std::size_t dim);
void write_ivecs(const std::string& path, std::span<const std::int32_t> data, std::size_t dim);
void write_bvecs(const std::string& path, std::span<const std::uint8_t> data, std::size_t dim);

/// Loads a vector file as a store, dispatching on the .fvecs/.bvecs
/// extension. Cosine stores are normalized by VectorStore::create.
VectorStore load_vector_file(const std::string& path, MetricKind metric);

/// Ground-truth id lists (one ivecs record per query).
std::vector<std::vector<VertexId>> read_id_lists(const std::string& path);
void write_id_lists(const std::string& path, const std::vector<std::vector<VertexId>>& lists);

}  // namespace ngfix
