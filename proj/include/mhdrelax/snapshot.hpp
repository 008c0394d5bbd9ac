#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdrelax/field.hpp"

namespace mhdrelax {

/// Binary field snapshot, little-endian:
///   "SMHD" | u32 version | u32 n | f64 t | u32 components | [f64 box_size] | payload
/// Version 1 is a torus snapshot; version 2 adds box_size for free-space
/// runs. The payload holds n*n row-major physical samples per component,
/// sample (i, j) at x = i*h, y = j*h.
struct Snapshot {
  std::uint32_t n = 0;
  double t = 0.0;
  std::vector<std::vector<double>> components;
  std::optional<double> box_size;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kSnapshotVersionTorus = 1;
inline constexpr std::uint32_t kSnapshotVersionFreeSpace = 2;

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

Snapshot snapshot_of(const VectorField& v, double t);
VectorField vector_field_from(const Snapshot& snap);

}  // namespace mhdrelax
