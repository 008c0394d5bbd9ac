#include "mhdrelax/snapshot.hpp"

#include <bit>
#include <algorithm>
#include <cstring>

#include "mhdrelax/io.hpp"

namespace mhdrelax {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > bytes_.size()) throw SnapshotError(std::string("truncated snapshot reading ") + what);
    std::uint8_t tmp[sizeof(T)];
    std::memcpy(tmp, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(tmp, tmp + sizeof(T));
    T value;
    std::memcpy(&value, tmp, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap) {
  const std::size_t count = static_cast<std::size_t>(snap.n) * snap.n;
  std::vector<std::uint8_t> out = {'S', 'M', 'H', 'D'};
  put<std::uint32_t>(out, snap.box_size ? kSnapshotVersionFreeSpace : kSnapshotVersionTorus);
  put<std::uint32_t>(out, snap.n);
  put<double>(out, snap.t);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.components.size()));
  if (snap.box_size) put<double>(out, *snap.box_size);
  for (const auto& comp : snap.components) {
    if (comp.size() != count) throw SnapshotError("component size does not match n*n");
    for (double v : comp) put<double>(out, v);
  }
  return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "SMHD", 4) != 0) throw SnapshotError("bad magic bytes");
  std::vector<std::uint8_t> body(bytes.begin() + 4, bytes.end());
  Reader r(body);
  Snapshot snap;
  const auto version = r.get<std::uint32_t>("version");
  if (version != kSnapshotVersionTorus && version != kSnapshotVersionFreeSpace) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  }
  snap.n = r.get<std::uint32_t>("n");
  snap.t = r.get<double>("t");
  const auto ncomp = r.get<std::uint32_t>("component count");
  if (version == kSnapshotVersionFreeSpace) snap.box_size = r.get<double>("box size");
  if (snap.n == 0 || ncomp == 0) throw SnapshotError("empty snapshot");
  const std::size_t count = static_cast<std::size_t>(snap.n) * snap.n;
  if (r.remaining() != count * ncomp * sizeof(double)) {
    throw SnapshotError("payload size " + std::to_string(r.remaining()) + " does not match header");
  }
  snap.components.assign(ncomp, std::vector<double>(count));
  for (auto& comp : snap.components) {
    for (auto& v : comp) v = r.get<double>("payload");
  }
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const auto bytes = encode_snapshot(snap);
  io::write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::string raw;
  try {
    raw = io::read_file(path);
  } catch (const std::exception& e) {
    throw SnapshotError(e.what());
  }
  return decode_snapshot(std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

Snapshot snapshot_of(const VectorField& v, double t) {
  Snapshot snap;
  snap.n = static_cast<std::uint32_t>(v.n());
  snap.t = t;
  snap.components = {v.x.to_physical(), v.y.to_physical()};
  return snap;
}

VectorField vector_field_from(const Snapshot& snap) {
  if (snap.components.size() != 2) {
    throw SnapshotError("expected 2 components, found " + std::to_string(snap.components.size()));
  }
  if (snap.n < 4 || snap.n % 2 != 0) throw SnapshotError("snapshot grid size must be even and >= 4");
  const TorusGrid grid(static_cast<int>(snap.n));
  return VectorField(SpectralField::from_physical(grid, snap.components[0]),
                     SpectralField::from_physical(grid, snap.components[1]));
}

}  // namespace mhdrelax
