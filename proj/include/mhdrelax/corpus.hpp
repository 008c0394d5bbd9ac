#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "mhdrelax/field.hpp"

namespace mhdrelax::corpus {

constexpr std::uint64_t kStandardSize = 1000;
constexpr double kMinExponent = 1.1;
constexpr double kMaxExponent = 3.0;

/// Spectrum exponent of corpus member `seed`, uniform on [1.1, 3.0].
double exponent_of(std::uint64_t seed);

/// random_sobolev(grid, seed, exponent_of(seed)). Scalar checks use its x component.
VectorField member(TorusGrid grid, std::uint64_t seed);

/// Worker cap: MHDRELAX_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index runs exactly once; callers write
/// to slot i only, so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mhdrelax::corpus
