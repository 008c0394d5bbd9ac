#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mhdrelax/field.hpp"

namespace mhdrelax {

enum class InitKind { taylor_green, random_sobolev, from_file };

InitKind parse_init_kind(std::string_view name);
std::string_view to_string(InitKind kind);

struct InitSpec {
  InitKind kind = InitKind::taylor_green;
  std::uint64_t seed = 0;
  double spectrum_exponent = 1.5;
  double amplitude = 1.0;
  std::string path;  // from_file only
};

/// perp_gradient of sin(2 pi x) sin(2 pi y) / (2 pi).
VectorField taylor_green(TorusGrid grid);

/// Divergence-free, zero-mean field with |coeff(k)| = amplitude |k|^{-exponent}
/// before projection and uniformly random phases. Phases are a pure function
/// of (seed, k, component), so grids of different size share their common
/// modes exactly.
VectorField random_sobolev(TorusGrid grid, std::uint64_t seed, double exponent, double amplitude = 1.0);

/// Scalar analogue of random_sobolev (zero mean, retained modes only).
SpectralField random_scalar(TorusGrid grid, std::uint64_t seed, double exponent, double amplitude = 1.0);

VectorField init_field(TorusGrid grid, const InitSpec& spec);

/// Uniform double in [0,1) from a counter key; stateless and reproducible.
double hashed_uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0);

}  // namespace mhdrelax
