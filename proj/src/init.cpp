#include "mhdrelax/init.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mhdrelax/operators.hpp"
#include "mhdrelax/snapshot.hpp"

namespace mhdrelax {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t encode(int k) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(k)); }

// Fills the retained modes of f with amplitude |k|^{-exponent} and hashed
// phases, keeping Hermitian symmetry.
void fill_random_modes(SpectralField& f, std::uint64_t seed, std::uint64_t component, double exponent,
                       double amplitude) {
  const TorusGrid& g = f.grid();
  const int kmax = g.n() / 2 - 1;
  for (int kx = 0; kx <= kmax; ++kx) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      const double kmag = std::hypot(double(kx), double(ky));
      const double phase = 2.0 * std::numbers::pi * hashed_uniform(seed, component, encode(kx), encode(ky));
      const Complex c = std::polar(amplitude * std::pow(kmag, -exponent), phase);
      f.at(kx, ky) = c;
      f.at(-kx, -ky) = std::conj(c);
    }
  }
}

}  // namespace

double hashed_uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = splitmix64(a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  h = splitmix64(h ^ d);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "taylor_green") return InitKind::taylor_green;
  if (name == "random_sobolev") return InitKind::random_sobolev;
  if (name == "from_file") return InitKind::from_file;
  throw std::invalid_argument("unknown init kind '" + std::string(name) + "'");
}

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::taylor_green: return "taylor_green";
    case InitKind::random_sobolev: return "random_sobolev";
    case InitKind::from_file: return "from_file";
  }
  return "unknown";
}

VectorField taylor_green(TorusGrid grid) {
  // sin(2 pi x) sin(2 pi y) = -1/4 sum over (+-1, +-1) of sign(kx ky) e^{2 pi i k.x}
  SpectralField psi(grid);
  const double a = 1.0 / (2.0 * std::numbers::pi);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) psi.at(sx, sy) = Complex{-0.25 * sx * sy * a};
  }
  return perp_gradient(psi);
}

SpectralField random_scalar(TorusGrid grid, std::uint64_t seed, double exponent, double amplitude) {
  SpectralField f(grid);
  fill_random_modes(f, seed, 7, exponent, amplitude);
  return f;
}

VectorField random_sobolev(TorusGrid grid, std::uint64_t seed, double exponent, double amplitude) {
  VectorField v(grid);
  fill_random_modes(v.x, seed, 0, exponent, amplitude);
  fill_random_modes(v.y, seed, 1, exponent, amplitude);
  VectorField out = leray_project(v);
  out.x.at(0, 0) = 0.0;
  out.y.at(0, 0) = 0.0;
  return out;
}

VectorField init_field(TorusGrid grid, const InitSpec& spec) {
  switch (spec.kind) {
    case InitKind::taylor_green: return taylor_green(grid);
    case InitKind::random_sobolev:
      return random_sobolev(grid, spec.seed, spec.spectrum_exponent, spec.amplitude);
    case InitKind::from_file: {
      const Snapshot snap = read_snapshot(spec.path);
      if (snap.n != static_cast<std::uint32_t>(grid.n())) {
        throw SnapshotError("snapshot grid " + std::to_string(snap.n) + " does not match run grid " +
                            std::to_string(grid.n()));
      }
      VectorField out = leray_project(vector_field_from(snap));
      out.x.at(0, 0) = 0.0;
      out.y.at(0, 0) = 0.0;
      return out;
    }
  }
  throw std::invalid_argument("unknown init kind");
}

}  // namespace mhdrelax
