#pragma once

#include <array>
#include <span>
#include <vector>

#include "mhdrelax/field.hpp"
#include "mhdrelax/lorentz.hpp"

namespace mhdrelax::stokes {

/// Solution of -nu Lap u + grad p_star = g, div u = 0 on the unit torus.
/// p_star is the total pressure, normalized to zero mean.
struct StokesSolution {
  VectorField u;
  SpectralField p_star;
};

/// Fourier-multiplier solve. The mean of g must vanish (it is the k = 0 mode
/// of the projected forcing, where the operator is singular).
StokesSolution solve_stokes(const VectorField& forcing, double nu);

/// u slaved to B through -nu Lap u + grad p_star = (B.grad) B.
StokesSolution velocity_from_B(const VectorField& B, double nu);

/// ||-nu Lap u + grad p_star - g||_{H^{-1}} over the retained modes.
double stokes_residual(const StokesSolution& sol, const VectorField& forcing, double nu);

using Mat2 = std::array<std::array<double, 2>, 2>;
using Point2 = std::array<double, 2>;

/// Free-space Stokes fundamental solution at x != 0:
///   U_ij = (x_i x_j/|x|^2 - delta_ij log|x|) / (4 pi nu),  q_j = x_j / (2 pi |x|^2),
/// and grad_u[k][i][j] = d_k U_ij.
struct GreensEval {
  Point2 x{};
  Mat2 U{};
  std::array<double, 2> q{};
  std::array<Mat2, 2> grad_u{};
};

GreensEval greens_eval(Point2 x, double nu);

/// 1 / (pi nu |x|), the pointwise bound on every d_k U_ij.
double greens_gradient_bound(Point2 x, double nu);

/// Cell-centred sampling of the box [-L/2, L/2]^2: cell i has centre
/// -L/2 + (i + 1/2) L/n.
struct FreeSpaceGrid {
  int n = 0;
  double box_size = 0.0;

  double spacing() const { return box_size / n; }
  double coord(int i) const { return -0.5 * box_size + (i + 0.5) * spacing(); }
  double cell_measure() const { return spacing() * spacing(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
};

/// Samples of a 2x2 tensor field f_kj, component (k, j) stored at 2k + j,
/// each row-major with x as the slow index.
struct TensorSamples {
  FreeSpaceGrid grid;
  std::array<std::vector<double>, 4> f;

  explicit TensorSamples(FreeSpaceGrid g);
  double& at(int k, int j, int ix, int iy) { return f[2 * k + j][static_cast<std::size_t>(ix) * grid.n + iy]; }
  double at(int k, int j, int ix, int iy) const { return f[2 * k + j][static_cast<std::size_t>(ix) * grid.n + iy]; }
};

struct VelocitySamples {
  FreeSpaceGrid grid;
  std::vector<double> ux;
  std::vector<double> uy;
};

/// Midpoint quadrature of u_i(x) = sum_{j,k} int (d_k U_ij)(x - y) f_kj(y) dy
/// with the self cell omitted. Evaluated as a zero-padded FFT convolution,
/// identical to the direct sum up to round-off. The outermost ring of cells
/// must be zero (support strictly inside the box).
VelocitySamples solve_stokes_freespace(const TensorSamples& f, double nu);

/// Periodic spectral solve of -nu Lap u + grad p = div f on the box taken as
/// a torus. Agrees with the free-space solution whenever the latter is
/// compactly supported inside the box.
VelocitySamples solve_stokes_periodic_box(const TensorSamples& f, double nu);

/// sum over cells of the Frobenius norm of f, times the cell measure.
double tensor_l1_norm(const TensorSamples& f);

/// Weak-L^2 quasinorm of |u| over the box.
lorentz::QuasiNormReport velocity_weak_l2(const VelocitySamples& u);

/// Largest weak-L^2 quasinorm among the sampled kernels d_k U_ij restricted to
/// the box (analytic bound 1/(nu sqrt(pi))).
double kernel_weak_l2(const FreeSpaceGrid& grid, double nu);

/// phi(x) = amplitude * exp(-1 / (1 - |x - center|^2 / radius^2)) inside the
/// disc, zero outside: a compactly supported smooth stream function.
struct Bump {
  Point2 center{0.0, 0.0};
  double radius = 1.0;
  double amplitude = 1.0;
};

struct BumpJet {
  double phi = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
};
BumpJet bump_jet(const Bump& b, Point2 x);

/// Exact solution u* = perp_gradient(phi) and its forcing f_kj = -nu d_k u*_j,
/// for which div f = -nu Lap u* and the pressure vanishes.
VelocitySamples manufactured_velocity(const FreeSpaceGrid& grid, const Bump& b);
TensorSamples manufactured_forcing(const FreeSpaceGrid& grid, const Bump& b, double nu);

/// f = B (x) B with B = perp_gradient(sum of the bumps' phi). A single radial
/// bump gives a pure-gradient (B.grad)B and hence u = 0.
TensorSamples magnetic_stress(const FreeSpaceGrid& grid, std::span<const Bump> bumps);

/// conv_quasinorm / (f_l1_norm * g_quasinorm).
double check_weak_young(double f_l1_norm, double g_quasinorm, double conv_quasinorm);

}  // namespace mhdrelax::stokes
