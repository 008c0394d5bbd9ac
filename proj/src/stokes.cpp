#include "mhdrelax/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mhdrelax/fft.hpp"
#include "mhdrelax/operators.hpp"

namespace mhdrelax::stokes {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<Complex> padded_transform(const std::vector<double>& samples, int n, int m) {
  std::vector<Complex> buf(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) buf[static_cast<std::size_t>(i) * m + j] = samples[static_cast<std::size_t>(i) * n + j];
  }
  fft::transform_2d(buf, m, fft::Direction::forward);
  return buf;
}

}  // namespace

StokesSolution solve_stokes(const VectorField& forcing, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("solve_stokes: viscosity must be positive");
  const TorusGrid& g = forcing.grid();
  const double scale = forcing.max_abs_coeff();
  const double mean_mag = std::hypot(std::abs(forcing.x.at(0, 0)), std::abs(forcing.y.at(0, 0)));
  if (mean_mag > 1e-10 * scale) {
    throw std::invalid_argument("solve_stokes: forcing has nonzero mean after projection");
  }
  VectorField u(g);
  SpectralField p(g);
  auto fx = forcing.x.coeff();
  auto fy = forcing.y.coeff();
  auto ux = u.x.coeff();
  auto uy = u.y.coeff();
  auto pc = p.coeff();
  for (int i = 0; i < g.n(); ++i) {
    if (g.is_nyquist(i)) continue;
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      if (g.is_nyquist(j)) continue;
      const double ky = g.wavenumber(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const std::size_t idx = g.flat(i, j);
      const Complex kdotf = kx * fx[idx] + ky * fy[idx];
      const double inv_op = 1.0 / (kTwoPi * kTwoPi * nu * k2);
      ux[idx] = (fx[idx] - kx * kdotf / k2) * inv_op;
      uy[idx] = (fy[idx] - ky * kdotf / k2) * inv_op;
      // (2 pi i k) p = k k^T f / |k|^2
      pc[idx] = kdotf / (Complex{0.0, kTwoPi} * k2);
    }
  }
  u.divergence_free = true;
  return StokesSolution{std::move(u), std::move(p)};
}

StokesSolution velocity_from_B(const VectorField& B, double nu) {
  return solve_stokes(advective_term(B, B), nu);
}

double stokes_residual(const StokesSolution& sol, const VectorField& forcing, double nu) {
  VectorField r(laplacian(sol.u.x), laplacian(sol.u.y));
  r *= -nu;
  r += gradient(sol.p_star);
  r -= truncate(forcing);
  return sobolev_norm(r, SobolevIndex(-1));
}

GreensEval greens_eval(Point2 x, double nu) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  if (r2 == 0.0) throw std::invalid_argument("greens_eval: x must be nonzero");
  if (!(nu > 0.0)) throw std::invalid_argument("greens_eval: viscosity must be positive");
  const double c = 1.0 / (4.0 * kPi * nu);
  const double log_r = 0.5 * std::log(r2);
  const double r4 = r2 * r2;
  GreensEval g;
  g.x = x;
  for (int i = 0; i < 2; ++i) {
    g.q[i] = x[i] / (kTwoPi * r2);
    for (int j = 0; j < 2; ++j) {
      const double dij = i == j ? 1.0 : 0.0;
      g.U[i][j] = c * (x[i] * x[j] / r2 - dij * log_r);
      for (int k = 0; k < 2; ++k) {
        const double dik = i == k ? 1.0 : 0.0;
        const double dkj = k == j ? 1.0 : 0.0;
        g.grad_u[k][i][j] =
            c * ((dik * x[j] + dkj * x[i]) / r2 - 2.0 * x[i] * x[j] * x[k] / r4 - dij * x[k] / r2);
      }
    }
  }
  return g;
}

double greens_gradient_bound(Point2 x, double nu) { return 1.0 / (kPi * nu * std::hypot(x[0], x[1])); }

TensorSamples::TensorSamples(FreeSpaceGrid g) : grid(g) {
  if (g.n < 4 || !(g.box_size > 0.0)) throw std::invalid_argument("free-space grid needs n >= 4 and a positive box");
  for (auto& comp : f) comp.assign(g.size(), 0.0);
}

VelocitySamples solve_stokes_freespace(const TensorSamples& f, double nu) {
  const FreeSpaceGrid& grid = f.grid;
  const int n = grid.n;
  for (const auto& comp : f.f) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const bool edge = a == 0 || b == 0 || a == n - 1 || b == n - 1;
        if (edge && comp[static_cast<std::size_t>(a) * n + b] != 0.0) {
          throw std::invalid_argument("solve_stokes_freespace: forcing support touches the box boundary");
        }
      }
    }
  }
  const int m = 2 * n;
  const double h = grid.spacing();
  const std::size_t msize = static_cast<std::size_t>(m) * m;

  // kernels[2 * (2i + j) + k] = d_k U_ij sampled at offsets, self cell zero.
  std::array<std::vector<Complex>, 8> kernels;
  for (auto& kern : kernels) kern.assign(msize, Complex{});
  for (int dx = -(n - 1); dx <= n - 1; ++dx) {
    for (int dy = -(n - 1); dy <= n - 1; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const GreensEval g = greens_eval({dx * h, dy * h}, nu);
      const std::size_t idx = static_cast<std::size_t>(dx < 0 ? dx + m : dx) * m + (dy < 0 ? dy + m : dy);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          for (int k = 0; k < 2; ++k) kernels[2 * (2 * i + j) + k][idx] = g.grad_u[k][i][j];
        }
      }
    }
  }
  for (auto& kern : kernels) fft::transform_2d(kern, m, fft::Direction::forward);

  std::array<std::vector<Complex>, 4> fhat;
  for (int c = 0; c < 4; ++c) fhat[c] = padded_transform(f.f[c], n, m);

  VelocitySamples out{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  const double scale = h * h / static_cast<double>(msize);
  for (int i = 0; i < 2; ++i) {
    std::vector<Complex> acc(msize);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const auto& kern = kernels[2 * (2 * i + j) + k];
        const auto& src = fhat[2 * k + j];
        for (std::size_t q = 0; q < msize; ++q) acc[q] += kern[q] * src[q];
      }
    }
    fft::transform_2d(acc, m, fft::Direction::backward);
    auto& dst = i == 0 ? out.ux : out.uy;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) dst[static_cast<std::size_t>(a) * n + b] = scale * acc[static_cast<std::size_t>(a) * m + b].real();
    }
  }
  return out;
}

VelocitySamples solve_stokes_periodic_box(const TensorSamples& f, double nu) {
  const FreeSpaceGrid& box = f.grid;
  if (box.n % 2 != 0) throw std::invalid_argument("periodic box solve needs an even grid");
  const TorusGrid torus(box.n);
  const double length = box.box_size;
  // Unit-torus coordinates: x = L x~, so div = div~/L and Lap = Lap~/L^2.
  std::array<SpectralField, 4> fs = {SpectralField::from_physical(torus, f.f[0]), SpectralField::from_physical(torus, f.f[1]),
                                     SpectralField::from_physical(torus, f.f[2]), SpectralField::from_physical(torus, f.f[3])};
  VectorField forcing(derivative(fs[0], 0) + derivative(fs[2], 1), derivative(fs[1], 0) + derivative(fs[3], 1));
  forcing *= 1.0 / length;
  const StokesSolution sol = solve_stokes(forcing, nu / (length * length));
  return VelocitySamples{box, sol.u.x.to_physical(), sol.u.y.to_physical()};
}

double tensor_l1_norm(const TensorSamples& f) {
  double sum = 0.0;
  for (std::size_t q = 0; q < f.grid.size(); ++q) {
    double frob2 = 0.0;
    for (const auto& comp : f.f) frob2 += comp[q] * comp[q];
    sum += std::sqrt(frob2);
  }
  return sum * f.grid.cell_measure();
}

lorentz::QuasiNormReport velocity_weak_l2(const VelocitySamples& u) {
  std::vector<double> mag(u.ux.size());
  for (std::size_t q = 0; q < mag.size(); ++q) mag[q] = std::hypot(u.ux[q], u.uy[q]);
  return lorentz::weak_lp_quasinorm(mag, u.grid.cell_measure(), 2.0);
}

double kernel_weak_l2(const FreeSpaceGrid& grid, double nu) {
  const int n = grid.n;
  const double h = grid.spacing();
  std::array<std::vector<double>, 8> samples;
  for (int dx = -(n - 1); dx <= n - 1; ++dx) {
    for (int dy = -(n - 1); dy <= n - 1; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const GreensEval g = greens_eval({dx * h, dy * h}, nu);
      for (int c = 0; c < 8; ++c) samples[c].push_back(g.grad_u[c % 2][c / 4][(c / 2) % 2]);
    }
  }
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, lorentz::weak_lp_quasinorm(s, grid.cell_measure(), 2.0).value);
  return best;
}

double check_weak_young(double f_l1_norm, double g_quasinorm, double conv_quasinorm) {
  const double denom = f_l1_norm * g_quasinorm;
  if (!(denom > 0.0)) throw lorentz::DegenerateInput("weak young: zero denominator");
  return conv_quasinorm / denom;
}

BumpJet bump_jet(const Bump& b, Point2 x) {
  const double rx = x[0] - b.center[0];
  const double ry = x[1] - b.center[1];
  const double r2 = b.radius * b.radius;
  const double s = (rx * rx + ry * ry) / r2;
  if (s >= 1.0) return {};
  const double w = 1.0 / (1.0 - s);
  const double g = b.amplitude * std::exp(-w);
  const double g1 = -g * w * w;                          // dg/ds
  const double g2 = g * (w * w * w * w - 2.0 * w * w * w);  // d2g/ds2
  // s_x = 2 rx / R^2, s_xx = 2 / R^2
  const double sx = 2.0 * rx / r2;
  const double sy = 2.0 * ry / r2;
  BumpJet j;
  j.phi = g;
  j.dx = g1 * sx;
  j.dy = g1 * sy;
  j.dxx = g2 * sx * sx + g1 * 2.0 / r2;
  j.dyy = g2 * sy * sy + g1 * 2.0 / r2;
  j.dxy = g2 * sx * sy;
  return j;
}

VelocitySamples manufactured_velocity(const FreeSpaceGrid& grid, const Bump& b) {
  VelocitySamples u{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (int ix = 0; ix < grid.n; ++ix) {
    for (int iy = 0; iy < grid.n; ++iy) {
      const BumpJet j = bump_jet(b, {grid.coord(ix), grid.coord(iy)});
      const std::size_t q = static_cast<std::size_t>(ix) * grid.n + iy;
      u.ux[q] = -j.dy;
      u.uy[q] = j.dx;
    }
  }
  return u;
}

TensorSamples manufactured_forcing(const FreeSpaceGrid& grid, const Bump& b, double nu) {
  TensorSamples f(grid);
  for (int ix = 0; ix < grid.n; ++ix) {
    for (int iy = 0; iy < grid.n; ++iy) {
      const BumpJet j = bump_jet(b, {grid.coord(ix), grid.coord(iy)});
      // u* = (-phi_y, phi_x)
      f.at(0, 0, ix, iy) = nu * j.dxy;
      f.at(1, 0, ix, iy) = nu * j.dyy;
      f.at(0, 1, ix, iy) = -nu * j.dxx;
      f.at(1, 1, ix, iy) = -nu * j.dxy;
    }
  }
  return f;
}

TensorSamples magnetic_stress(const FreeSpaceGrid& grid, std::span<const Bump> bumps) {
  TensorSamples f(grid);
  for (int ix = 0; ix < grid.n; ++ix) {
    for (int iy = 0; iy < grid.n; ++iy) {
      double B[2] = {0.0, 0.0};
      for (const Bump& b : bumps) {
        const BumpJet j = bump_jet(b, {grid.coord(ix), grid.coord(iy)});
        B[0] -= j.dy;
        B[1] += j.dx;
      }
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) f.at(k, l, ix, iy) = B[k] * B[l];
      }
    }
  }
  return f;
}

}  // namespace mhdrelax::stokes
