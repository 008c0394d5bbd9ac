#include "mhdrelax/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mhdrelax/fft.hpp"

namespace mhdrelax {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Applies mult(kx, ky) to every retained mode and zeroes the Nyquist modes.
template <typename Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier mult) {
  const TorusGrid& g = f.grid();
  SpectralField out(g);
  auto src = f.coeff();
  auto dst = out.coeff();
  for (int i = 0; i < g.n(); ++i) {
    if (g.is_nyquist(i)) continue;
    const int kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      if (g.is_nyquist(j)) continue;
      const std::size_t idx = g.flat(i, j);
      dst[idx] = mult(kx, g.wavenumber(j)) * src[idx];
    }
  }
  return out;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

SpectralField truncate(const SpectralField& f) {
  return apply_multiplier(f, [](int, int) { return Complex{1.0}; });
}

VectorField truncate(const VectorField& v) {
  return VectorField(truncate(v.x), truncate(v.y), v.divergence_free);
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("axis must be 0 or 1");
  return apply_multiplier(f, [axis](int kx, int ky) { return kI * kTwoPi * double(axis == 0 ? kx : ky); });
}

VectorField gradient(const SpectralField& f) { return VectorField(derivative(f, 0), derivative(f, 1)); }

SpectralField divergence(const VectorField& v) { return derivative(v.x, 0) + derivative(v.y, 1); }

SpectralField laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](int kx, int ky) { return Complex{-kTwoPi * kTwoPi * double(kx * kx + ky * ky)}; });
}

SpectralField inverse_laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](int kx, int ky) {
    const int k2 = kx * kx + ky * ky;
    return k2 == 0 ? Complex{} : Complex{-1.0 / (kTwoPi * kTwoPi * k2)};
  });
}

VectorField perp_gradient(const SpectralField& f) {
  SpectralField vx = derivative(f, 1);
  vx *= -1.0;
  return VectorField(std::move(vx), derivative(f, 0), true);
}

SpectralField curl(const VectorField& v) { return derivative(v.y, 0) - derivative(v.x, 1); }

VectorField leray_project(const VectorField& v) {
  const TorusGrid& g = v.grid();
  VectorField out(g);
  auto sx = v.x.coeff();
  auto sy = v.y.coeff();
  auto dx = out.x.coeff();
  auto dy = out.y.coeff();
  for (int i = 0; i < g.n(); ++i) {
    if (g.is_nyquist(i)) continue;
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      if (g.is_nyquist(j)) continue;
      const double ky = g.wavenumber(j);
      const std::size_t idx = g.flat(i, j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        dx[idx] = sx[idx];
        dy[idx] = sy[idx];
        continue;
      }
      const Complex kdotv = (kx * sx[idx] + ky * sy[idx]) / k2;
      dx[idx] = sx[idx] - kx * kdotv;
      dy[idx] = sy[idx] - ky * kdotv;
    }
  }
  out.divergence_free = true;
  return out;
}

double divergence_defect(const VectorField& v) {
  const TorusGrid& g = v.grid();
  const double scale = v.max_abs_coeff();
  if (scale == 0.0) return 0.0;
  auto cx = v.x.coeff();
  auto cy = v.y.coeff();
  double worst = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const std::size_t idx = g.flat(i, j);
      worst = std::max(worst, std::abs(kx * cx[idx] + double(g.wavenumber(j)) * cy[idx]));
    }
  }
  return worst / scale;
}

bool is_divergence_free(const VectorField& v, double rel_tol) { return divergence_defect(v) <= rel_tol; }

double sobolev_norm(const SpectralField& f, SobolevIndex s) {
  const TorusGrid& g = f.grid();
  auto c = f.coeff();
  double sum = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const double ky = g.wavenumber(j);
      const double weight = std::pow(1.0 + kTwoPi * kTwoPi * (kx * kx + ky * ky), s.value());
      sum += weight * std::norm(c[g.flat(i, j)]);
    }
  }
  return std::sqrt(sum);
}

double sobolev_norm(const VectorField& v, SobolevIndex s) {
  return std::hypot(sobolev_norm(v.x, s), sobolev_norm(v.y, s));
}

double gradient_norm(const SpectralField& f) {
  const TorusGrid& g = f.grid();
  auto c = f.coeff();
  double sum = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const double ky = g.wavenumber(j);
      sum += kTwoPi * kTwoPi * (kx * kx + ky * ky) * std::norm(c[g.flat(i, j)]);
    }
  }
  return std::sqrt(sum);
}

double gradient_norm(const VectorField& v) { return std::hypot(gradient_norm(v.x), gradient_norm(v.y)); }

double inner(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid());
  auto a = f.coeff();
  auto b = g.coeff();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return sum;
}

double inner(const VectorField& v, const VectorField& w) { return inner(v.x, w.x) + inner(v.y, w.y); }

double lp_norm(const SpectralField& f, double p) {
  const auto samples = f.to_physical();
  double sum = 0.0;
  for (double s : samples) sum += std::pow(std::abs(s), p);
  return std::pow(sum * f.grid().cell_measure(), 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
  const auto sx = v.x.to_physical();
  const auto sy = v.y.to_physical();
  double sum = 0.0;
  for (std::size_t i = 0; i < sx.size(); ++i) sum += std::pow(std::hypot(sx[i], sy[i]), p);
  return std::pow(sum * v.grid().cell_measure(), 1.0 / p);
}

double l4_norm_exact(const SpectralField& f) {
  const int m = 2 * f.n();
  const auto s = to_physical_padded(f, m);
  double sum = 0.0;
  for (double x : s) sum += x * x * x * x;
  return std::pow(sum / (double(m) * m), 0.25);
}

double l4_norm_exact(const VectorField& v) {
  const int m = 2 * v.n();
  const auto sx = to_physical_padded(v.x, m);
  const auto sy = to_physical_padded(v.y, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < sx.size(); ++i) {
    const double mag2 = sx[i] * sx[i] + sy[i] * sy[i];
    sum += mag2 * mag2;
  }
  return std::pow(sum / (double(m) * m), 0.25);
}

double max_magnitude(const VectorField& v) {
  const auto sx = v.x.to_physical();
  const auto sy = v.y.to_physical();
  double m = 0.0;
  for (std::size_t i = 0; i < sx.size(); ++i) m = std::max(m, std::hypot(sx[i], sy[i]));
  return m;
}

std::vector<double> to_physical_padded(const SpectralField& f, int m) {
  const TorusGrid& g = f.grid();
  if (m < g.n()) throw std::invalid_argument("padded size smaller than the field grid");
  std::vector<Complex> buf(static_cast<std::size_t>(m) * m);
  auto src = f.coeff();
  auto wrap = [m](int k) { return k >= 0 ? k : k + m; };
  for (int i = 0; i < g.n(); ++i) {
    if (g.is_nyquist(i)) continue;
    const int pi = wrap(g.wavenumber(i));
    for (int j = 0; j < g.n(); ++j) {
      if (g.is_nyquist(j)) continue;
      buf[static_cast<std::size_t>(pi) * m + wrap(g.wavenumber(j))] = src[g.flat(i, j)];
    }
  }
  fft::transform_2d(buf, m, fft::Direction::backward);
  std::vector<double> out(buf.size());
  std::transform(buf.begin(), buf.end(), out.begin(), [](Complex c) { return c.real(); });
  return out;
}

SpectralField from_physical_padded(TorusGrid target, std::span<const double> samples, int m) {
  if (samples.size() != static_cast<std::size_t>(m) * m) {
    throw std::invalid_argument("padded sample count does not match m*m");
  }
  if (m < target.n()) throw std::invalid_argument("padded size smaller than the target grid");
  std::vector<Complex> buf(samples.begin(), samples.end());
  fft::transform_2d(buf, m, fft::Direction::forward);
  const double scale = 1.0 / (double(m) * m);
  SpectralField out(target);
  auto dst = out.coeff();
  auto wrap = [m](int k) { return k >= 0 ? k : k + m; };
  for (int i = 0; i < target.n(); ++i) {
    if (target.is_nyquist(i)) continue;
    const int pi = wrap(target.wavenumber(i));
    for (int j = 0; j < target.n(); ++j) {
      if (target.is_nyquist(j)) continue;
      dst[target.flat(i, j)] = scale * buf[static_cast<std::size_t>(pi) * m + wrap(target.wavenumber(j))];
    }
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> to_physical_padded_pair(const SpectralField& f,
                                                                            const SpectralField& g, int m) {
  require_same_grid(f.grid(), g.grid());
  const TorusGrid& grid = f.grid();
  if (m < grid.n()) throw std::invalid_argument("padded size smaller than the field grid");
  std::vector<Complex> buf(static_cast<std::size_t>(m) * m);
  auto fs = f.coeff();
  auto gs = g.coeff();
  const Complex i_unit(0.0, 1.0);
  auto wrap = [m](int k) { return k >= 0 ? k : k + m; };
  for (int i = 0; i < grid.n(); ++i) {
    if (grid.is_nyquist(i)) continue;
    const int pi = wrap(grid.wavenumber(i));
    for (int j = 0; j < grid.n(); ++j) {
      if (grid.is_nyquist(j)) continue;
      const std::size_t src = grid.flat(i, j);
      buf[static_cast<std::size_t>(pi) * m + wrap(grid.wavenumber(j))] = fs[src] + i_unit * gs[src];
    }
  }
  fft::transform_2d(buf, m, fft::Direction::backward);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.resize(buf.size());
  out.second.resize(buf.size());
  for (std::size_t q = 0; q < buf.size(); ++q) {
    out.first[q] = buf[q].real();
    out.second[q] = buf[q].imag();
  }
  return out;
}

std::pair<SpectralField, SpectralField> from_physical_padded_pair(TorusGrid target, std::span<const double> f,
                                                                  std::span<const double> g, int m) {
  const std::size_t count = static_cast<std::size_t>(m) * m;
  if (f.size() != count || g.size() != count) {
    throw std::invalid_argument("padded sample count does not match m*m");
  }
  if (m < target.n()) throw std::invalid_argument("padded size smaller than the target grid");
  std::vector<Complex> buf(count);
  for (std::size_t q = 0; q < count; ++q) buf[q] = Complex(f[q], g[q]);
  fft::transform_2d(buf, m, fft::Direction::forward);
  const double scale = 1.0 / (double(m) * m);
  std::pair<SpectralField, SpectralField> out{SpectralField(target), SpectralField(target)};
  auto fd = out.first.coeff();
  auto gd = out.second.coeff();
  auto wrap = [m](int k) { return ((k % m) + m) % m; };
  const Complex half_i(0.0, -0.5);
  for (int i = 0; i < target.n(); ++i) {
    if (target.is_nyquist(i)) continue;
    const int kx = target.wavenumber(i);
    for (int j = 0; j < target.n(); ++j) {
      if (target.is_nyquist(j)) continue;
      const int ky = target.wavenumber(j);
      const Complex h = buf[static_cast<std::size_t>(wrap(kx)) * m + wrap(ky)];
      const Complex hc = std::conj(buf[static_cast<std::size_t>(wrap(-kx)) * m + wrap(-ky)]);
      fd[target.flat(i, j)] = scale * 0.5 * (h + hc);
      gd[target.flat(i, j)] = scale * half_i * (h - hc);
    }
  }
  return out;
}

int dealiasing_size(int n) { return 3 * n / 2; }

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid());
  const int m = dealiasing_size(f.n());
  auto a = to_physical_padded(f, m);
  const auto b = to_physical_padded(g, m);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return from_physical_padded(f.grid(), a, m);
}

VectorField advective_term(const VectorField& a, const VectorField& b, AdvectionForm form) {
  require_same_grid(a.grid(), b.grid());
  const TorusGrid& grid = a.grid();
  const int m = dealiasing_size(grid.n());
  const auto ax = to_physical_padded(a.x, m);
  const auto ay = to_physical_padded(a.y, m);

  if (form == AdvectionForm::divergence) {
    if (!is_divergence_free(a)) {
      throw std::invalid_argument("divergence form of the advective term requires a divergence-free field");
    }
    const auto bx = to_physical_padded(b.x, m);
    const auto by = to_physical_padded(b.y, m);
    std::vector<double> axbx(ax.size()), aybx(ax.size()), axby(ax.size()), ayby(ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i) {
      axbx[i] = ax[i] * bx[i];
      aybx[i] = ay[i] * bx[i];
      axby[i] = ax[i] * by[i];
      ayby[i] = ay[i] * by[i];
    }
    // component j: d_x (a_x b_j) + d_y (a_y b_j)
    SpectralField cx = derivative(from_physical_padded(grid, axbx, m), 0) +
                       derivative(from_physical_padded(grid, aybx, m), 1);
    SpectralField cy = derivative(from_physical_padded(grid, axby, m), 0) +
                       derivative(from_physical_padded(grid, ayby, m), 1);
    return VectorField(std::move(cx), std::move(cy));
  }

  const auto dxbx = to_physical_padded(derivative(b.x, 0), m);
  const auto dybx = to_physical_padded(derivative(b.x, 1), m);
  const auto dxby = to_physical_padded(derivative(b.y, 0), m);
  const auto dyby = to_physical_padded(derivative(b.y, 1), m);
  std::vector<double> rx(ax.size()), ry(ax.size());
  for (std::size_t i = 0; i < ax.size(); ++i) {
    rx[i] = ax[i] * dxbx[i] + ay[i] * dybx[i];
    ry[i] = ax[i] * dxby[i] + ay[i] * dyby[i];
  }
  return VectorField(from_physical_padded(grid, rx, m), from_physical_padded(grid, ry, m));
}

}  // namespace mhdrelax
