#include "mhdrelax/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mhdrelax/fft.hpp"

namespace mhdrelax {

SpectralField::SpectralField(TorusGrid grid) : grid_(grid), coeff_(grid.size()) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<Complex> coeff)
    : grid_(grid), coeff_(std::move(coeff)) {
  if (coeff_.size() != grid_.size()) {
    throw std::invalid_argument("coefficient count " + std::to_string(coeff_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
}

SpectralField SpectralField::from_physical(TorusGrid grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("sample count " + std::to_string(samples.size()) +
                                " does not match grid size " + std::to_string(grid.size()));
  }
  std::vector<Complex> data(samples.begin(), samples.end());
  fft::transform_2d(data, grid.n(), fft::Direction::forward);
  const double scale = grid.cell_measure();
  for (auto& c : data) c *= scale;
  return SpectralField(grid, std::move(data));
}

std::vector<double> SpectralField::to_physical() const {
  std::vector<Complex> data = coeff_;
  fft::transform_2d(data, grid_.n(), fft::Direction::backward);
  std::vector<double> out(data.size());
  std::transform(data.begin(), data.end(), out.begin(), [](Complex c) { return c.real(); });
  return out;
}

double SpectralField::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeff_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::is_zero() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](Complex c) { return c == Complex{}; });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeff_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

VectorField::VectorField(SpectralField x_comp, SpectralField y_comp, bool div_free)
    : x(std::move(x_comp)), y(std::move(y_comp)), divergence_free(div_free) {
  if (!(x.grid() == y.grid())) throw std::invalid_argument("vector components on different grids");
}

double VectorField::max_abs_coeff() const { return std::max(x.max_abs_coeff(), y.max_abs_coeff()); }

VectorField& VectorField::operator+=(const VectorField& other) {
  x += other.x;
  y += other.y;
  divergence_free = divergence_free && other.divergence_free;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  x -= other.x;
  y -= other.y;
  divergence_free = divergence_free && other.divergence_free;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

}  // namespace mhdrelax
