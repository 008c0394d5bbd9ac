#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mhdrelax/grid.hpp"

namespace mhdrelax {

using Complex = std::complex<double>;

/// Real scalar field on the unit torus held as true Fourier-series
/// coefficients: f(x) = sum_k coeff(k) e^{2 pi i k.x}. With this
/// normalization sum |coeff|^2 equals the mean square of the samples.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, std::vector<Complex> coeff);

  static SpectralField from_physical(TorusGrid grid, std::span<const double> samples);
  std::vector<double> to_physical() const;

  const TorusGrid& grid() const { return grid_; }
  int n() const { return grid_.n(); }
  std::span<const Complex> coeff() const { return coeff_; }
  std::span<Complex> coeff() { return coeff_; }

  /// Access by signed wavenumber pair.
  Complex at(int kx, int ky) const { return coeff_[grid_.flat(grid_.index_of(kx), grid_.index_of(ky))]; }
  Complex& at(int kx, int ky) { return coeff_[grid_.flat(grid_.index_of(kx), grid_.index_of(ky))]; }

  double mean() const { return coeff_[0].real(); }
  double max_abs_coeff() const;
  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  TorusGrid grid_;
  std::vector<Complex> coeff_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Planar vector field. divergence_free records that the field came out of a
/// projection; operators::is_divergence_free checks it numerically.
struct VectorField {
  SpectralField x;
  SpectralField y;
  bool divergence_free = false;

  explicit VectorField(TorusGrid grid) : x(grid), y(grid) {}
  VectorField(SpectralField x_comp, SpectralField y_comp, bool div_free = false);

  const TorusGrid& grid() const { return x.grid(); }
  int n() const { return x.n(); }
  double max_abs_coeff() const;
  bool is_zero_field() const { return x.is_zero() && y.is_zero(); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

}  // namespace mhdrelax
