#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhdrelax {

/// Uniform sampling of the unit periodic square [0,1)^2.
///
/// Samples sit at x_i = i/n. Coefficients are stored in FFT order: index i
/// holds wavenumber i for i < n/2 and i - n otherwise, so index n/2 is the
/// Nyquist wavenumber -n/2. The Nyquist row and column carry no partner of
/// opposite sign and are excluded from the retained (Galerkin) space.
class TorusGrid {
 public:
  explicit TorusGrid(int n) : n_(n) {
    if (n < 4 || n % 2 != 0) {
      throw std::invalid_argument("grid size must be even and >= 4, got " + std::to_string(n));
    }
  }

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double cell_measure() const { return 1.0 / (static_cast<double>(n_) * n_); }
  double spacing() const { return 1.0 / n_; }

  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  int index_of(int k) const { return k >= 0 ? k : k + n_; }
  bool is_nyquist(int i) const { return i == n_ / 2; }
  bool retained(int i, int j) const { return !is_nyquist(i) && !is_nyquist(j); }

  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  bool operator==(const TorusGrid&) const = default;

 private:
  int n_;
};

}  // namespace mhdrelax
