#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mhdrelax/field.hpp"
#include "mhdrelax/grid.hpp"

namespace testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Samples of g(x, y) at the grid points x = i/n, y = j/n.
template <class G>
std::vector<double> sample(int n, G g) {
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = g(double(i) / n, double(j) / n);
  return out;
}

template <class G>
mhdrelax::SpectralField field_of(int n, G g) {
  const auto s = sample(n, g);
  return mhdrelax::SpectralField::from_physical(mhdrelax::TorusGrid(n), s);
}

/// Random real field with all non-Nyquist modes populated (mt19937 samples
/// pushed through the forward transform and truncated).
inline mhdrelax::SpectralField random_retained(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (auto& v : s) v = dist(rng);
  auto f = mhdrelax::SpectralField::from_physical(mhdrelax::TorusGrid(n), s);
  const mhdrelax::TorusGrid g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!g.retained(i, j)) f.coeff()[g.flat(i, j)] = 0.0;
  return f;
}

inline std::vector<double> random_samples(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> s(count);
  for (auto& v : s) v = dist(rng);
  return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double coeff_distance(const mhdrelax::SpectralField& a, const mhdrelax::SpectralField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.coeff().size(); ++i) m = std::max(m, std::abs(a.coeff()[i] - b.coeff()[i]));
  return m;
}

inline double coeff_distance(const mhdrelax::VectorField& a, const mhdrelax::VectorField& b) {
  return std::max(coeff_distance(a.x, b.x), coeff_distance(a.y, b.y));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("MHDRELAX_TEST_TMP");
  std::filesystem::path dir = root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "mhdrelax-tests";
  dir /= name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
