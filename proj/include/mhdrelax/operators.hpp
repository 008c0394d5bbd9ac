#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mhdrelax/field.hpp"

namespace mhdrelax {

/// Relative tolerance of the divergence-free check.
inline constexpr double kDivergenceTolerance = 1e-10;

/// Order of a Sobolev norm; -1 selects the dual norm H^{-1}.
class SobolevIndex {
 public:
  explicit SobolevIndex(int s) : s_(s) {
    if (s < -1) throw std::invalid_argument("Sobolev index must be >= -1, got " + std::to_string(s));
  }
  int value() const { return s_; }

 private:
  int s_;
};

// Spectral operators. Outputs always live in the retained space: Nyquist
// row and column are zeroed.

SpectralField truncate(const SpectralField& f);
VectorField truncate(const VectorField& v);

SpectralField derivative(const SpectralField& f, int axis);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
SpectralField laplacian(const SpectralField& f);
/// Zero-mean solution of Delta g = f (the mean of f is ignored).
SpectralField inverse_laplacian(const SpectralField& f);
/// (-d_y f, d_x f).
VectorField perp_gradient(const SpectralField& f);
/// d_x v_y - d_y v_x.
SpectralField curl(const VectorField& v);

/// Mode-wise (I - k k^T/|k|^2); the mean mode passes through unchanged.
VectorField leray_project(const VectorField& v);

/// max_k |k . v(k)| / max_k |v(k)|, zero for the zero field.
double divergence_defect(const VectorField& v);
bool is_divergence_free(const VectorField& v, double rel_tol = kDivergenceTolerance);

double sobolev_norm(const SpectralField& f, SobolevIndex s);
double sobolev_norm(const VectorField& v, SobolevIndex s);
/// Homogeneous ||grad f||_{L^2}.
double gradient_norm(const SpectralField& f);
double gradient_norm(const VectorField& v);

/// L^2 inner products through Parseval.
double inner(const SpectralField& f, const SpectralField& g);
double inner(const VectorField& v, const VectorField& w);

/// Grid quadrature of (mean |f|^p)^{1/p}; vectors use the Euclidean magnitude.
double lp_norm(const SpectralField& f, double p);
double lp_norm(const VectorField& v, double p);
/// ||v||_{L^4} by quadrature on a 2n grid, exact for retained-space fields.
double l4_norm_exact(const SpectralField& f);
double l4_norm_exact(const VectorField& v);
double max_magnitude(const VectorField& v);

/// Samples of the retained modes of f on an m x m grid (m >= n).
std::vector<double> to_physical_padded(const SpectralField& f, int m);
/// Retained coefficients of m x m samples, truncated to the target grid.
SpectralField from_physical_padded(TorusGrid target, std::span<const double> samples, int m);
/// Padded size for exact quadratic products (3/2 rule).
/// Two real fields through one complex transform (f + i g).
std::pair<std::vector<double>, std::vector<double>> to_physical_padded_pair(const SpectralField& f,
                                                                            const SpectralField& g, int m);
std::pair<SpectralField, SpectralField> from_physical_padded_pair(TorusGrid target, std::span<const double> f,
                                                                  std::span<const double> g, int m);
int dealiasing_size(int n);

/// Retained coefficients of f*g, exact (3/2-rule padding).
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

enum class AdvectionForm { convective, divergence };

/// (a.grad) b, or div(a (x) b) in divergence form. The divergence form
/// requires a to be divergence-free so the two agree.
VectorField advective_term(const VectorField& a, const VectorField& b,
                           AdvectionForm form = AdvectionForm::convective);

}  // namespace mhdrelax
