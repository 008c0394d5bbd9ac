#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdrelax/field.hpp"

namespace mhdrelax::lorentz {

/// Raised when an inequality check has a vanishing right-hand side.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DistributionFunction {
  std::vector<double> thresholds;
  std::vector<double> measures;  // mu{|f| > alpha}, multiples of the cell measure
};

/// Weak-L^p quasinorm with the evidence behind it. The supremum of
/// alpha d_f(alpha)^{1/p} is approached as alpha rises to witness_alpha, where
/// the distribution function has the left limit witness_measure.
struct QuasiNormReport {
  double p = 0.0;
  double value = 0.0;
  double witness_alpha = 0.0;
  double witness_measure = 0.0;
};

struct InequalityRatioReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string corpus_id;
};

/// Decreasing rearrangement f* of the sample magnitudes.
class Rearrangement {
 public:
  Rearrangement(std::span<const double> samples, double cell_measure);
  explicit Rearrangement(const SpectralField& f);

  /// f*(s) for s >= 0 (zero beyond the total measure).
  double value_at(double s) const;
  /// Integral of f* over [0, t]; equals ||f||_{L^1} for t >= total measure.
  double integral(double t) const;
  double total_measure() const { return cell_measure_ * static_cast<double>(sorted_.size()); }
  double cell_measure() const { return cell_measure_; }
  const std::vector<double>& sorted() const { return sorted_; }
  /// Sum of the j largest magnitudes.
  double partial_sum(std::size_t j) const { return prefix_[j]; }

 private:
  std::vector<double> sorted_;  // descending
  std::vector<double> prefix_;  // prefix_[j] = sum of the first j values
  double cell_measure_;
};

DistributionFunction distribution_function(std::span<const double> samples, double cell_measure,
                                           std::span<const double> alphas);
DistributionFunction distribution_function(const SpectralField& f, std::span<const double> alphas);

QuasiNormReport weak_lp_quasinorm(std::span<const double> samples, double cell_measure, double p);
QuasiNormReport weak_lp_quasinorm(const SpectralField& f, double p);

/// |x - c|^{-1} on the unit torus (c the centre), each cell holding its
/// infimum over the cell. Row-major, n even.
std::vector<double> inverse_radius_samples(int n);

/// Largest mean oscillation over the origin-anchored dyadic squares, from the
/// whole torus down to 2x2 cells. n must be a power of two.
double bmo_seminorm(std::span<const double> samples, int n);
double bmo_seminorm(const SpectralField& f);

struct KFunctionalValue {
  double value = 0.0;
  double truncation_level = 0.0;  // the split f1 = clamp(f, -level, level)
};

/// K(f, t) for the couple (L^1, L^inf).
KFunctionalValue k_functional(const Rearrangement& r, double t);
double k_functional(const SpectralField& f, double t);

/// sup_t t^{-theta} K(f, t) over a log grid on [1e-6, 1e6], refined until the
/// supremum moves by less than 1%.
double interpolation_quasinorm(const Rearrangement& r, double theta);
double interpolation_quasinorm(const SpectralField& f, double theta);

InequalityRatioReport check_ladyzhenskaya(const SpectralField& f);
InequalityRatioReport check_weak_ladyzhenskaya(const SpectralField& f);
/// f must satisfy coeff(k) = 0 for |k| > kappa.
InequalityRatioReport check_bernstein(const SpectralField& f, double kappa);

struct BmoInterpolationReport {
  InequalityRatioReport strong;  // ||f||_{L^p} on the left
  InequalityRatioReport weak;    // ||f||_{L^{p,inf}} on the left
};
BmoInterpolationReport check_bmo_interpolation(const SpectralField& f, double q, double p);

/// alpha with (1 - alpha)/q + alpha/r = 1/p.
double weak_strong_exponent(double q, double p, double r);
InequalityRatioReport check_weak_strong_interpolation(const SpectralField& f, double q, double p, double r);

/// Zeroes every coefficient with |k| > kappa.
SpectralField band_limit(const SpectralField& f, double kappa);

}  // namespace mhdrelax::lorentz
