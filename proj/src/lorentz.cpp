#include "mhdrelax/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mhdrelax/operators.hpp"

namespace mhdrelax::lorentz {
namespace {

std::vector<double> sorted_magnitudes_descending(std::span<const double> samples) {
  std::vector<double> v(samples.size());
  std::transform(samples.begin(), samples.end(), v.begin(), [](double x) { return std::abs(x); });
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

bool is_constant(const SpectralField& f) {
  const double scale = f.max_abs_coeff();
  if (scale == 0.0) return true;
  auto c = f.coeff();
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-14 * scale) return false;
  }
  return true;
}

InequalityRatioReport make_report(double lhs, double rhs, const char* what) {
  if (!(rhs > 0.0)) throw DegenerateInput(std::string(what) + ": right-hand side vanishes");
  return InequalityRatioReport{lhs, rhs, lhs / rhs, {}};
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Rearrangement::Rearrangement(std::span<const double> samples, double cell_measure)
    : sorted_(sorted_magnitudes_descending(samples)), prefix_(sorted_.size() + 1, 0.0), cell_measure_(cell_measure) {
  for (std::size_t j = 0; j < sorted_.size(); ++j) prefix_[j + 1] = prefix_[j] + sorted_[j];
}

Rearrangement::Rearrangement(const SpectralField& f) : Rearrangement(f.to_physical(), f.grid().cell_measure()) {}

double Rearrangement::value_at(double s) const {
  if (s < 0.0) throw std::invalid_argument("rearrangement argument must be nonnegative");
  const auto j = static_cast<std::size_t>(std::floor(s / cell_measure_));
  return j < sorted_.size() ? sorted_[j] : 0.0;
}

double Rearrangement::integral(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= total_measure()) return prefix_.back() * cell_measure_;
  const auto j = static_cast<std::size_t>(std::floor(t / cell_measure_));
  return prefix_[j] * cell_measure_ + (t - static_cast<double>(j) * cell_measure_) * sorted_[j];
}

DistributionFunction distribution_function(std::span<const double> samples, double cell_measure,
                                           std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("distribution_function: empty threshold list");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0 || (i > 0 && alphas[i] < alphas[i - 1])) {
      throw std::invalid_argument("distribution_function: thresholds must be nonnegative and ascending");
    }
  }
  std::vector<double> mags(samples.size());
  std::transform(samples.begin(), samples.end(), mags.begin(), [](double x) { return std::abs(x); });
  std::sort(mags.begin(), mags.end());
  DistributionFunction d;
  d.thresholds.assign(alphas.begin(), alphas.end());
  d.measures.reserve(alphas.size());
  for (double a : alphas) {
    const auto above = std::distance(std::upper_bound(mags.begin(), mags.end(), a), mags.end());
    d.measures.push_back(static_cast<double>(above) * cell_measure);
  }
  return d;
}

DistributionFunction distribution_function(const SpectralField& f, std::span<const double> alphas) {
  const auto s = f.to_physical();
  return distribution_function(s, f.grid().cell_measure(), alphas);
}

QuasiNormReport weak_lp_quasinorm(std::span<const double> samples, double cell_measure, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("weak_lp_quasinorm requires p > 1");
  const auto v = sorted_magnitudes_descending(samples);
  QuasiNormReport report{p, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double measure = static_cast<double>(j + 1) * cell_measure;
    const double candidate = v[j] * std::pow(measure, 1.0 / p);
    if (candidate > report.value) {
      report.value = candidate;
      report.witness_alpha = v[j];
      report.witness_measure = measure;
    }
  }
  return report;
}

QuasiNormReport weak_lp_quasinorm(const SpectralField& f, double p) {
  const auto s = f.to_physical();
  return weak_lp_quasinorm(s, f.grid().cell_measure(), p);
}

std::vector<double> inverse_radius_samples(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("inverse_radius_samples requires an even n >= 2");
  // The farthest corner from c sets the infimum.
  auto far = [n](int i) { return std::max(std::abs(double(i) / n - 0.5), std::abs(double(i + 1) / n - 0.5)); };
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(i) * n + j] = 1.0 / std::hypot(far(i), far(j));
  return s;
}

double bmo_seminorm(std::span<const double> samples, int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("bmo_seminorm requires a power-of-two grid");
  if (samples.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("sample count mismatch");
  double best = 0.0;
  for (int side = n; side >= 2; side /= 2) {
    const double inv_count = 1.0 / (double(side) * side);
    for (int a = 0; a < n; a += side) {
      for (int b = 0; b < n; b += side) {
        double mean = 0.0;
        for (int i = a; i < a + side; ++i) {
          for (int j = b; j < b + side; ++j) mean += samples[static_cast<std::size_t>(i) * n + j];
        }
        mean *= inv_count;
        double osc = 0.0;
        for (int i = a; i < a + side; ++i) {
          for (int j = b; j < b + side; ++j) osc += std::abs(samples[static_cast<std::size_t>(i) * n + j] - mean);
        }
        best = std::max(best, osc * inv_count);
      }
    }
  }
  return best;
}

double bmo_seminorm(const SpectralField& f) {
  const auto s = f.to_physical();
  return bmo_seminorm(s, f.n());
}

KFunctionalValue k_functional(const Rearrangement& r, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("k_functional requires t > 0");
  const auto& v = r.sorted();
  const double h = r.cell_measure();
  // The objective sum (|f| - lambda)_+ h + t lambda is convex and piecewise
  // linear in lambda with slope t - d_f(lambda); its minimum sits at f*(t).
  const double lambda = t >= r.total_measure() ? 0.0 : r.value_at(t);
  const auto above = static_cast<std::size_t>(
      std::distance(v.begin(), std::upper_bound(v.begin(), v.end(), lambda, std::greater<>())));
  const double excess = r.partial_sum(above) - static_cast<double>(above) * lambda;
  return KFunctionalValue{excess * h + t * lambda, lambda};
}

double k_functional(const SpectralField& f, double t) { return k_functional(Rearrangement(f), t).value; }

double interpolation_quasinorm(const Rearrangement& r, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("interpolation_quasinorm requires 0 < theta < 1");
  if (r.sorted().empty() || r.sorted().front() == 0.0) return 0.0;
  auto sup_on_grid = [&](int per_decade) {
    const int count = 12 * per_decade;
    double best = 0.0;
    for (int i = 0; i <= count; ++i) {
      const double t = std::pow(10.0, -6.0 + 12.0 * double(i) / count);
      best = std::max(best, std::pow(t, -theta) * k_functional(r, t).value);
    }
    return best;
  };
  int per_decade = 10;
  double previous = sup_on_grid(per_decade);
  while (per_decade < 20480) {
    per_decade *= 2;
    const double current = sup_on_grid(per_decade);
    if (std::abs(current - previous) <= 0.01 * current) return current;
    previous = current;
  }
  return previous;
}

double interpolation_quasinorm(const SpectralField& f, double theta) {
  return interpolation_quasinorm(Rearrangement(f), theta);
}

InequalityRatioReport check_ladyzhenskaya(const SpectralField& f) {
  if (is_constant(f)) throw DegenerateInput("ladyzhenskaya: constant input");
  const double rhs = std::sqrt(sobolev_norm(f, SobolevIndex(0)) * sobolev_norm(f, SobolevIndex(1)));
  return make_report(lp_norm(f, 4.0), rhs, "ladyzhenskaya");
}

InequalityRatioReport check_weak_ladyzhenskaya(const SpectralField& f) {
  if (is_constant(f)) throw DegenerateInput("weak ladyzhenskaya: constant input");
  const double rhs = std::sqrt(weak_lp_quasinorm(f, 2.0).value * gradient_norm(f));
  return make_report(lp_norm(f, 4.0), rhs, "weak ladyzhenskaya");
}

InequalityRatioReport check_bernstein(const SpectralField& f, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("bernstein: kappa must be positive");
  const TorusGrid& g = f.grid();
  const double tol = 1e-12 * f.max_abs_coeff();
  auto c = f.coeff();
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double k = std::hypot(double(g.wavenumber(i)), double(g.wavenumber(j)));
      if (k > kappa && std::abs(c[g.flat(i, j)]) > tol) {
        throw std::invalid_argument("bernstein: field is not band-limited to |k| <= " + std::to_string(kappa));
      }
    }
  }
  if (f.is_zero()) throw DegenerateInput("bernstein: zero input");
  return make_report(lp_norm(f, 4.0), std::sqrt(kappa) * weak_lp_quasinorm(f, 2.0).value, "bernstein");
}

BmoInterpolationReport check_bmo_interpolation(const SpectralField& f, double q, double p) {
  if (!(1.0 < q && q < p)) throw std::invalid_argument("bmo interpolation requires 1 < q < p");
  const double bmo = bmo_seminorm(f);
  if (!(bmo > 0.0)) throw DegenerateInput("bmo interpolation: BMO seminorm vanishes");
  const double rhs = std::pow(weak_lp_quasinorm(f, q).value, q / p) * std::pow(bmo, 1.0 - q / p);
  return BmoInterpolationReport{make_report(lp_norm(f, p), rhs, "bmo interpolation"),
                                make_report(weak_lp_quasinorm(f, p).value, rhs, "weak bmo interpolation")};
}

double weak_strong_exponent(double q, double p, double r) {
  if (!(1.0 < q && q < p && p < r)) throw std::invalid_argument("weak-strong interpolation requires 1 < q < p < r");
  return (1.0 / p - 1.0 / q) / (1.0 / r - 1.0 / q);
}

InequalityRatioReport check_weak_strong_interpolation(const SpectralField& f, double q, double p, double r) {
  const double alpha = weak_strong_exponent(q, p, r);
  const double lhs = lp_norm(f, p);
  const double rhs = std::pow(weak_lp_quasinorm(f, q).value, 1.0 - alpha) * std::pow(weak_lp_quasinorm(f, r).value, alpha);
  if (lhs == 0.0 && rhs == 0.0) return InequalityRatioReport{0.0, 0.0, 0.0, {}};
  return make_report(lhs, rhs, "weak-strong interpolation");
}

SpectralField band_limit(const SpectralField& f, double kappa) {
  const TorusGrid& g = f.grid();
  SpectralField out = f;
  auto c = out.coeff();
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      if (std::hypot(double(g.wavenumber(i)), double(g.wavenumber(j))) > kappa) c[g.flat(i, j)] = 0.0;
    }
  }
  return out;
}

}  // namespace mhdrelax::lorentz
