#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mhdrelax/corpus.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "support.hpp"

using namespace mhdrelax;
using namespace mhdrelax::lorentz;
using testing::kTwoPi;

namespace {

SpectralField constant_field(int n, double c) {
  SpectralField f{TorusGrid(n)};
  f.at(0, 0) = c;
  return f;
}

// |x - c|^{-1} at cell centres; c is a cell corner, so no sample is singular.
std::vector<double> point_inverse_radius(int n) {
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = (i + 0.5) / n - 0.5, y = (j + 0.5) / n - 0.5;
      s[static_cast<std::size_t>(i) * n + j] = 1.0 / std::hypot(x, y);
    }
  return s;
}

// Every dyadic square enumerated from its lower-left corner, mean and
// oscillation from a fresh copy of its samples.
double bmo_oracle(const std::vector<double>& s, int n) {
  double best = 0;
  for (int side = 2; side <= n; side *= 2) {
    for (int a = 0; a < n; a += side)
      for (int b = 0; b < n; b += side) {
        std::vector<double> cell;
        for (int i = 0; i < side; ++i)
          for (int j = 0; j < side; ++j) cell.push_back(s[static_cast<std::size_t>(a + i) * n + (b + j)]);
        double mean = 0;
        for (double v : cell) mean += v;
        mean /= static_cast<double>(cell.size());
        double osc = 0;
        for (double v : cell) osc += std::abs(v - mean);
        best = std::max(best, osc / static_cast<double>(cell.size()));
      }
  }
  return best;
}

// min over lambda in a grid of sum (|f| - lambda)_+ h + t lambda.
double k_grid_search(const std::vector<double>& samples, double h, double t) {
  std::vector<double> lambdas;
  for (double v : samples) lambdas.push_back(std::abs(v));
  const double top = *std::max_element(lambdas.begin(), lambdas.end());
  while (lambdas.size() < 10000) lambdas.push_back(top * static_cast<double>(lambdas.size() % 997) / 997.0);
  double best = std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    double excess = 0;
    for (double v : samples) excess += std::max(0.0, std::abs(v) - lam);
    best = std::min(best, excess * h + t * lam);
  }
  return best;
}

}  // namespace

TEST_SUITE("distribution function") {
  TEST_CASE("constant field") {
    const auto f = constant_field(16, 2.0);
    const std::vector<double> alphas{0.0, 1.9, 2.0, 3.0};
    const auto d = distribution_function(f, alphas);
    CHECK(d.measures[0] == doctest::Approx(1.0));
    CHECK(d.measures[1] == doctest::Approx(1.0));
    CHECK(d.measures[2] == 0.0);
    CHECK(d.measures[3] == 0.0);
  }

  TEST_CASE("indicator of half the cells") {
    std::vector<double> s(256, 0.0);
    std::fill(s.begin(), s.begin() + 128, 1.0);
    const std::vector<double> alphas{0.5};
    CHECK(distribution_function(s, 1.0 / 256, alphas).measures[0] == doctest::Approx(0.5));
  }

  TEST_CASE("inverse radius level set approaches the disc area") {
    const std::vector<double> alphas{4.0};
    double prev_err = 1.0;
    for (int n : {64, 128, 256, 512}) {
      const auto s = point_inverse_radius(n);
      const double m = distribution_function(s, 1.0 / (double(n) * n), alphas).measures[0];
      const double err = std::abs(m - std::numbers::pi / 16.0);
      CHECK(err <= prev_err * 1.01);
      prev_err = err;
    }
    CHECK(prev_err < 1e-3);
  }

  TEST_CASE("measures are non-increasing and bounded by the torus") {
    const auto f = testing::random_retained(32, 5);
    std::vector<double> alphas;
    for (int i = 0; i <= 100; ++i) alphas.push_back(0.05 * i);
    const auto d = distribution_function(f, alphas);
    CHECK(d.measures.front() <= 1.0);
    for (std::size_t i = 1; i < d.measures.size(); ++i) CHECK(d.measures[i] <= d.measures[i - 1]);
  }

  TEST_CASE("threshold list validation") {
    const auto f = testing::random_retained(8, 1);
    CHECK_THROWS_AS(distribution_function(f, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(distribution_function(f, std::vector<double>{1.0, 0.5}), std::invalid_argument);
  }
}

TEST_SUITE("weak Lp quasinorm") {
  TEST_CASE("constant and indicator") {
    CHECK(weak_lp_quasinorm(constant_field(16, 3.0), 2.0).value == doctest::Approx(3.0).epsilon(1e-14));
    std::vector<double> s(1024, 0.0);
    std::fill(s.begin(), s.begin() + 256, 1.0);
    CHECK(weak_lp_quasinorm(s, 1.0 / 1024, 2.0).value == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("p must exceed one") {
    CHECK_THROWS_AS(weak_lp_quasinorm(constant_field(8, 1.0), 1.0), std::invalid_argument);
  }

  TEST_CASE("sup form equals the inf form on a dense threshold grid") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const auto f = testing::random_retained(32, seed);
      for (double p : {1.5, 2.0, 4.0}) {
        const auto q = weak_lp_quasinorm(f, p);
        CHECK(q.value == doctest::Approx(q.witness_alpha * std::pow(q.witness_measure, 1.0 / p)).epsilon(1e-12));
        const auto s = f.to_physical();
        const double top = testing::max_abs(s);
        std::vector<double> alphas;
        for (int i = 1; i <= 2000; ++i) alphas.push_back(top * i / 2000.0);
        const auto d = distribution_function(s, f.grid().cell_measure(), alphas);
        double sup = 0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
          CHECK(d.measures[i] <= std::pow(q.value, p) / std::pow(alphas[i], p) * (1 + 1e-12));
          sup = std::max(sup, alphas[i] * std::pow(d.measures[i], 1.0 / p));
        }
        CHECK(sup <= q.value * (1 + 1e-12));
        CHECK(sup >= q.value * 0.98);
      }
    }
  }

  TEST_CASE("Chebyshev bound") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto f = corpus::member(TorusGrid(32), seed).x;
      for (double p : {1.5, 2.0, 3.0, 4.0}) CHECK(weak_lp_quasinorm(f, p).value <= lp_norm(f, p) * (1 + 1e-12));
    }
  }

  TEST_CASE("inverse radius approaches sqrt(pi) from the cell-infimum discretization") {
    // Cell infimum of |x - c|^{-1} is the reciprocal distance to the farthest corner.
    auto value = [](int n) {
      std::vector<double> s(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double x0 = double(i) / n - 0.5, x1 = double(i + 1) / n - 0.5;
          const double y0 = double(j) / n - 0.5, y1 = double(j + 1) / n - 0.5;
          const double dx = std::max(std::abs(x0), std::abs(x1)), dy = std::max(std::abs(y0), std::abs(y1));
          s[static_cast<std::size_t>(i) * n + j] = 1.0 / std::hypot(dx, dy);
        }
      return weak_lp_quasinorm(s, 1.0 / (double(n) * n), 2.0).value;
    };
    const double a = value(32), b = value(64), c = value(128);
    CHECK(weak_lp_quasinorm(lorentz::inverse_radius_samples(128), 1.0 / (128.0 * 128), 2.0).value == c);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c < std::sqrt(std::numbers::pi));
  }
}

TEST_SUITE("bmo") {
  TEST_CASE("constant field has zero oscillation") { CHECK(bmo_seminorm(constant_field(16, 4.0)) == 0.0); }

  TEST_CASE("power-of-two grid required") {
    std::vector<double> s(36, 1.0);
    CHECK_THROWS_AS(bmo_seminorm(s, 6), std::invalid_argument);
    CHECK_THROWS_AS(bmo_seminorm(std::vector<double>(10), 4), std::invalid_argument);
  }

  TEST_CASE("cosine matches exhaustive enumeration") {
    const auto f = testing::field_of(64, [](double x, double) { return std::cos(kTwoPi * x); });
    const double v = bmo_seminorm(f);
    CHECK(v == doctest::Approx(bmo_oracle(f.to_physical(), 64)).epsilon(1e-13));
    // Continuum value over the whole torus and its halves: mean |cos| = 2/pi.
    CHECK(v == doctest::Approx(2.0 / std::numbers::pi).epsilon(2e-3));
  }

  TEST_CASE("random fields match exhaustive enumeration") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      const auto s = testing::random_samples(32 * 32, seed);
      CHECK(bmo_seminorm(s, 32) == doctest::Approx(bmo_oracle(s, 32)).epsilon(1e-13));
    }
  }

  TEST_CASE("mean shift invariance") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      auto f = testing::random_retained(32, seed);
      const double base = bmo_seminorm(f);
      f.at(0, 0) += 3.25;
      CHECK(bmo_seminorm(f) == doctest::Approx(base).epsilon(1e-13));
    }
  }
}

TEST_SUITE("K-functional") {
  TEST_CASE("constant field") {
    const auto f = constant_field(16, 2.0);
    for (double t : {0.1, 0.5, 1.0, 3.0}) CHECK(k_functional(f, t) == doctest::Approx(2.0 * std::min(1.0, t)));
  }

  TEST_CASE("bounded by the L1 norm") {
    const auto f = testing::random_retained(32, 2);
    const double l1 = lp_norm(f, 1.0);
    for (double t : {1e-3, 0.1, 1.0, 10.0, 1e3}) CHECK(k_functional(f, t) <= l1 * (1 + 1e-12));
  }

  TEST_CASE("grid-search oracle and rearrangement integral") {
    for (unsigned seed = 0; seed < 3; ++seed) {
      const auto f = testing::random_retained(32, seed);
      const auto s = f.to_physical();
      const Rearrangement r(f);
      for (double t : {0.05, 0.3, 0.7}) {
        const double k = k_functional(r, t).value;
        CHECK(std::abs(k - k_grid_search(s, f.grid().cell_measure(), t)) < 1e-8);
        CHECK(std::abs(k - r.integral(t)) < 1e-8);
      }
    }
  }

  TEST_CASE("concave, non-decreasing, K/t non-increasing") {
    const auto f = testing::random_retained(32, 6);
    const Rearrangement r(f);
    std::vector<double> ts, ks;
    for (int i = 0; i <= 200; ++i) {
      ts.push_back(std::pow(10.0, -4.0 + 5.0 * i / 200.0));
      ks.push_back(k_functional(r, ts.back()).value);
    }
    for (std::size_t i = 1; i < ts.size(); ++i) {
      CHECK(ks[i] >= ks[i - 1] * (1 - 1e-12));
      CHECK(ks[i] / ts[i] <= ks[i - 1] / ts[i - 1] * (1 + 1e-12));
    }
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
      const double w = (ts[i] - ts[i - 1]) / (ts[i + 1] - ts[i - 1]);
      CHECK(ks[i] >= (1 - w) * ks[i - 1] + w * ks[i + 1] - 1e-12 * ks[i]);
    }
  }

  TEST_CASE("t must be positive") { CHECK_THROWS_AS(k_functional(constant_field(8, 1.0), 0.0), std::invalid_argument); }
}

TEST_SUITE("interpolation quasinorm") {
  TEST_CASE("zero field") { CHECK(interpolation_quasinorm(SpectralField(TorusGrid(16)), 0.5) == 0.0); }

  TEST_CASE("theta range") {
    CHECK_THROWS_AS(interpolation_quasinorm(constant_field(8, 1.0), 1.0), std::invalid_argument);
  }

  TEST_CASE("single mode is finite, positive and reproducible") {
    const auto f = testing::field_of(32, [](double x, double) { return std::cos(kTwoPi * x); });
    const double a = interpolation_quasinorm(f, 0.5);
    CHECK(a > 0);
    CHECK(std::isfinite(a));
    CHECK(a == interpolation_quasinorm(f, 0.5));
  }

  TEST_CASE("equivalent to the weak Lp quasinorm with constants 1 and p'") {
    // t^{1/p} f*(t) <= t^{-theta} int_0^t f* and int_0^t f* <= p' t^{theta} ||f||_{p,inf}.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto f = corpus::member(TorusGrid(32), seed).x;
      for (double p : {2.0, 4.0}) {
        const double ratio = interpolation_quasinorm(f, 1.0 - 1.0 / p) / weak_lp_quasinorm(f, p).value;
        CHECK(ratio >= 0.99);
        CHECK(ratio <= p / (p - 1.0) * 1.01);
      }
    }
  }
}

TEST_SUITE("inequality checks") {
  TEST_CASE("Ladyzhenskaya closed form for sin sin") {
    const auto f = testing::field_of(32, [](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); });
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double l4 = std::pow(9.0 / 64.0, 0.25);
    const double l2 = 0.5;
    const double h1 = std::sqrt((1.0 + 8.0 * pi2) / 4.0);
    const auto r = check_ladyzhenskaya(f);
    CHECK(r.lhs == doctest::Approx(l4).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(std::sqrt(l2 * h1)).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(l4 / std::sqrt(l2 * h1)).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(0.41).epsilon(0.01));
  }

  TEST_CASE("degenerate inputs") {
    const SpectralField zero{TorusGrid(16)};
    CHECK_THROWS_AS(check_ladyzhenskaya(zero), DegenerateInput);
    CHECK_THROWS_AS(check_weak_ladyzhenskaya(zero), DegenerateInput);
    CHECK_THROWS_AS(check_bmo_interpolation(constant_field(16, 1.0), 2, 4), DegenerateInput);
    CHECK_THROWS_AS(check_ladyzhenskaya(constant_field(16, 1.0)), DegenerateInput);
  }

  TEST_CASE("weak variant strengthens the classical one") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto f = corpus::member(TorusGrid(32), seed).x;
      CHECK(check_weak_ladyzhenskaya(f).ratio >= check_ladyzhenskaya(f).ratio);
    }
  }

  TEST_CASE("Bernstein band limit") {
    const auto f = testing::field_of(16, [](double x, double) { return std::cos(kTwoPi * x); });
    const auto r = check_bernstein(f, 1.0);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0);
    const auto g = testing::random_retained(16, 1);
    CHECK_THROWS_AS(check_bernstein(g, 2.0), std::invalid_argument);
    CHECK_NOTHROW(check_bernstein(band_limit(g, 2.0), 2.0));
  }

  TEST_CASE("Bernstein ratio bounded uniformly in kappa") {
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = corpus::member(TorusGrid(64), seed).x;
      for (double kappa : {2.0, 4.0, 8.0, 16.0}) worst = std::max(worst, check_bernstein(band_limit(f, kappa), kappa).ratio);
    }
    CHECK(worst < 3.0);
  }

  TEST_CASE("BMO interpolation: weak ratio below strong ratio") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto r = check_bmo_interpolation(corpus::member(TorusGrid(32), seed).x, 2.0, 4.0);
      CHECK(r.weak.ratio <= r.strong.ratio * (1 + 1e-12));
      CHECK(std::isfinite(r.strong.ratio));
    }
    CHECK_THROWS_AS(check_bmo_interpolation(testing::random_retained(16, 1), 4.0, 2.0), std::invalid_argument);
  }

  TEST_CASE("weak-strong exponent and zero field") {
    CHECK(weak_strong_exponent(2, 3, 4) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(weak_strong_exponent(3, 2, 4), std::invalid_argument);
    const auto r = check_weak_strong_interpolation(SpectralField(TorusGrid(16)), 2, 3, 4);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
    const auto s = check_weak_strong_interpolation(testing::random_retained(16, 3), 2, 3, 4);
    CHECK(std::isfinite(s.ratio));
  }
}
