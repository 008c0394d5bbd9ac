#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mhdrelax/corpus.hpp"
#include "mhdrelax/dynamics.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/stokes.hpp"
#include "support.hpp"

using namespace mhdrelax;
using namespace mhdrelax::dynamics;

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

VectorField single_mode(int n, int kx, int ky) {
  SpectralField psi{TorusGrid(n)};
  psi.at(kx, ky) = Complex(0.2, 0.1);
  psi.at(-kx, -ky) = Complex(0.2, -0.1);
  return perp_gradient(psi);
}

GalerkinConfig quick_config(int n, double eta, double dt, double t_end) {
  GalerkinConfig c;
  c.n = n;
  c.nu = 1.0;
  c.eta = eta;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

double energy(const VectorField& B) { return 0.5 * std::pow(sobolev_norm(B, SobolevIndex(0)), 2); }

}  // namespace

TEST_SUITE("rhs") {
  TEST_CASE("zero field") { CHECK(rhs(VectorField(TorusGrid(16)), 1.0, 0.1).is_zero_field()); }

  TEST_CASE("linear part is the heat multiplier") {
    const auto B = single_mode(16, 3, -2);
    const double eta = 0.05;
    const auto r = rhs(B, 1.0, eta, false);
    const double rate = -kFourPiSq * eta * 13.0;
    CHECK(testing::coeff_distance(r, rate * B) < 1e-13 * std::abs(rate) * B.max_abs_coeff());
  }

  TEST_CASE("energy pairing equals minus the dissipation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto B = seed == 0 ? taylor_green(TorusGrid(64)) : random_sobolev(TorusGrid(64), seed, 1.5);
      const auto e = evaluate_rhs(B, 1.0, 0.1);
      const double pairing = inner(e.dBdt, B);
      const double diss = e.dissipation_u + e.dissipation_B;
      CHECK(std::abs(pairing + diss) < 1e-10 * diss);
      CHECK(is_divergence_free(e.dBdt));
      CHECK(std::abs(e.dBdt.x.at(0, 0)) == 0.0);
      CHECK(std::abs(e.dBdt.y.at(0, 0)) == 0.0);
    }
  }

  TEST_CASE("semi-discrete cancellations") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto B = corpus::member(TorusGrid(32), seed);
      const auto u = stokes::velocity_from_B(B, 0.7).u;
      const auto transport = leray_project(advective_term(u, B));
      const auto stretch = leray_project(advective_term(B, u));
      const auto force = advective_term(B, B);
      const double scale1 = sobolev_norm(transport, SobolevIndex(0)) * sobolev_norm(B, SobolevIndex(0));
      const double scale2 = sobolev_norm(force, SobolevIndex(0)) * sobolev_norm(u, SobolevIndex(0));
      CHECK(std::abs(inner(transport, B)) < 1e-10 * scale1);
      CHECK(std::abs(inner(stretch, B) + inner(force, u)) < 1e-10 * scale2);
    }
  }
}

TEST_SUITE("step") {
  TEST_CASE("diffusion only is exact") {
    const double eta = 0.3, dt = 0.01;
    auto cfg = quick_config(16, eta, dt, 1.0);
    cfg.nonlinear = false;
    const auto B = single_mode(16, 2, 1) + single_mode(16, -1, 4);
    FlowState s(0.0, B, 1.0, eta);
    for (int i = 0; i < 10; ++i) s = step(s, cfg);
    for (int kx = -7; kx <= 7; ++kx)
      for (int ky = -7; ky <= 7; ++ky) {
        const double decay = std::exp(-kFourPiSq * eta * (kx * kx + ky * ky) * 0.1);
        CHECK(std::abs(s.B.x.at(kx, ky) - decay * B.x.at(kx, ky)) < 1e-12 * B.max_abs_coeff());
        CHECK(std::abs(s.B.y.at(kx, ky) - decay * B.y.at(kx, ky)) < 1e-12 * B.max_abs_coeff());
      }
  }

  TEST_CASE("non-resistive run is accepted and conserves at most the energy") {
    const auto B = random_sobolev(TorusGrid(32), 2, 2.0);
    FlowState s(0.0, B, 1.0, 0.0);
    const auto cfg = quick_config(32, 0.0, 2e-3, 1.0);
    const double e0 = energy(B);
    double prev = e0;
    for (int i = 0; i < 20; ++i) {
      s = step(s, cfg);
      const double e = energy(s.B);
      CHECK(e <= prev * (1 + 1e-12));
      prev = e;
    }
    CHECK(prev < e0);
  }

  TEST_CASE("divergence-free and zero mean preserved") {
    FlowState s(0.0, random_sobolev(TorusGrid(32), 4, 1.5), 1.0, 0.05);
    const auto cfg = quick_config(32, 0.05, 1e-3, 1.0);
    for (int i = 0; i < 10; ++i) s = step(s, cfg);
    CHECK(is_divergence_free(s.B));
    CHECK(s.B.x.at(0, 0) == Complex(0.0));
    CHECK(s.B.y.at(0, 0) == Complex(0.0));
  }

  TEST_CASE("CFL violation reports the admissible step") {
    const auto B = random_sobolev(TorusGrid(32), 1, 1.5, 40.0);
    FlowState s(0.0, B, 1.0, 0.1);
    const double max_u = max_magnitude(stokes::velocity_from_B(B, 1.0).u);
    const double limit = admissible_dt(max_u, 32, 0.5);
    auto cfg = quick_config(32, 0.1, 2.0 * limit, 1.0);
    try {
      step(s, cfg);
      FAIL("expected a CFL violation");
    } catch (const CflViolation& e) {
      CHECK(e.admissible_dt() == doctest::Approx(limit).epsilon(1e-12));
      CHECK(e.requested_dt() == 2.0 * limit);
    }
    cfg.dt = 0.9 * limit;
    CHECK_NOTHROW(step(s, cfg));
  }

  TEST_CASE("config validation") {
    GalerkinConfig c;
    c.dt = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.dt = 1e-3;
    c.cfl_safety = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.cfl_safety = 0.5;
    c.ledger_every = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS_AS(FlowState(0.0, taylor_green(TorusGrid(8)), 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(FlowState(0.0, taylor_green(TorusGrid(8)), 1.0, -0.1), std::invalid_argument);
  }
}

TEST_SUITE("integrate") {
  TEST_CASE("t_end = 0 returns the initial state and an empty ledger") {
    const FlowState s0(0.0, taylor_green(TorusGrid(16)), 1.0, 0.1);
    const auto r = integrate(s0, quick_config(16, 0.1, 1e-3, 0.0));
    CHECK(r.ledger.empty());
    CHECK(testing::coeff_distance(r.state.B, s0.B) == 0.0);
  }

  TEST_CASE("last step lands on t_end; ledger and observer cadence") {
    const FlowState s0(0.0, random_sobolev(TorusGrid(16), 3, 2.0), 1.0, 0.1);
    auto cfg = quick_config(16, 0.1, 0.01, 0.105);
    cfg.ledger_every = 4;
    cfg.observer_every = 5;
    std::vector<long> seen;
    const std::vector<Observer> obs{[&](const FlowState&, long k) { seen.push_back(k); }};
    const auto r = integrate(s0, cfg, obs);
    CHECK(r.state.t == 0.105);
    // 11 steps: rows at 0, 4, 8, 11.
    REQUIRE(r.ledger.size() == 4);
    CHECK(r.ledger.t.back() == 0.105);
    CHECK(r.ledger.dt.back() == doctest::Approx(0.005));
    CHECK(seen == std::vector<long>{0, 5, 10, 11});
  }

  TEST_CASE("energy non-increasing and budget closed across a small corpus") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const FlowState s0(0.0, corpus::member(TorusGrid(32), seed), 1.0, 1e-3);
      const auto r = integrate(s0, quick_config(32, 1e-3, 1e-3, 0.05));
      for (std::size_t i = 1; i < r.ledger.size(); ++i) CHECK(r.ledger.energy_B[i] <= r.ledger.energy_B[i - 1]);
      CHECK(r.ledger.energy_B.back() <= r.ledger.energy_B.front());
      CHECK(r.ledger.max_abs_residual() < 1e-6);
    }
  }

  TEST_CASE("diffusion-only energy matches the closed form") {
    const double eta = 0.2;
    const auto B = single_mode(16, 1, 2);
    auto cfg = quick_config(16, eta, 1e-3, 0.3);
    cfg.nonlinear = false;
    const auto r = integrate(FlowState(0.0, B, 1.0, eta), cfg);
    const double expect = energy(B) * std::exp(-2.0 * kFourPiSq * eta * 5.0 * 0.3);
    CHECK(r.ledger.energy_B.back() == doctest::Approx(expect).epsilon(1e-12));
    // Simpson quadrature of exp(-2 lambda t): relative error (2 lambda dt)^4 / 2880.
    CHECK(std::abs(r.ledger.balance_residual.back()) < 1e-7);
  }

  TEST_CASE("overflow aborts with the step index") {
    const auto B = 1e200 * taylor_green(TorusGrid(16));
    auto cfg = quick_config(16, 0.1, 0.01, 0.1);
    cfg.nonlinear = false;
    try {
      integrate(FlowState(0.0, B, 1.0, 0.1), cfg);
      FAIL("expected a non-finite state");
    } catch (const NonFiniteState& e) {
      CHECK(e.step_index() == 1);
    }
  }

  TEST_CASE("ledger CSV is deterministic") {
    const FlowState s0(0.0, random_sobolev(TorusGrid(16), 9, 1.5), 1.0, 0.1);
    const auto cfg = quick_config(16, 0.1, 1e-3, 0.02);
    const auto a = integrate(s0, cfg).ledger.to_csv().to_string();
    const auto b = integrate(s0, cfg).ledger.to_csv().to_string();
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "t,energy_B,dissipation_u,dissipation_B,balance_residual,max_u,dt");
  }
}

TEST_SUITE("time-derivative bound") {
  TEST_CASE("zero field is degenerate") {
    const FlowState s(0.0, VectorField(TorusGrid(16)), 1.0, 0.1);
    CHECK_THROWS_AS(dBdt_hminus1_bound_check(s), lorentz::DegenerateInput);
  }

  TEST_CASE("diffusion only stays below one") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const FlowState s(0.0, corpus::member(TorusGrid(32), seed), 1.0, 0.1);
      CHECK(dBdt_hminus1_bound_check(s, false) <= 1.0);
    }
  }

  TEST_CASE("corpus ratio at most one") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const FlowState s(0.0, corpus::member(TorusGrid(32), seed), 1.0, 0.1);
      CHECK(dBdt_hminus1_bound_check(s) <= 1.0 + 1e-8);
    }
  }
}
