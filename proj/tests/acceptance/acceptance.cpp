// Runs every acceptance criterion at full scale and prints one line each:
//   [PASS|FAIL] <id> <name>: <measurements> (<seconds>s / budget <seconds>s)
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mhdrelax/config.hpp"
#include "mhdrelax/experiments.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/stokes.hpp"
#include "mhdrelax/verify.hpp"

using namespace mhdrelax;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

config::RunConfig shipped(const char* name) {
  return config::build(config::parse_file(std::string(MHDRELAX_CONFIG_DIR) + "/" + name + ".toml"));
}

const experiments::Criterion& verdict_item(const experiments::ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.verdict)
    if (c.name == name) return c;
  throw std::out_of_range("no verdict item " + name);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double l2(const VectorField& v) { return sobolev_norm(v, SobolevIndex(0)); }

Outcome greens_bound() {
  std::size_t violations = 0;
  double worst = 0;
  for (double nu : {0.1, 1.0, 10.0}) {
    const auto r = verify::greens_bound_sweep(nu, 10000, 1);
    violations += r.violations;
    worst = std::max(worst, r.worst_scaled);
  }
  return {violations == 0, "violations " + std::to_string(violations) + ", max |dU| pi nu |x| = " + fmt(worst)};
}

Outcome inverse_radius() {
  std::vector<double> values;
  for (int n : {128, 256, 512}) {
    const double measure = 1.0 / (double(n) * n);
    values.push_back(lorentz::weak_lp_quasinorm(lorentz::inverse_radius_samples(n), measure, 2.0).value);
  }
  const double target = std::sqrt(std::numbers::pi);
  const double gap = std::abs(values.back() - target) / target;
  const bool monotone = values[0] < values[1] && values[1] < values[2] && values[2] <= target;
  return {gap < 0.05 && monotone, "n=128,256,512: " + fmt(values[0]) + ", " + fmt(values[1]) + ", " +
                                      fmt(values[2]) + "; gap to sqrt(pi) " + fmt(gap) + " (< 0.05)"};
}

Outcome energy_identity() {
  auto cfg = shipped("tg").galerkin();
  const auto B0 = taylor_green(TorusGrid(cfg.n));
  const double coarse = verdict_item(experiments::run_energy(cfg, B0), "energy_budget_residual").value;
  cfg.dt *= 0.5;
  const double fine = verdict_item(experiments::run_energy(cfg, B0), "energy_budget_residual").value;
  const double contraction = coarse / fine;
  // Fourth order: 16x, accepted within half an octave.
  const bool ok = coarse < 1e-6 && std::abs(std::log2(contraction) - 4.0) < 0.5;
  return {ok, "residual " + fmt(coarse) + " (< 1e-6), halved dt " + fmt(fine) + ", contraction " +
                  fmt(contraction) + " (~16)"};
}

Outcome cancellations() {
  double worst_transport = 0, worst_exchange = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto B = random_sobolev(TorusGrid(64), 1000 + seed, 1.0 + 0.02 * double(seed));
    const auto u = stokes::velocity_from_B(B, 1.0).u;
    const auto transport = leray_project(advective_term(u, B));
    const auto stretch = leray_project(advective_term(B, u));
    const auto force = advective_term(B, B);
    worst_transport = std::max(worst_transport, std::abs(inner(transport, B)) / (l2(transport) * l2(B)));
    worst_exchange =
        std::max(worst_exchange, std::abs(inner(stretch, B) + inner(force, u)) / (l2(force) * l2(u)));
  }
  return {worst_transport < 1e-10 && worst_exchange < 1e-10,
          "transport " + fmt(worst_transport) + ", exchange " + fmt(worst_exchange) + " (< 1e-10)"};
}

Outcome inequality_corpus() {
  const verify::SeedRange seeds{0, 999};
  const auto coarse = verify::run_suite("all", 64, seeds);
  const auto fine = verify::run_suite("all", 128, seeds);
  std::ostringstream detail;
  bool ok = coarse.ok() && fine.ok();
  detail << "hard failures " << coarse.hard_failures.size() + fine.hard_failures.size();
  const double dbdt = std::max(coarse.maxima.at("dBdt_bound"), fine.maxima.at("dBdt_bound"));
  ok = ok && dbdt <= 1.0 + 1e-8;
  detail << ", dBdt ratio max " << fmt(dbdt) << " (<= 1+1e-8)";
  double worst_drift = 0;
  std::string worst_key;
  for (const auto& [key, a] : coarse.maxima) {
    if (key == "dBdt_bound") continue;
    const double b = fine.maxima.at(key);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      ok = false;
      detail << ", " << key << " not finite";
      continue;
    }
    const double drift = a == 0.0 ? (b == 0.0 ? 0.0 : 1.0) : std::abs(b - a) / a;
    if (drift > worst_drift) {
      worst_drift = drift;
      worst_key = key;
    }
  }
  for (const auto& [key, value] : coarse.residuals) {
    if (!std::isfinite(value) || !std::isfinite(fine.residuals.at(key))) {
      ok = false;
      detail << ", " << key << " not finite";
    }
  }
  ok = ok && worst_drift < 0.10;
  detail << ", largest drift " << fmt(worst_drift) << " (" << worst_key << ", < 0.1)";
  return {ok, detail.str()};
}

Outcome continuous_dependence() {
  const auto cfg = shipped("uniqueness");
  const auto B0 = init_field(TorusGrid(cfg.n), cfg.init);
  const auto pseed = static_cast<std::uint64_t>(cfg.param("perturbation_seed", 0));
  const auto r = experiments::run_uniqueness_sweep(cfg.galerkin(), B0, cfg.param_list("deltas", {}), pseed);
  const auto& slope = verdict_item(r, "loglog_slope_deviation");
  const auto& c = verdict_item(r, "fitted_C_max");
  return {slope.pass && c.pass, "slope " + fmt(r.scalar("slope")) + " (1 +- 0.05), fitted C " + fmt(c.value)};
}

Outcome smoothing() {
  const auto cfg = shipped("smoothing");
  experiments::SmoothingOptions opt;
  opt.exponent = cfg.init.spectrum_exponent;
  opt.seed = cfg.init.seed;
  opt.check_time = cfg.param("check_time", opt.check_time);
  opt.times = cfg.param_list("times", opt.times);
  opt.resolutions.clear();
  for (double n : cfg.param_list("resolutions", {64, 128, 256})) opt.resolutions.push_back(static_cast<int>(n));
  const auto r = experiments::run_smoothing(cfg.galerkin(), opt);
  const auto& growth = verdict_item(r, "initial_H1_growth_per_doubling");
  const auto& spread = verdict_item(r, "smoothed_H1_spread");
  return {growth.pass && spread.pass,
          "H1(0) growth per doubling " + fmt(growth.value) + " (>= 0.25), H1(" + fmt(opt.check_time) +
              ") spread " + fmt(spread.value) + " (< 0.1)"};
}

double interior_error(const stokes::VelocitySamples& a, const stokes::VelocitySamples& b, double radius) {
  double worst = 0;
  const auto& g = a.grid;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (std::hypot(g.coord(i), g.coord(j)) >= radius) continue;
      const auto idx = static_cast<std::size_t>(i) * g.n + j;
      worst = std::max(worst, std::hypot(a.ux[idx] - b.ux[idx], a.uy[idx] - b.uy[idx]));
    }
  return worst;
}

double max_speed(const stokes::VelocitySamples& u) {
  double m = 0;
  for (std::size_t i = 0; i < u.ux.size(); ++i) m = std::max(m, std::hypot(u.ux[i], u.uy[i]));
  return m;
}

Outcome stokes_solvers() {
  double round_trip = 0;
  for (double nu : {0.1, 1.0, 10.0}) {
    SpectralField psi{TorusGrid(64)};
    psi.at(3, -2) = Complex(0.3, -0.1);
    psi.at(-3, 2) = Complex(0.3, 0.1);
    const auto u_star = perp_gradient(psi);
    const VectorField forcing(-nu * laplacian(u_star.x), -nu * laplacian(u_star.y));
    const auto sol = stokes::solve_stokes(forcing, nu);
    const auto diff = sol.u - u_star;
    round_trip = std::max(round_trip, diff.max_abs_coeff() / u_star.max_abs_coeff());
  }

  const stokes::Bump bump{{0.0, 0.0}, 0.8, 1.0};
  std::vector<double> errors;
  for (int n : {64, 128, 256}) {
    const stokes::FreeSpaceGrid g{n, 2.0};
    const auto f = stokes::manufactured_forcing(g, bump, 1.0);
    const auto oracle = stokes::solve_stokes_periodic_box(f, 1.0);
    const auto u = stokes::solve_stokes_freespace(f, 1.0);
    errors.push_back(interior_error(u, oracle, 0.6) / max_speed(oracle));
  }
  const double order = std::log2(errors[0] / errors[2]) / 2.0;
  const bool ok = round_trip < 1e-12 && errors.back() < 1e-3 && order >= 1.0;
  return {ok, "round trip " + fmt(round_trip) + " (< 1e-12), free vs periodic at N=256 " + fmt(errors.back()) +
                  " (< 1e-3), observed order " + fmt(order) + " (>= 1)"};
}

Outcome relaxation() {
  const auto cfg = shipped("relaxation");
  experiments::RelaxationOptions opt;
  opt.window = cfg.param("window", opt.window);
  opt.t_start = cfg.param("t_start", opt.t_start);
  const auto B0 = init_field(TorusGrid(cfg.n), cfg.init);
  const auto r = experiments::run_relaxation(cfg.galerkin(), B0, opt);
  const auto& trend = verdict_item(r, "smoothed_dissipation_u_max_relative_increase");
  const auto& budget = verdict_item(r, "energy_budget_residual");
  const auto& flux = verdict_item(r, "flux_bound_gap");
  return {trend.pass && budget.pass && flux.pass,
          "smoothed nu|grad u|^2 max relative increase " + fmt(trend.value) + " (<= 0), residual " +
              fmt(budget.value) + " (< 1e-6), flux bound gap " + fmt(flux.value) + " (<= 1e-12)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "green-gradient-bound", 1, greens_bound},
      {2, "inverse-radius-weak-l2", 10, inverse_radius},
      {3, "discrete-energy-identity", 60, energy_identity},
      {4, "semi-discrete-cancellations", 60, cancellations},
      {5, "inequality-corpus", 900, inequality_corpus},
      {6, "continuous-dependence", 300, continuous_dependence},
      {7, "instantaneous-smoothing", 600, smoothing},
      {8, "stokes-manufactured", 120, stokes_solvers},
      {9, "relaxation", 600, relaxation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds < c.budget_seconds;
    failures += !pass;
    std::printf("[%s] %d %s: %s (%.2fs / budget %gs)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
