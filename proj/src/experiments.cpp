#include "mhdrelax/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mhdrelax/corpus.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/io.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/stokes.hpp"

namespace mhdrelax::experiments {
namespace {

constexpr double kBudgetTolerance = 1e-6;
constexpr double kMonotoneTolerance = 1e-10;
constexpr double kFluxTolerance = 1e-12;

double l2(const VectorField& v) { return sobolev_norm(v, SobolevIndex(0)); }

const std::vector<double>& series(const Metrics& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw std::invalid_argument("missing metric '" + key + "'");
  return it->second;
}

double scalar_of(const Metrics& m, const std::string& key) {
  const auto& s = series(m, key);
  if (s.empty()) throw std::invalid_argument("empty metric '" + key + "'");
  return s.front();
}

Criterion make(std::string name, std::string comparator, double threshold, double value) {
  bool pass = false;
  if (comparator == "<=") pass = value <= threshold;
  else if (comparator == "<") pass = value < threshold;
  else if (comparator == ">=") pass = value >= threshold;
  else if (comparator == "finite") pass = std::isfinite(value);
  else throw std::invalid_argument("unknown comparator " + comparator);
  return {std::move(name), std::move(comparator), threshold, value, pass};
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Largest step-to-step increase relative to the first value.
double max_relative_increase(const std::vector<double>& v) {
  if (v.size() < 2 || v.front() == 0.0) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, (v[i] - v[i - 1]) / std::abs(v.front()));
  return worst;
}

// Trailing moving average over (t_i - window, t_i].
std::vector<double> moving_average(const std::vector<double>& t, const std::vector<double>& v, double window) {
  std::vector<double> out(v.size());
  std::size_t lo = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    while (t[lo] <= t[i] - window) sum -= v[lo++];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::vector<Criterion> verdict_energy(const Metrics& m) {
  return {make("energy_budget_residual", "<", kBudgetTolerance, max_abs(series(m, "balance_residual"))),
          make("energy_nonincreasing", "<=", kMonotoneTolerance, max_relative_increase(series(m, "energy_B")))};
}

std::vector<Criterion> verdict_uniqueness(const Metrics& m) {
  const auto& env = series(m, "envelope");
  double worst = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());
  return {make("fitted_C", "finite", 0.0, scalar_of(m, "fitted_C")),
          make("envelope_max", "<=", 1e-9, worst)};
}

std::vector<Criterion> verdict_uniqueness_sweep(const Metrics& m) {
  const auto& response = series(m, "z_final_over_delta");
  const auto [lo, hi] = std::minmax_element(response.begin(), response.end());
  const auto& cs = series(m, "fitted_C");
  double c_max = cs.empty() ? 0.0 : *std::max_element(cs.begin(), cs.end());
  for (double c : cs) {
    if (!std::isfinite(c)) c_max = c;
  }
  return {make("loglog_slope_deviation", "<=", 0.05, std::abs(scalar_of(m, "slope") - 1.0)),
          make("linear_response_spread", "<", 0.05, *hi / *lo - 1.0), make("fitted_C_max", "finite", 0.0, c_max)};
}

std::vector<Criterion> verdict_smoothing(const Metrics& m) {
  const auto& times = series(m, "time");
  const auto& ns = series(m, "resolution");
  const double check_time = scalar_of(m, "param.check_time");
  std::size_t t0 = 0;
  std::size_t tc = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i]) < std::abs(times[t0])) t0 = i;
    if (std::abs(times[i] - check_time) < std::abs(times[tc] - check_time)) tc = i;
  }
  auto h1 = [&](std::size_t r, std::size_t ti) {
    return series(m, "H1.n" + std::to_string(static_cast<int>(ns[r])))[ti];
  };
  double growth = std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r < ns.size(); ++r) growth = std::min(growth, h1(r, t0) / h1(r - 1, t0) - 1.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t r = 0; r < ns.size(); ++r) {
    lo = std::min(lo, h1(r, tc));
    hi = std::max(hi, h1(r, tc));
  }
  return {make("initial_H1_growth_per_doubling", ">=", 0.25, growth),
          make("smoothed_H1_spread", "<", 0.10, hi / lo - 1.0)};
}

std::vector<Criterion> verdict_relaxation(const Metrics& m) {
  const auto& t = series(m, "t");
  const auto& du = series(m, "dissipation_u");
  const double window = scalar_of(m, "param.window");
  const double t_start = scalar_of(m, "param.t_start");
  const auto smooth = moving_average(t, du, window);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < smooth.size(); ++i) {
    if (t[i - 1] < t_start) continue;
    worst = std::max(worst, (smooth[i] - smooth[i - 1]) / smooth[i - 1]);
  }
  const auto& euler = series(m, "euler_residual");
  const auto& b = series(m, "b_l2");
  const auto& bound = series(m, "flux_bound");
  double flux_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) flux_gap = std::max(flux_gap, (bound[i] - b[i]) / b.front());
  const double u_budget = series(m, "u_dissipation_integral").back() / scalar_of(m, "initial_energy");
  return {make("smoothed_dissipation_u_max_relative_increase", "<=", 0.0, worst),
          make("euler_residual_final_over_initial", "<", 1.0, euler.back() / euler.front()),
          make("energy_budget_residual", "<", kBudgetTolerance, max_abs(series(m, "balance_residual"))),
          make("b_l2_nonincreasing", "<=", kMonotoneTolerance, max_relative_increase(b)),
          make("flux_bound_gap", "<=", kFluxTolerance, flux_gap),
          make("u_dissipation_over_initial_energy", "<=", 1.0, u_budget)};
}

std::vector<Criterion> verdict_higher_order(const Metrics& m) {
  return {make("fitted_c", "finite", 0.0, scalar_of(m, "fitted_c"))};
}

using VerdictRule = std::function<std::vector<Criterion>(const Metrics&)>;

const std::map<std::string, VerdictRule>& rules() {
  static const std::map<std::string, VerdictRule> table{
      {"energy", verdict_energy},
      {"uniqueness", verdict_uniqueness},
      {"uniqueness_sweep", verdict_uniqueness_sweep},
      {"smoothing", verdict_smoothing},
      {"relaxation", verdict_relaxation},
      {"higher_order_ledger", verdict_higher_order},
  };
  return table;
}

void echo_galerkin(ExperimentReport& r, const dynamics::GalerkinConfig& c) {
  r.config = {{"grid.n", std::to_string(c.n)},         {"params.nu", io::format_double(c.nu)},
              {"params.eta", io::format_double(c.eta)}, {"time.dt", io::format_double(c.dt)},
              {"time.t_end", io::format_double(c.t_end)}, {"time.cfl_safety", io::format_double(c.cfl_safety)}};
}

void add_ledger(Metrics& m, const dynamics::EnergyLedger& ledger) {
  m["t"] = ledger.t;
  m["energy_B"] = ledger.energy_B;
  m["dissipation_u"] = ledger.dissipation_u;
  m["dissipation_B"] = ledger.dissipation_B;
  m["balance_residual"] = ledger.balance_residual;
  m["max_u"] = ledger.max_u;
  m["dt"] = ledger.dt;
}

double grad_sum(const VectorField& a, const VectorField& b) {
  return std::pow(gradient_norm(a), 2) + std::pow(gradient_norm(b), 2);
}

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(verdict.begin(), verdict.end(), [](const Criterion& c) { return c.pass; });
}

double ExperimentReport::scalar(const std::string& key) const { return scalar_of(metrics, key); }

std::vector<Criterion> evaluate_verdict(const std::string& name, const Metrics& metrics) {
  auto it = rules().find(name);
  if (it == rules().end()) throw std::invalid_argument("unknown experiment '" + name + "'");
  return it->second(metrics);
}

std::string format_verdict(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment " << report.name << '\n';
  for (const auto& c : report.verdict) {
    out << c.name << ' ' << c.comparator << ' ' << io::format_double(c.threshold) << ' '
        << io::format_double(c.value) << ' ' << (c.pass ? "pass" : "fail") << '\n';
  }
  return out.str();
}

void write_report(ExperimentReport& report, const std::filesystem::path& dir) {
  io::CsvTable table({"metric", "index", "value"});
  for (const auto& [key, values] : report.metrics) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      table.add_row(std::vector<std::string>{key, std::to_string(i), io::format_double(values[i])});
    }
  }
  const auto csv = dir / "report.csv";
  const auto verdict = dir / "verdict.txt";
  io::write_csv(csv, table);
  io::write_file_atomic(verdict, format_verdict(report));
  report.artifacts.push_back(csv.string());
  report.artifacts.push_back(verdict.string());
}

Metrics read_metrics(const std::filesystem::path& report_csv) {
  const auto table = io::CsvTable::parse(io::read_file(report_csv));
  const std::size_t key_col = table.column("metric");
  const std::size_t index_col = table.column("index");
  const std::size_t value_col = table.column("value");
  Metrics m;
  for (const auto& row : table.rows()) {
    auto& s = m[row.at(key_col)];
    const std::size_t idx = std::stoul(row.at(index_col));
    if (s.size() <= idx) s.resize(idx + 1, std::numeric_limits<double>::quiet_NaN());
    s[idx] = std::stod(row.at(value_col));
  }
  return m;
}

ExperimentReport run_energy(const dynamics::GalerkinConfig& config, const VectorField& B0,
                            std::span<const dynamics::Observer> observers) {
  ExperimentReport r;
  r.name = "energy";
  echo_galerkin(r, config);
  const FlowState initial(0.0, B0, config.nu, config.eta);
  const auto result = dynamics::integrate(initial, config, observers);
  add_ledger(r.metrics, result.ledger);
  if (result.ledger.empty()) {
    r.metrics["energy_B"] = {0.5 * std::pow(l2(B0), 2)};
    r.metrics["balance_residual"] = {0.0};
  }
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

VectorField perturbation_direction(TorusGrid grid, std::uint64_t seed) {
  VectorField zeta = random_sobolev(grid, seed ^ 0x9e3779b97f4a7c15ULL, 2.0);
  zeta *= 1.0 / l2(zeta);
  zeta.divergence_free = true;
  return zeta;
}

ExperimentReport run_uniqueness(const dynamics::GalerkinConfig& config, const VectorField& B0, double delta,
                                std::uint64_t seed) {
  config.validate();
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  ExperimentReport r;
  r.name = "uniqueness";
  echo_galerkin(r, config);
  r.config.emplace_back("delta", io::format_double(delta));
  r.config.emplace_back("seed", std::to_string(seed));

  VectorField B2 = B0;
  if (delta > 0.0) B2 += delta * perturbation_direction(B0.grid(), seed);
  B2.divergence_free = true;
  std::vector<FlowState> pair{FlowState(0.0, B0, config.nu, config.eta), FlowState(0.0, B2, config.nu, config.eta)};

  std::vector<double> t{0.0};
  std::vector<double> z{l2(pair[0].B - pair[1].B)};
  std::vector<double> integral{0.0};
  double g_prev = grad_sum(pair[0].B, pair[1].B);

  const long steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  double now = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double dt = k == steps ? config.t_end - now : config.dt;
    corpus::parallel_for(2, [&](std::size_t i) {
      pair[i] = dynamics::step_with_diagnostics(pair[i], config, dt).state;
    });
    now = k == steps ? config.t_end : now + dt;
    const double g = grad_sum(pair[0].B, pair[1].B);
    t.push_back(now);
    z.push_back(l2(pair[0].B - pair[1].B));
    integral.push_back(integral.back() + 0.5 * dt * (g + g_prev));
    g_prev = g;
  }

  std::vector<double> growth(t.size(), 0.0);
  double c = 0.0;
  if (z.front() > 0.0) {
    for (std::size_t i = 1; i < t.size(); ++i) {
      growth[i] = 2.0 * std::log(z[i] / z.front());
      if (integral[i] > 0.0) c = std::max(c, growth[i] / integral[i]);
    }
  }
  std::vector<double> envelope(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) envelope[i] = growth[i] - c * integral[i];

  r.metrics["t"] = t;
  r.metrics["z_l2"] = z;
  r.metrics["gradient_integral"] = integral;
  r.metrics["log_growth"] = growth;
  r.metrics["envelope"] = envelope;
  r.metrics["fitted_C"] = {c};
  r.metrics["delta"] = {delta};
  r.metrics["z_final"] = {z.back()};
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

ExperimentReport run_uniqueness_sweep(const dynamics::GalerkinConfig& config, const VectorField& B0,
                                      const std::vector<double>& deltas, std::uint64_t seed) {
  if (deltas.size() < 2) throw std::invalid_argument("the delta sweep needs at least two values");
  ExperimentReport r;
  r.name = "uniqueness_sweep";
  echo_galerkin(r, config);
  r.config.emplace_back("seed", std::to_string(seed));
  std::vector<double> z_final, response, cs, log_d, log_z;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw std::invalid_argument("sweep deltas must be positive");
    const auto run = run_uniqueness(config, B0, delta, seed);
    z_final.push_back(run.scalar("z_final"));
    response.push_back(z_final.back() / delta);
    cs.push_back(run.scalar("fitted_C"));
    log_d.push_back(std::log(delta));
    log_z.push_back(std::log(z_final.back()));
  }
  const double nd = static_cast<double>(deltas.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    mx += log_d[i] / nd;
    my += log_z[i] / nd;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    sxy += (log_d[i] - mx) * (log_z[i] - my);
    sxx += (log_d[i] - mx) * (log_d[i] - mx);
  }
  r.metrics["delta"] = deltas;
  r.metrics["z_final"] = z_final;
  r.metrics["z_final_over_delta"] = response;
  r.metrics["fitted_C"] = cs;
  r.metrics["slope"] = {sxy / sxx};
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

ExperimentReport run_smoothing(const dynamics::GalerkinConfig& config, const SmoothingOptions& options) {
  if (options.resolutions.empty() || options.times.empty()) {
    throw std::invalid_argument("smoothing needs resolutions and sample times");
  }
  std::vector<double> times = options.times;
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0) throw std::invalid_argument("sample times must be nonnegative");

  ExperimentReport r;
  r.name = "smoothing";
  echo_galerkin(r, config);
  r.config.emplace_back("init.spectrum_exponent", io::format_double(options.exponent));
  r.config.emplace_back("init.seed", std::to_string(options.seed));

  const int n_max = *std::max_element(options.resolutions.begin(), options.resolutions.end());
  const TorusGrid finest(n_max);
  const VectorField B_finest = random_sobolev(finest, options.seed, options.exponent);
  const double u0 = max_magnitude(stokes::velocity_from_B(B_finest, config.nu).u);
  const double dt = std::min(config.dt, 0.5 * dynamics::admissible_dt(u0, n_max, config.cfl_safety));
  r.metrics["param.dt"] = {dt};

  std::vector<double> ns;
  for (int n : options.resolutions) {
    ns.push_back(n);
    const TorusGrid grid(n);
    FlowState state(0.0, random_sobolev(grid, options.seed, options.exponent), config.nu, config.eta);
    dynamics::GalerkinConfig c = config;
    c.n = n;
    c.dt = dt;
    c.ledger_every = std::numeric_limits<int>::max();
    std::vector<std::vector<double>> norms(4);
    for (double target : times) {
      if (target > state.t) {
        c.t_end = target;
        state = dynamics::integrate(state, c).state;
      }
      for (int k = 0; k <= 3; ++k) norms[k].push_back(sobolev_norm(state.B, SobolevIndex(k)));
    }
    const std::string suffix = ".n" + std::to_string(n);
    r.metrics["L2" + suffix] = norms[0];
    for (int k = 1; k <= 3; ++k) r.metrics["H" + std::to_string(k) + suffix] = norms[k];
  }
  r.metrics["time"] = times;
  r.metrics["resolution"] = ns;
  r.metrics["param.check_time"] = {options.check_time};
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

double euler_residual(const VectorField& B) {
  return sobolev_norm(leray_project(advective_term(B, B)), SobolevIndex(-1));
}

FluxDiagnostics flux_function_diagnostics(const VectorField& B) {
  FluxDiagnostics d{inverse_laplacian(curl(B)), 0.0, 0.0, l2(B)};
  d.potential_l2 = sobolev_norm(d.psi, SobolevIndex(0));
  d.b_lower_bound = 2.0 * std::numbers::pi * d.potential_l2;
  return d;
}

ExperimentReport run_relaxation(const dynamics::GalerkinConfig& config, const VectorField& B0,
                                const RelaxationOptions& options, std::span<const dynamics::Observer> observers) {
  ExperimentReport r;
  r.name = "relaxation";
  echo_galerkin(r, config);

  dynamics::GalerkinConfig c = config;
  c.observer_every = c.ledger_every;
  std::vector<double> euler, b, bound;
  std::vector<dynamics::Observer> all(observers.begin(), observers.end());
  all.emplace_back([&](const FlowState& s, long) {
    const auto flux = flux_function_diagnostics(s.B);
    euler.push_back(euler_residual(s.B));
    b.push_back(flux.b_l2);
    bound.push_back(flux.b_lower_bound);
  });
  const FlowState initial(0.0, B0, config.nu, config.eta);
  const auto result = dynamics::integrate(initial, c, all);
  add_ledger(r.metrics, result.ledger);

  const auto& t = result.ledger.t;
  const auto& du = result.ledger.dissipation_u;
  std::vector<double> u_integral(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    u_integral[i] = u_integral[i - 1] + 0.5 * (t[i] - t[i - 1]) * (du[i] + du[i - 1]);
  }
  r.metrics["euler_residual"] = euler;
  r.metrics["b_l2"] = b;
  r.metrics["flux_bound"] = bound;
  r.metrics["u_dissipation_integral"] = u_integral;
  r.metrics["initial_energy"] = {0.5 * std::pow(l2(B0), 2)};
  r.metrics["param.window"] = {options.window};
  r.metrics["param.t_start"] = {options.t_start};
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

lorentz::InequalityRatioReport check_hs_product_inequality(const VectorField& u, const VectorField& v, int s) {
  if (s < 2) throw std::invalid_argument("product inequality needs s >= 2");
  if (!is_divergence_free(u)) throw std::invalid_argument("product inequality needs divergence-free u");
  lorentz::InequalityRatioReport rep{0.0, 0.0, 0.0, "hs_product"};
  if (u.is_zero_field() || v.is_zero_field()) return rep;
  rep.lhs = sobolev_norm(advective_term(u, v), SobolevIndex(s));
  rep.rhs = sobolev_norm(u, SobolevIndex(s)) * sobolev_norm(v, SobolevIndex(s + 1));
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

ExperimentReport check_higher_order_ledger(const std::vector<FlowState>& trajectory, int k) {
  if (trajectory.size() < 3) throw std::invalid_argument("higher-order ledger needs at least three states");
  if (k < 1) throw std::invalid_argument("higher-order ledger needs k >= 1");
  const SobolevIndex hk(k);
  const SobolevIndex hk1(k + 1);
  const std::size_t count = trajectory.size();
  std::vector<double> t(count), b_k(count), u_k(count), u_k1(count), b_k1(count);
  corpus::parallel_for(count, [&](std::size_t i) {
    const FlowState& s = trajectory[i];
    const VectorField u = stokes::velocity_from_B(s.B, s.nu).u;
    t[i] = s.t;
    b_k[i] = std::pow(sobolev_norm(s.B, hk), 2);
    b_k1[i] = std::pow(sobolev_norm(s.B, hk1), 2);
    u_k[i] = std::pow(sobolev_norm(u, hk), 2);
    u_k1[i] = std::pow(sobolev_norm(u, hk1), 2);
  });

  ExperimentReport r;
  r.name = "higher_order_ledger";
  r.config = {{"k", std::to_string(k)}};
  std::vector<double> t_mid, lhs, base;
  double c = 0.0;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const FlowState& s = trajectory[i];
    const double span = t[i + 1] - t[i - 1];
    if (!(span > 0.0)) throw std::invalid_argument("trajectory times must increase");
    const double l = (b_k[i + 1] - b_k[i - 1]) / span + s.nu * u_k1[i] + s.eta * b_k1[i];
    const double q = b_k[i] * (u_k[i] + b_k[i]);
    t_mid.push_back(t[i]);
    lhs.push_back(l);
    base.push_back(q);
    if (l > 0.0) c = std::max(c, q > 0.0 ? l / q : std::numeric_limits<double>::infinity());
  }
  r.metrics["t"] = t_mid;
  r.metrics["lhs"] = lhs;
  r.metrics["rhs_base"] = base;
  r.metrics["fitted_c"] = {c};
  r.metrics["k"] = {static_cast<double>(k)};
  r.verdict = evaluate_verdict(r.name, r.metrics);
  return r;
}

}  // namespace mhdrelax::experiments
