#include "mhdrelax/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/stokes.hpp"

namespace mhdrelax::dynamics {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Physical samples of a vector field and its gradient on the 3/2 grid.
struct PaddedVector {
  std::vector<double> vx, vy;
  std::vector<double> dxvx, dyvx, dxvy, dyvy;

  PaddedVector(const VectorField& v, int m) {
    std::tie(vx, vy) = to_physical_padded_pair(v.x, v.y, m);
    std::tie(dxvx, dyvx) = to_physical_padded_pair(derivative(v.x, 0), derivative(v.x, 1), m);
    std::tie(dxvy, dyvy) = to_physical_padded_pair(derivative(v.y, 0), derivative(v.y, 1), m);
  }
};

VectorField vector_from_padded(const TorusGrid& grid, std::span<const double> x, std::span<const double> y, int m) {
  auto [fx, fy] = from_physical_padded_pair(grid, x, y, m);
  return VectorField(std::move(fx), std::move(fy));
}

// exp(-4 pi^2 eta |k|^2 tau) applied mode-wise.
VectorField apply_decay(const VectorField& v, double eta, double tau) {
  if (eta == 0.0 || tau == 0.0) return v;
  const TorusGrid& g = v.grid();
  VectorField out = v;
  auto cx = out.x.coeff();
  auto cy = out.y.coeff();
  for (int i = 0; i < g.n(); ++i) {
    const double kx = g.wavenumber(i);
    for (int j = 0; j < g.n(); ++j) {
      const double ky = g.wavenumber(j);
      const double factor = std::exp(-kTwoPi * kTwoPi * eta * (kx * kx + ky * ky) * tau);
      const std::size_t idx = g.flat(i, j);
      cx[idx] *= factor;
      cy[idx] *= factor;
    }
  }
  return out;
}

VectorField axpy(const VectorField& x, double a, const VectorField& y) {
  VectorField out = y;
  out *= a;
  out += x;
  return out;
}

}  // namespace

void GalerkinConfig::validate() const {
  TorusGrid{n};
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw std::invalid_argument("cfl_safety must lie in (0, 1]");
  if (ledger_every < 1) throw std::invalid_argument("ledger_every must be >= 1");
  if (observer_every < 0) throw std::invalid_argument("observer_every must be >= 0");
}

RhsEval evaluate_rhs(const VectorField& B, double nu, double eta, bool nonlinear) {
  const TorusGrid& grid = B.grid();
  RhsEval out{VectorField(grid), VectorField(grid), VectorField(grid), 0.0, 0.0};
  out.dissipation_B = eta * std::pow(gradient_norm(B), 2);
  VectorField diffusion(laplacian(B.x), laplacian(B.y));
  diffusion *= eta;

  if (nonlinear) {
    const int m = dealiasing_size(grid.n());
    const PaddedVector b(B, m);
    const std::size_t count = b.vx.size();

    std::vector<double> fx(count), fy(count);
    for (std::size_t q = 0; q < count; ++q) {
      fx[q] = b.vx[q] * b.dxvx[q] + b.vy[q] * b.dyvx[q];
      fy[q] = b.vx[q] * b.dxvy[q] + b.vy[q] * b.dyvy[q];
    }
    const VectorField forcing = vector_from_padded(grid, fx, fy, m);
    stokes::StokesSolution sol = stokes::solve_stokes(forcing, nu);
    out.u = std::move(sol.u);
    out.dissipation_u = nu * std::pow(gradient_norm(out.u), 2);

    const PaddedVector u(out.u, m);
    // (B.grad)u - (u.grad)B
    std::vector<double> nx(count), ny(count);
    for (std::size_t q = 0; q < count; ++q) {
      nx[q] = b.vx[q] * u.dxvx[q] + b.vy[q] * u.dyvx[q] - (u.vx[q] * b.dxvx[q] + u.vy[q] * b.dyvx[q]);
      ny[q] = b.vx[q] * u.dxvy[q] + b.vy[q] * u.dyvy[q] - (u.vx[q] * b.dxvy[q] + u.vy[q] * b.dyvy[q]);
    }
    out.nonlinear = leray_project(vector_from_padded(grid, nx, ny, m));
    out.nonlinear.x.at(0, 0) = 0.0;
    out.nonlinear.y.at(0, 0) = 0.0;
  }
  out.nonlinear.divergence_free = true;
  out.dBdt = out.nonlinear + diffusion;
  out.dBdt.divergence_free = true;
  return out;
}

VectorField rhs(const VectorField& B, double nu, double eta, bool nonlinear) {
  return evaluate_rhs(B, nu, eta, nonlinear).dBdt;
}

io::CsvTable EnergyLedger::to_csv() const {
  io::CsvTable table({"t", "energy_B", "dissipation_u", "dissipation_B", "balance_residual", "max_u", "dt"});
  for (std::size_t i = 0; i < size(); ++i) {
    table.add_row(std::vector<double>{t[i], energy_B[i], dissipation_u[i], dissipation_B[i], balance_residual[i],
                                      max_u[i], dt[i]});
  }
  return table;
}

double EnergyLedger::max_abs_residual() const {
  double m = 0.0;
  for (double r : balance_residual) m = std::max(m, std::abs(r));
  return m;
}

CflViolation::CflViolation(double requested, double admissible)
    : std::runtime_error("time step " + io::format_double(requested) + " violates the CFL limit; admissible dt <= " +
                         io::format_double(admissible)),
      requested_(requested),
      admissible_(admissible) {}

NonFiniteState::NonFiniteState(long step)
    : std::runtime_error("non-finite state detected at step " + std::to_string(step)), step_(step) {}

namespace {
bool all_finite(const VectorField& v) {
  for (const auto* f : {&v.x, &v.y}) {
    for (const Complex& c : f->coeff()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
  }
  return true;
}
}  // namespace

double admissible_dt(double max_u, int n, double cfl_safety) {
  return cfl_safety / static_cast<double>(n) / std::max(1.0, max_u);
}

StepResult step_with_diagnostics(const FlowState& state, const GalerkinConfig& config, double dt) {
  const double nu = state.nu;
  const double eta = state.eta;
  const bool nl = config.nonlinear;

  const RhsEval s1 = evaluate_rhs(state.B, nu, eta, nl);
  const double max_u = nl ? max_magnitude(s1.u) : 0.0;
  const double limit = admissible_dt(max_u, state.B.n(), config.cfl_safety);
  if (dt > limit * (1.0 + 1e-12)) throw CflViolation(dt, limit);

  const double half = 0.5 * dt;
  const VectorField b_half = apply_decay(state.B, eta, half);
  const VectorField b_full = apply_decay(state.B, eta, dt);

  const VectorField stage2 = apply_decay(axpy(state.B, half, s1.nonlinear), eta, half);
  const RhsEval s2 = evaluate_rhs(stage2, nu, eta, nl);
  const VectorField stage3 = axpy(b_half, half, s2.nonlinear);
  const RhsEval s3 = evaluate_rhs(stage3, nu, eta, nl);
  const VectorField stage4 = axpy(b_full, dt, apply_decay(s3.nonlinear, eta, half));
  const RhsEval s4 = evaluate_rhs(stage4, nu, eta, nl);

  VectorField increment = apply_decay(s1.nonlinear, eta, dt);
  increment += 2.0 * apply_decay(s2.nonlinear + s3.nonlinear, eta, half);
  increment += s4.nonlinear;
  VectorField next = axpy(b_full, dt / 6.0, increment);
  if (!all_finite(next)) throw NonFiniteState(-1);
  next.divergence_free = true;

  auto d = [](const RhsEval& e) { return e.dissipation_u + e.dissipation_B; };
  const double integral = dt / 6.0 * (d(s1) + 2.0 * d(s2) + 2.0 * d(s3) + d(s4));

  StepResult result{FlowState(state.t + dt, std::move(next), nu, eta), integral, max_u, s1.dissipation_u,
                    s1.dissipation_B};
  return result;
}

FlowState step(const FlowState& state, const GalerkinConfig& config) {
  return step_with_diagnostics(state, config, config.dt).state;
}

IntegrationResult integrate(const FlowState& initial, const GalerkinConfig& config, std::span<const Observer> observers) {
  config.validate();
  IntegrationResult result{initial, {}};
  const double remaining = config.t_end - initial.t;
  if (remaining <= 0.0) return result;

  const double e0 = 0.5 * std::pow(sobolev_norm(initial.B, SobolevIndex(0)), 2);
  const double norm = e0 > 0.0 ? e0 : 1.0;
  EnergyLedger& ledger = result.ledger;
  double cumulative = 0.0;

  auto notify = [&](const FlowState& s, long k) {
    for (const auto& obs : observers) obs(s, k);
  };
  if (config.observer_every > 0) notify(initial, 0);

  const long steps = static_cast<long>(std::ceil(remaining / config.dt - 1e-9));
  FlowState state = initial;
  for (long k = 1; k <= steps; ++k) {
    const double dt = k == steps ? config.t_end - state.t : config.dt;
    StepResult sr = [&] {
      try {
        return step_with_diagnostics(state, config, dt);
      } catch (const NonFiniteState&) {
        throw NonFiniteState(k);
      }
    }();
    if (k == 1) {
      ledger.t.push_back(state.t);
      ledger.energy_B.push_back(e0);
      ledger.dissipation_u.push_back(sr.dissipation_u);
      ledger.dissipation_B.push_back(sr.dissipation_B);
      ledger.balance_residual.push_back(0.0);
      ledger.max_u.push_back(sr.max_u);
      ledger.dt.push_back(0.0);
    }
    cumulative += sr.dissipation_integral;
    state = std::move(sr.state);
    if (k == steps) state.t = config.t_end;

    const double energy = 0.5 * std::pow(sobolev_norm(state.B, SobolevIndex(0)), 2);
    if (!std::isfinite(energy) || !std::isfinite(cumulative)) throw NonFiniteState(k);

    if (k % config.ledger_every == 0 || k == steps) {
      const bool nl = config.nonlinear;
      const VectorField u = nl ? stokes::velocity_from_B(state.B, state.nu).u : VectorField(state.B.grid());
      ledger.t.push_back(state.t);
      ledger.energy_B.push_back(energy);
      ledger.dissipation_u.push_back(state.nu * std::pow(gradient_norm(u), 2));
      ledger.dissipation_B.push_back(state.eta * std::pow(gradient_norm(state.B), 2));
      ledger.balance_residual.push_back((energy - e0 + cumulative) / norm);
      ledger.max_u.push_back(nl ? max_magnitude(u) : 0.0);
      ledger.dt.push_back(dt);
    }
    if (config.observer_every > 0 && (k % config.observer_every == 0 || k == steps)) notify(state, k);
  }
  result.state = std::move(state);
  return result;
}

double dBdt_hminus1_bound_check(const FlowState& state, bool nonlinear) {
  if (state.B.is_zero_field()) throw lorentz::DegenerateInput("dBdt bound: zero field");
  const RhsEval e = evaluate_rhs(state.B, state.nu, state.eta, nonlinear);
  const double lhs = sobolev_norm(e.dBdt, SobolevIndex(-1));
  double rhs = state.eta * sobolev_norm(state.B, SobolevIndex(1));
  if (nonlinear) rhs += 2.0 * l4_norm_exact(state.B) * l4_norm_exact(e.u);
  if (!(rhs > 0.0)) throw lorentz::DegenerateInput("dBdt bound: right-hand side vanishes");
  return lhs / rhs;
}

}  // namespace mhdrelax::dynamics
