#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdrelax/field.hpp"
#include "mhdrelax/io.hpp"
#include "mhdrelax/state.hpp"

namespace mhdrelax::dynamics {

enum class Integrator { if_rk4 };

/// Galerkin run settings. The retained space is the Fourier truncation of the
/// n x n grid, so the Galerkin projection is the truncation itself.
struct GalerkinConfig {
  int n = 64;
  double nu = 1.0;
  double eta = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  Integrator integrator = Integrator::if_rk4;
  bool nonlinear = true;  // false drops the induction terms (diffusion only)
  int ledger_every = 1;
  int observer_every = 0;  // 0: observers never called

  void validate() const;
};

/// Right-hand side of the B equation with its by-products.
struct RhsEval {
  VectorField dBdt;           // eta Lap B + Pi[(B.grad)u - (u.grad)B]
  VectorField nonlinear;      // Pi[(B.grad)u - (u.grad)B], zero mean
  VectorField u;              // Stokes velocity slaved to B
  double dissipation_u = 0;   // nu ||grad u||^2
  double dissipation_B = 0;   // eta ||grad B||^2
};

RhsEval evaluate_rhs(const VectorField& B, double nu, double eta, bool nonlinear = true);
VectorField rhs(const VectorField& B, double nu, double eta, bool nonlinear = true);

/// Columns: t, energy_B (= ||B||^2/2), dissipation_u, dissipation_B,
/// balance_residual ((E(t) - E(0) + int_0^t D) / E(0)), max_u, dt.
struct EnergyLedger {
  std::vector<double> t;
  std::vector<double> energy_B;
  std::vector<double> dissipation_u;
  std::vector<double> dissipation_B;
  std::vector<double> balance_residual;
  std::vector<double> max_u;
  std::vector<double> dt;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  io::CsvTable to_csv() const;
  double max_abs_residual() const;
};

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double requested, double admissible);
  double requested_dt() const { return requested_; }
  double admissible_dt() const { return admissible_; }

 private:
  double requested_;
  double admissible_;
};

class NonFiniteState : public std::runtime_error {
 public:
  explicit NonFiniteState(long step);
  long step_index() const { return step_; }

 private:
  long step_;
};

/// cfl_safety * (1/n) / max(1, max|u|).
double admissible_dt(double max_u, int n, double cfl_safety);

struct StepResult {
  FlowState state;
  double dissipation_integral = 0.0;  // int over the step of nu||grad u||^2 + eta||grad B||^2
  double max_u = 0.0;                 // at the start of the step
  double dissipation_u = 0.0;         // at the start of the step
  double dissipation_B = 0.0;
};

/// One integrating-factor RK4 step of size dt: diffusion through the exact
/// multiplier exp(-4 pi^2 eta |k|^2 dt), the nonlinearity by classical RK4 in
/// the transformed variable. The dissipation integral is advanced with the
/// same stage weights. Throws CflViolation when dt exceeds the admissible step
/// and NonFiniteState (step index -1) when the update is not finite.
StepResult step_with_diagnostics(const FlowState& state, const GalerkinConfig& config, double dt);
FlowState step(const FlowState& state, const GalerkinConfig& config);

using Observer = std::function<void(const FlowState&, long step)>;

struct IntegrationResult {
  FlowState state;
  EnergyLedger ledger;
};

/// Advances to config.t_end (the last step is shortened to land on it).
/// Throws NonFiniteState with the step index on NaN/overflow.
IntegrationResult integrate(const FlowState& initial, const GalerkinConfig& config,
                            std::span<const Observer> observers = {});

/// ||dB/dt||_{H^{-1}} / (eta ||B||_{H^1} + 2 ||B||_{L^4} ||u||_{L^4}); at most 1.
double dBdt_hminus1_bound_check(const FlowState& state, bool nonlinear = true);

}  // namespace mhdrelax::dynamics
