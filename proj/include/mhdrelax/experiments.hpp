#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mhdrelax/dynamics.hpp"
#include "mhdrelax/field.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/state.hpp"

namespace mhdrelax::experiments {

/// Named series. Scalars are stored as length-one series so that a report's
/// metrics alone are enough to re-derive its verdict.
using Metrics = std::map<std::string, std::vector<double>>;

struct Criterion {
  std::string name;
  std::string comparator;  // "<=", "<", ">=", "finite"
  double threshold = 0;
  double value = 0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> config;
  Metrics metrics;
  std::vector<Criterion> verdict;
  std::vector<std::string> artifacts;

  bool passed() const;
  double scalar(const std::string& key) const;
};

/// Recomputes the verdict of experiment `name` from metrics only.
/// Throws std::invalid_argument for an unknown name or missing metric.
std::vector<Criterion> evaluate_verdict(const std::string& name, const Metrics& metrics);

/// Writes report.csv (long format: metric,index,value) and verdict.txt into dir,
/// and records both paths in report.artifacts.
void write_report(ExperimentReport& report, const std::filesystem::path& dir);
Metrics read_metrics(const std::filesystem::path& report_csv);
std::string format_verdict(const ExperimentReport& report);

// Plain trajectory with its energy ledger.

ExperimentReport run_energy(const dynamics::GalerkinConfig& config, const VectorField& B0,
                            std::span<const dynamics::Observer> observers = {});

// Continuous dependence.

/// Unit-L2 divergence-free perturbation direction.
VectorField perturbation_direction(TorusGrid grid, std::uint64_t seed);

/// Evolves B0 and B0 + delta * zeta side by side and fits the smallest C with
/// ln|z(t)|^2 - ln|z(0)|^2 <= C * int_0^t (|grad B1|^2 + |grad B2|^2).
/// A CflViolation from the perturbed run propagates.
ExperimentReport run_uniqueness(const dynamics::GalerkinConfig& config, const VectorField& B0, double delta,
                                std::uint64_t seed);

/// One run_uniqueness per delta; adds the log-log slope of |z(T)| against delta.
ExperimentReport run_uniqueness_sweep(const dynamics::GalerkinConfig& config, const VectorField& B0,
                                      const std::vector<double>& deltas, std::uint64_t seed);

// Smoothing.

struct SmoothingOptions {
  std::vector<int> resolutions{64, 128, 256};
  std::vector<double> times{0.0, 0.1, 0.5};
  double check_time = 0.1;
  double exponent = 1.5;
  std::uint64_t seed = 0;
};

/// Tracks |B(t)|_{H^k}, k = 0..3, for matched-phase data across resolutions.
/// All resolutions share one step size, capped by the CFL limit of the finest.
ExperimentReport run_smoothing(const dynamics::GalerkinConfig& config, const SmoothingOptions& options);

// Relaxation.

struct RelaxationOptions {
  double window = 1.0;   // moving-average width in time units
  double t_start = 5.0;  // monotone trend tested from here on
};

/// Observers run at the ledger cadence, which the relaxation diagnostics share.
ExperimentReport run_relaxation(const dynamics::GalerkinConfig& config, const VectorField& B0,
                                const RelaxationOptions& options = {},
                                std::span<const dynamics::Observer> observers = {});

/// |Pi[(B.grad)B]|_{H^-1}: vanishes exactly on stationary Euler states.
double euler_residual(const VectorField& B);

struct FluxDiagnostics {
  SpectralField psi;
  double potential_l2 = 0;
  double b_lower_bound = 0;  // 2 pi |psi|_{L2} <= |B|_{L2}
  double b_l2 = 0;
};

/// psi = Lap^{-1}(d_x B_y - d_y B_x), so B = perp_gradient(psi) for zero-mean,
/// divergence-free B.
FluxDiagnostics flux_function_diagnostics(const VectorField& B);

/// |(u.grad)v|_{H^s} / (|u|_{H^s} |v|_{H^{s+1}}) for integer s >= 2.
/// Returns a zero ratio when u or v vanishes.
lorentz::InequalityRatioReport check_hs_product_inequality(const VectorField& u, const VectorField& v, int s);

/// Smallest c >= 0 with
///   d/dt |B|^2_{H^k} + nu |u|^2_{H^{k+1}} + eta |B|^2_{H^{k+1}}
///     <= c |B|^2_{H^k} (|u|^2_{H^k} + |B|^2_{H^k})
/// at every interior sample, the derivative by centered differences.
/// Needs at least three states.
ExperimentReport check_higher_order_ledger(const std::vector<FlowState>& trajectory, int k);

}  // namespace mhdrelax::experiments
