#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>

#include "mhdrelax/config.hpp"
#include "mhdrelax/experiments.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/io.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/snapshot.hpp"
#include "mhdrelax/stokes.hpp"
#include "mhdrelax/verify.hpp"

namespace mhdrelax::cli {
namespace fs = std::filesystem;
namespace {

struct RunArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
};

struct VerifyArgs {
  std::string suite = "all";
  std::string seeds = "0..99";
  std::string output_dir = "verify-out";
  int n = 64;
};

struct StokesArgs {
  std::string input;
  std::string output_dir = "stokes-out";
  double nu = 1.0;
};

struct ReportArgs {
  std::string input;
};

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%08ld.smhd", step);
  return buf;
}

io::CsvTable ledger_table(const experiments::Metrics& m) {
  dynamics::EnergyLedger ledger;
  auto take = [&](const char* key, std::vector<double>& dst) {
    if (auto it = m.find(key); it != m.end()) dst = it->second;
  };
  take("t", ledger.t);
  take("energy_B", ledger.energy_B);
  take("dissipation_u", ledger.dissipation_u);
  take("dissipation_B", ledger.dissipation_B);
  take("balance_residual", ledger.balance_residual);
  take("max_u", ledger.max_u);
  take("dt", ledger.dt);
  return ledger.to_csv();
}

int finish(experiments::ExperimentReport& report, const fs::path& dir, std::ostream& out) {
  experiments::write_report(report, dir);
  out << experiments::format_verdict(report);
  return report.passed() ? kPass : kVerdictFailure;
}

int cmd_run(const RunArgs& args, std::ostream& out) {
  config::KeyValues kv = config::parse_file(args.config_path);
  for (const auto& o : args.overrides) config::apply_override(kv, o);
  if (!args.output_dir.empty()) kv["output.dir"] = args.output_dir;
  const config::RunConfig cfg = config::build(kv);

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  io::write_file_atomic(dir / "config.echo.toml", config::echo(cfg));

  const TorusGrid grid(cfg.n);
  dynamics::GalerkinConfig galerkin = cfg.galerkin();
  const auto seed = cfg.init.seed;

  std::vector<dynamics::Observer> observers;
  if (cfg.cadence > 0) {
    fs::create_directories(dir / "snapshots");
    observers.emplace_back([dir](const FlowState& s, long step) {
      write_snapshot(dir / "snapshots" / snapshot_name(step), snapshot_of(s.B, s.t));
    });
  }

  experiments::ExperimentReport report;
  const std::string& name = cfg.experiment;
  if (name == "energy" || name == "relaxation") {
    const VectorField B0 = init_field(grid, cfg.init);
    if (name == "energy") {
      galerkin.observer_every = cfg.cadence;
      report = experiments::run_energy(galerkin, B0, observers);
    } else {
      // Relaxation observers share the ledger cadence.
      experiments::RelaxationOptions opt;
      opt.window = cfg.param("window", opt.window);
      opt.t_start = cfg.param("t_start", opt.t_start);
      report = experiments::run_relaxation(galerkin, B0, opt, observers);
    }
    io::write_csv(dir / "ledger.csv", ledger_table(report.metrics));
    report.artifacts.push_back((dir / "ledger.csv").string());
  } else if (name == "uniqueness") {
    const VectorField B0 = init_field(grid, cfg.init);
    const auto pseed = static_cast<std::uint64_t>(cfg.param("perturbation_seed", static_cast<double>(seed + 1)));
    const auto deltas = cfg.param_list("deltas", {});
    if (deltas.empty()) {
      report = experiments::run_uniqueness(galerkin, B0, cfg.param("delta", 1e-5), pseed);
    } else {
      report = experiments::run_uniqueness_sweep(galerkin, B0, deltas, pseed);
    }
  } else if (name == "smoothing") {
    experiments::SmoothingOptions opt;
    opt.exponent = cfg.init.spectrum_exponent;
    opt.seed = seed;
    opt.check_time = cfg.param("check_time", opt.check_time);
    opt.times = cfg.param_list("times", opt.times);
    opt.resolutions.clear();
    for (double r : cfg.param_list("resolutions", {64, 128, 256})) opt.resolutions.push_back(static_cast<int>(r));
    report = experiments::run_smoothing(galerkin, opt);
  } else if (name == "higher_order_ledger") {
    const int k = static_cast<int>(cfg.param("k", 1));
    std::vector<FlowState> trajectory;
    galerkin.observer_every = cfg.cadence > 0 ? cfg.cadence : cfg.ledger_every;
    observers.emplace_back([&trajectory](const FlowState& s, long) { trajectory.push_back(s); });
    dynamics::integrate(FlowState(0.0, init_field(grid, cfg.init), cfg.nu, cfg.eta), galerkin, observers);
    report = experiments::check_higher_order_ledger(trajectory, k);
  } else {
    throw config::ConfigError("experiment.name", "unknown experiment '" + name + "'");
  }
  return finish(report, dir, out);
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const auto seeds = verify::parse_seed_range(args.seeds);
  const auto result = verify::run_suite(args.suite, args.n, seeds);
  const fs::path dir = args.output_dir;
  fs::create_directories(dir);
  verify::write_suite(result, dir);
  for (const auto& [key, value] : result.maxima) out << key << " max " << io::format_double(value) << '\n';
  for (const auto& [key, value] : result.residuals) out << key << " residual max " << io::format_double(value) << '\n';
  for (const auto& f : result.hard_failures) out << "violation: " << f << '\n';
  return result.ok() ? kPass : kVerdictFailure;
}

int cmd_stokes(const StokesArgs& args, std::ostream& out) {
  if (!(args.nu > 0.0)) throw std::invalid_argument("--nu must be positive");
  const Snapshot snap = read_snapshot(args.input);
  const fs::path dir = args.output_dir;
  fs::create_directories(dir);
  io::CsvTable summary({"quantity", "value"});
  Snapshot result;
  result.n = snap.n;
  result.t = snap.t;
  if (snap.box_size) {
    // Free-space: four stress components f_kj at index 2k + j.
    if (snap.components.size() != 4) throw SnapshotError("free-space snapshot must carry 4 stress components");
    stokes::TensorSamples f(stokes::FreeSpaceGrid{static_cast<int>(snap.n), *snap.box_size});
    for (int c = 0; c < 4; ++c) f.f[c] = snap.components[c];
    const auto u = stokes::solve_stokes_freespace(f, args.nu);
    result.components = {u.ux, u.uy};
    result.box_size = snap.box_size;
    summary.add_row(std::vector<std::string>{"f_l1", io::format_double(stokes::tensor_l1_norm(f))});
    summary.add_row(std::vector<std::string>{"u_weak_l2", io::format_double(stokes::velocity_weak_l2(u).value)});
  } else {
    const VectorField B = vector_field_from(snap);
    if (!is_divergence_free(B)) throw SnapshotError("snapshot field is not divergence-free");
    const VectorField forcing = advective_term(B, B);
    const auto sol = stokes::solve_stokes(forcing, args.nu);
    result.components = {sol.u.x.to_physical(), sol.u.y.to_physical(), sol.p_star.to_physical()};
    summary.add_row(std::vector<std::string>{"relative_residual",
                                             io::format_double(stokes::stokes_residual(sol, forcing, args.nu))});
    summary.add_row(
        std::vector<std::string>{"dissipation", io::format_double(args.nu * std::pow(gradient_norm(sol.u), 2))});
  }
  write_snapshot(dir / "velocity.smhd", result);
  io::write_csv(dir / "stokes_summary.csv", summary);
  out << summary.to_string();
  return kPass;
}

int cmd_report(const ReportArgs& args, std::ostream& out) {
  const fs::path dir = args.input;
  const std::string verdict = io::read_file(dir / "verdict.txt");
  const std::string prefix = "experiment ";
  if (!verdict.starts_with(prefix)) throw std::runtime_error("verdict.txt lacks its experiment line");
  experiments::ExperimentReport report;
  report.name = verdict.substr(prefix.size(), verdict.find('\n') - prefix.size());
  report.metrics = experiments::read_metrics(dir / "report.csv");
  report.verdict = experiments::evaluate_verdict(report.name, report.metrics);
  out << experiments::format_verdict(report);
  return report.passed() ? kPass : kVerdictFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stokes-MHD relaxation simulator and inequality verification suite", "mhdrelax"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  run->add_option("--config", run_args.config_path, "TOML config file")->required();
  run->add_option("--set", run_args.overrides, "Override key=value (repeatable, last wins)");
  run->add_option("--output-dir", run_args.output_dir, "Override output.dir");

  VerifyArgs verify_args;
  auto* ver = app.add_subcommand("verify", "Corpus sweeps of the inequality checks");
  ver->add_option("--suite", verify_args.suite, "lorentz, stokes, dynamics or all");
  ver->add_option("--seeds", verify_args.seeds, "Seed range a..b (inclusive)");
  ver->add_option("--output-dir", verify_args.output_dir, "Directory for the CSV files");
  ver->add_option("--n", verify_args.n, "Grid size");

  StokesArgs stokes_args;
  auto* sto = app.add_subcommand("stokes", "One-shot Stokes solve from a snapshot");
  sto->add_option("--input", stokes_args.input, "SMHD snapshot")->required();
  sto->add_option("--output-dir", stokes_args.output_dir, "Directory for the result");
  sto->add_option("--nu", stokes_args.nu, "Viscosity");

  ReportArgs report_args;
  auto* rep = app.add_subcommand("report", "Re-evaluate a verdict from an existing report.csv");
  rep->add_option("--input", report_args.input, "Experiment output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kError;
  }

  try {
    if (*run) return cmd_run(run_args, out);
    if (*ver) return cmd_verify(verify_args, out);
    if (*sto) return cmd_stokes(stokes_args, out);
    return cmd_report(report_args, out);
  } catch (const config::ConfigError& e) {
    err << "error: invalid config: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kError;
}

}  // namespace mhdrelax::cli
