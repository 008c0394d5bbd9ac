#include "mhdrelax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mhdrelax/corpus.hpp"
#include "mhdrelax/dynamics.hpp"
#include "mhdrelax/experiments.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/state.hpp"
#include "mhdrelax/stokes.hpp"

namespace mhdrelax::verify {
namespace {

using lorentz::InequalityRatioReport;

constexpr double kDBdtSlack = 1e-8;
constexpr double kCancellationTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;
constexpr double kDualityTolerance = 1e-10;
constexpr double kKappas[] = {2.0, 4.0, 8.0, 16.0};
constexpr std::size_t kGreensPoints = 10000;
constexpr std::size_t kBumpCorpus = 50;

io::CsvTable ratio_table() { return io::CsvTable({"seed", "exponent", "lhs", "rhs", "ratio"}); }

std::vector<double> ratio_row(std::uint64_t seed, const InequalityRatioReport& r) {
  return {static_cast<double>(seed), corpus::exponent_of(seed), r.lhs, r.rhs, r.ratio};
}

void track_max(std::map<std::string, double>& m, const std::string& key, double value) {
  auto [it, inserted] = m.emplace(key, value);
  if (!inserted && !(it->second >= value)) it->second = value;  // NaN propagates
}

void track_max(SuiteResult& s, const std::string& key, double value) { track_max(s.maxima, key, value); }
void track_residual(SuiteResult& s, const std::string& key, double value) { track_max(s.residuals, key, value); }

// Per-seed results are computed in parallel into slots, then appended in seed order.
template <class Row>
std::vector<Row> sweep(SeedRange seeds, const std::function<Row(std::uint64_t)>& body) {
  if (seeds.last < seeds.first) throw std::invalid_argument("empty seed range");
  std::vector<Row> rows(seeds.count());
  corpus::parallel_for(rows.size(), [&](std::size_t i) { rows[i] = body(seeds.first + i); });
  return rows;
}

std::uint64_t parse_u64(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty seed");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("seed range must look like a..b");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::vector<double> magnitudes(const VectorField& v) {
  const auto x = v.x.to_physical();
  const auto y = v.y.to_physical();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::hypot(x[i], y[i]);
  return out;
}

}  // namespace

SeedRange parse_seed_range(std::string_view text) {
  const auto dots = text.find("..");
  SeedRange r;
  if (dots == std::string_view::npos) {
    r.first = r.last = parse_u64(text);
  } else {
    r.first = parse_u64(text.substr(0, dots));
    r.last = parse_u64(text.substr(dots + 2));
  }
  if (r.last < r.first) throw std::invalid_argument("seed range is empty");
  return r;
}

void SuiteResult::merge(SuiteResult&& other) {
  for (auto& [k, v] : other.tables) tables.insert_or_assign(k, std::move(v));
  for (auto& [k, v] : other.maxima) track_max(maxima, k, v);
  for (auto& [k, v] : other.residuals) track_max(residuals, k, v);
  for (auto& f : other.hard_failures) hard_failures.push_back(std::move(f));
}

SuiteResult run_lorentz(int n, SeedRange seeds) {
  const TorusGrid grid(n);
  struct Row {
    InequalityRatioReport lady, weak_lady, weak_strong, bmo_strong, bmo_weak;
    std::vector<InequalityRatioReport> bernstein;
    double weak_l2 = 0, l2 = 0, interp = 0;
  };
  const auto rows = sweep<Row>(seeds, [&](std::uint64_t seed) {
    const SpectralField f = corpus::member(grid, seed).x;
    Row r;
    r.lady = lorentz::check_ladyzhenskaya(f);
    r.weak_lady = lorentz::check_weak_ladyzhenskaya(f);
    r.weak_strong = lorentz::check_weak_strong_interpolation(f, 2.0, 3.0, 4.0);
    const auto bmo = lorentz::check_bmo_interpolation(f, 2.0, 4.0);
    r.bmo_strong = bmo.strong;
    r.bmo_weak = bmo.weak;
    for (double kappa : kKappas) r.bernstein.push_back(lorentz::check_bernstein(lorentz::band_limit(f, kappa), kappa));
    r.weak_l2 = lorentz::weak_lp_quasinorm(f, 2.0).value;
    r.l2 = sobolev_norm(f, SobolevIndex(0));
    r.interp = lorentz::interpolation_quasinorm(f, 0.5);
    return r;
  });

  SuiteResult s;
  auto lady = ratio_table(), weak_lady = ratio_table(), weak_strong = ratio_table();
  auto bmo_strong = ratio_table(), bmo_weak = ratio_table();
  io::CsvTable bernstein({"seed", "exponent", "kappa", "lhs", "rhs", "ratio"});
  io::CsvTable chebyshev({"seed", "exponent", "weak_l2", "l2", "ratio"});
  io::CsvTable equivalence({"seed", "exponent", "interpolation_quasinorm", "weak_l2", "ratio"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::uint64_t seed = seeds.first + i;
    const Row& r = rows[i];
    lady.add_row(ratio_row(seed, r.lady));
    weak_lady.add_row(ratio_row(seed, r.weak_lady));
    weak_strong.add_row(ratio_row(seed, r.weak_strong));
    bmo_strong.add_row(ratio_row(seed, r.bmo_strong));
    bmo_weak.add_row(ratio_row(seed, r.bmo_weak));
    track_max(s, "ladyzhenskaya", r.lady.ratio);
    track_max(s, "weak_ladyzhenskaya", r.weak_lady.ratio);
    track_max(s, "weak_strong_interpolation", r.weak_strong.ratio);
    track_max(s, "bmo_interpolation_strong", r.bmo_strong.ratio);
    track_max(s, "bmo_interpolation_weak", r.bmo_weak.ratio);
    for (std::size_t k = 0; k < r.bernstein.size(); ++k) {
      const auto& b = r.bernstein[k];
      bernstein.add_row(std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), kKappas[k], b.lhs,
                                            b.rhs, b.ratio});
      track_max(s, "bernstein", b.ratio);
    }
    chebyshev.add_row(std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.weak_l2, r.l2,
                                          r.weak_l2 / r.l2});
    const double equiv = r.interp / r.weak_l2;
    equivalence.add_row(
        std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.interp, r.weak_l2, equiv});
    track_max(s, "interpolation_equivalence", equiv);

    const std::string tag = " (seed " + std::to_string(seed) + ")";
    if (r.weak_l2 > r.l2 * (1.0 + 1e-12)) s.hard_failures.push_back("chebyshev: weak-L2 exceeds L2" + tag);
    if (r.bmo_weak.ratio > r.bmo_strong.ratio * (1.0 + 1e-12)) {
      s.hard_failures.push_back("bmo_interpolation: weak ratio exceeds strong ratio" + tag);
    }
    // sup_t t^{-1/2} int_0^t f* <= 2 sup_s s^{1/2} f*(s)
    if (equiv > 2.0 * (1.0 + 1e-12)) s.hard_failures.push_back("interpolation_equivalence above 2" + tag);
  }
  s.tables.emplace("ladyzhenskaya", std::move(lady));
  s.tables.emplace("weak_ladyzhenskaya", std::move(weak_lady));
  s.tables.emplace("weak_strong_interpolation", std::move(weak_strong));
  s.tables.emplace("bmo_interpolation_strong", std::move(bmo_strong));
  s.tables.emplace("bmo_interpolation_weak", std::move(bmo_weak));
  s.tables.emplace("bernstein", std::move(bernstein));
  s.tables.emplace("chebyshev", std::move(chebyshev));
  s.tables.emplace("interpolation_equivalence", std::move(equivalence));
  return s;
}

GreensBoundResult greens_bound_sweep(double nu, std::size_t points, std::uint64_t seed, io::CsvTable* rows) {
  GreensBoundResult out;
  for (std::size_t p = 0; p < points; ++p) {
    const double radius = std::pow(10.0, -3.0 + 6.0 * hashed_uniform(seed, p, 1));
    const double angle = 2.0 * std::numbers::pi * hashed_uniform(seed, p, 2);
    const stokes::Point2 x{radius * std::cos(angle), radius * std::sin(angle)};
    const auto g = stokes::greens_eval(x, nu);
    const double bound = stokes::greens_gradient_bound(x, nu);
    double worst = 0.0;
    for (const auto& a : g.grad_u) {
      for (const auto& b : a) {
        for (double v : b) worst = std::max(worst, std::abs(v));
      }
    }
    if (worst > bound) ++out.violations;
    out.worst_scaled = std::max(out.worst_scaled, worst / bound);
    ++out.evaluated;
    if (rows) rows->add_row(std::vector<double>{nu, x[0], x[1], worst, bound});
  }
  return out;
}

SuiteResult run_stokes(int n, SeedRange seeds) {
  SuiteResult s;
  io::CsvTable greens({"nu", "x", "y", "max_abs_grad_u", "bound"});
  for (double nu : {0.1, 1.0, 10.0}) {
    const auto g = greens_bound_sweep(nu, kGreensPoints, 17, &greens);
    track_max(s, "greens_gradient_scaled", g.worst_scaled);
    if (g.violations > 0) {
      s.hard_failures.push_back("greens_bound: " + std::to_string(g.violations) + " violations at nu=" +
                                io::format_double(nu));
    }
  }
  s.tables.emplace("greens_bound", std::move(greens));

  const TorusGrid grid(n);
  constexpr double nu = 1.0;
  struct Row {
    double residual = 0, duality = 0, weak_u = 0, b_sq = 0;
  };
  const auto rows = sweep<Row>(seeds, [&](std::uint64_t seed) {
    const VectorField B = corpus::member(grid, seed);
    const VectorField forcing = advective_term(B, B);
    const auto sol = stokes::solve_stokes(forcing, nu);
    Row r;
    r.residual = stokes::stokes_residual(sol, forcing, nu);
    const double dissipation = nu * std::pow(gradient_norm(sol.u), 2);
    r.duality = std::abs(dissipation - inner(forcing, sol.u)) / dissipation;
    r.weak_u = lorentz::weak_lp_quasinorm(magnitudes(sol.u), grid.cell_measure(), 2.0).value;
    r.b_sq = std::pow(sobolev_norm(B, SobolevIndex(0)), 2);
    return r;
  });
  io::CsvTable residual({"seed", "exponent", "relative_residual", "energy_duality_defect"});
  io::CsvTable weak_u({"seed", "exponent", "u_weak_l2", "b_l2_squared", "ratio"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::uint64_t seed = seeds.first + i;
    const Row& r = rows[i];
    residual.add_row(std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.residual, r.duality});
    weak_u.add_row(
        std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.weak_u, r.b_sq, r.weak_u / r.b_sq});
    track_residual(s, "stokes_residual", r.residual);
    track_residual(s, "energy_duality", r.duality);
    track_max(s, "velocity_weak_l2", r.weak_u / r.b_sq);
    const std::string tag = " (seed " + std::to_string(seed) + ")";
    if (!(r.residual < kResidualTolerance)) s.hard_failures.push_back("stokes_residual" + tag);
    if (!(r.duality < kDualityTolerance)) s.hard_failures.push_back("energy_duality" + tag);
  }
  s.tables.emplace("stokes_residual", std::move(residual));
  s.tables.emplace("velocity_weak_l2", std::move(weak_u));

  // Free-space weak Young ratio on bump-supported magnetic stresses.
  const stokes::FreeSpaceGrid box{n, 2.0};
  const double kernel = stokes::kernel_weak_l2(box, nu);
  const SeedRange bumps{seeds.first, std::min(seeds.last, seeds.first + kBumpCorpus - 1)};
  const auto young = sweep<std::array<double, 3>>(bumps, [&](std::uint64_t seed) {
    std::array<stokes::Bump, 2> pair;
    for (std::uint64_t k = 0; k < pair.size(); ++k) {
      auto& b = pair[k];
      b.center = {0.6 * hashed_uniform(seed, 31, k, 0) - 0.3, 0.6 * hashed_uniform(seed, 31, k, 1) - 0.3};
      b.radius = 0.3 + 0.3 * hashed_uniform(seed, 31, k, 2);
      b.amplitude = (0.5 + 1.5 * hashed_uniform(seed, 31, k, 3)) * (k == 0 ? 1.0 : -1.0);
    }
    const auto f = stokes::magnetic_stress(box, pair);
    const auto u = stokes::solve_stokes_freespace(f, nu);
    return std::array<double, 3>{stokes::tensor_l1_norm(f), stokes::velocity_weak_l2(u).value, 0.0};
  });
  io::CsvTable young_table({"seed", "f_l1", "kernel_weak_l2", "u_weak_l2", "ratio"});
  for (std::size_t i = 0; i < young.size(); ++i) {
    const double ratio = stokes::check_weak_young(young[i][0], kernel, young[i][1]);
    young_table.add_row(std::vector<double>{static_cast<double>(bumps.first + i), young[i][0], kernel, young[i][1], ratio});
    track_max(s, "weak_young", ratio);
  }
  s.tables.emplace("weak_young", std::move(young_table));
  return s;
}

SuiteResult run_dynamics(int n, SeedRange seeds) {
  const TorusGrid grid(n);
  constexpr double nu = 1.0;
  constexpr double eta = 0.1;
  struct Row {
    double dbdt = 0, advect = 0, stretch = 0;
    InequalityRatioReport hs;
  };
  const auto rows = sweep<Row>(seeds, [&](std::uint64_t seed) {
    const VectorField B = corpus::member(grid, seed);
    const FlowState state(0.0, B, nu, eta);
    Row r;
    r.dbdt = dynamics::dBdt_hminus1_bound_check(state);
    const VectorField u = stokes::velocity_from_B(B, nu).u;
    const VectorField uB = advective_term(u, B);
    const VectorField Bu = advective_term(B, u);
    const VectorField BB = advective_term(B, B);
    const double b = sobolev_norm(B, SobolevIndex(0));
    const double uu = sobolev_norm(u, SobolevIndex(0));
    r.advect = std::abs(inner(leray_project(uB), B)) / (sobolev_norm(uB, SobolevIndex(0)) * b);
    r.stretch = std::abs(inner(leray_project(Bu), B) + inner(BB, u)) /
                (sobolev_norm(Bu, SobolevIndex(0)) * b + sobolev_norm(BB, SobolevIndex(0)) * uu);
    r.hs = experiments::check_hs_product_inequality(B, B, 2);
    return r;
  });
  SuiteResult s;
  io::CsvTable dbdt({"seed", "exponent", "ratio"});
  io::CsvTable cancel({"seed", "exponent", "advection_defect", "stretching_defect"});
  auto hs = ratio_table();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::uint64_t seed = seeds.first + i;
    const Row& r = rows[i];
    dbdt.add_row(std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.dbdt});
    cancel.add_row(std::vector<double>{static_cast<double>(seed), corpus::exponent_of(seed), r.advect, r.stretch});
    hs.add_row(ratio_row(seed, r.hs));
    track_max(s, "dBdt_bound", r.dbdt);
    track_residual(s, "cancellation", std::max(r.advect, r.stretch));
    track_max(s, "hs_product", r.hs.ratio);
    const std::string tag = " (seed " + std::to_string(seed) + ")";
    if (!(r.dbdt <= 1.0 + kDBdtSlack)) s.hard_failures.push_back("dBdt_bound ratio above 1" + tag);
    if (!(std::max(r.advect, r.stretch) < kCancellationTolerance)) s.hard_failures.push_back("cancellation" + tag);
  }
  s.tables.emplace("dBdt_bound", std::move(dbdt));
  s.tables.emplace("cancellation", std::move(cancel));
  s.tables.emplace("hs_product", std::move(hs));
  return s;
}

SuiteResult run_suite(std::string_view suite, int n, SeedRange seeds) {
  if (suite == "lorentz") return run_lorentz(n, seeds);
  if (suite == "stokes") return run_stokes(n, seeds);
  if (suite == "dynamics") return run_dynamics(n, seeds);
  if (suite == "all") {
    SuiteResult s = run_lorentz(n, seeds);
    s.merge(run_stokes(n, seeds));
    s.merge(run_dynamics(n, seeds));
    return s;
  }
  throw std::invalid_argument("unknown suite '" + std::string(suite) + "' (expected lorentz, stokes, dynamics or all)");
}

void write_suite(const SuiteResult& result, const std::filesystem::path& dir) {
  for (const auto& [stem, table] : result.tables) io::write_csv(dir / (stem + ".csv"), table);
  io::CsvTable summary({"quantity", "kind", "corpus_max"});
  for (const auto& [key, value] : result.maxima)
    summary.add_row(std::vector<std::string>{key, "ratio", io::format_double(value)});
  for (const auto& [key, value] : result.residuals)
    summary.add_row(std::vector<std::string>{key, "residual", io::format_double(value)});
  io::write_csv(dir / "summary.csv", summary);
}

}  // namespace mhdrelax::verify
