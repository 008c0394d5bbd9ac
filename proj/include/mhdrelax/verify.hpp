#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mhdrelax/io.hpp"

namespace mhdrelax::verify {

/// Inclusive seed interval, written "a..b" on the command line.
struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 99;
  std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};
SeedRange parse_seed_range(std::string_view text);

struct SuiteResult {
  std::map<std::string, io::CsvTable> tables;  // CSV stem -> rows
  std::map<std::string, double> maxima;        // inequality ratio -> corpus maximum
  std::map<std::string, double> residuals;     // exactness defect -> corpus maximum
  std::vector<std::string> hard_failures;      // violated exact invariants

  bool ok() const { return hard_failures.empty(); }
  void merge(SuiteResult&& other);
};

/// Lorentz-space inequality ratios on corpus fields (x component), one row per seed.
SuiteResult run_lorentz(int n, SeedRange seeds);

/// Green's gradient bound at 10^4 points for each nu in {0.1, 1, 10}; spectral
/// residual and energy duality per corpus field; weak-L2 velocity constant; weak
/// Young ratio on up to 50 bump forcings.
SuiteResult run_stokes(int n, SeedRange seeds);

/// Time-derivative bound ratio, semi-discrete cancellations and the H^2
/// product inequality per corpus field.
SuiteResult run_dynamics(int n, SeedRange seeds);

/// suite in {lorentz, stokes, dynamics, all}; std::invalid_argument otherwise.
SuiteResult run_suite(std::string_view suite, int n, SeedRange seeds);

void write_suite(const SuiteResult& result, const std::filesystem::path& dir);

/// Green's-gradient check: largest |d_k U_ij(x)| * pi nu |x| over `points`
/// deterministic points with |x| log-uniform in [1e-3, 1e3].
struct GreensBoundResult {
  double worst_scaled = 0;
  std::size_t violations = 0;
  std::size_t evaluated = 0;
};
GreensBoundResult greens_bound_sweep(double nu, std::size_t points, std::uint64_t seed, io::CsvTable* rows = nullptr);

}  // namespace mhdrelax::verify
