#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mhdrelax/dynamics.hpp"
#include "mhdrelax/init.hpp"

namespace mhdrelax::config {

/// Carries the dotted key that failed validation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat view of a config file: "section.key" -> raw value text (strings unquoted).
using KeyValues = std::map<std::string, std::string>;

/// Accepts `[section]` / `[a.b]` headers, `key = value` lines, `#` comments,
/// quoted strings, numbers, booleans and single-line arrays.
KeyValues parse_text(std::string_view text);
KeyValues parse_file(const std::string& path);

/// Applies one "key=value" override; later calls win.
void apply_override(KeyValues& kv, std::string_view assignment);

struct RunConfig {
  int n = 0;
  double nu = 0;
  double eta = 0;
  double dt = 0;
  double t_end = 0;
  double cfl_safety = 0.5;
  InitSpec init;
  std::string output_dir = "out";
  int cadence = 0;       // steps between snapshots; 0 disables them
  int ledger_every = 1;  // steps between ledger rows
  std::string experiment = "energy";
  std::map<std::string, std::string> params;  // experiment.params.*

  dynamics::GalerkinConfig galerkin() const;
  double param(const std::string& key, double fallback) const;
  std::vector<double> param_list(const std::string& key, std::vector<double> fallback) const;
};

/// Validates in a fixed key order and throws ConfigError naming the first
/// missing or invalid key. Unknown keys outside experiment.params are errors.
RunConfig build(const KeyValues& kv);

/// Canonical TOML text of the resolved configuration.
std::string echo(const RunConfig& cfg);

/// Parses "[a, b, c]" or a bare scalar into doubles.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace mhdrelax::config
