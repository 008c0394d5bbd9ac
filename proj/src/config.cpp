#include "mhdrelax/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "mhdrelax/io.hpp"

namespace mhdrelax::config {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(std::string_view v, const std::string& key) {
  if (!v.empty() && v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ConfigError(key, "unterminated string");
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) throw ConfigError(key, "not a finite number: '" + text + "'");
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "not an integer: '" + text + "'");
  return value;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "grid.n",       "params.nu",         "params.eta",     "time.dt",
      "time.t_end",   "time.cfl_safety",   "init.kind",      "init.seed",
      "init.spectrum_exponent", "init.amplitude", "init.path", "output.dir",
      "output.cadence", "output.ledger_every", "experiment.name"};
  return keys;
}

constexpr std::string_view kParamPrefix = "experiment.params.";

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

KeyValues parse_text(std::string_view text) {
  KeyValues kv;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(where, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected key = value");
    const std::string key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    kv[full] = unquote(trim(line.substr(eq + 1)), full);
  }
  return kv;
}

KeyValues parse_file(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("config", e.what());
  }
  return parse_text(text);
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(assignment), "override must be key=value");
  const std::string key = std::string(trim(assignment.substr(0, eq)));
  if (key.empty()) throw ConfigError(std::string(assignment), "override has an empty key");
  kv[key] = unquote(trim(assignment.substr(eq + 1)), key);
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw std::invalid_argument("unterminated array");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string item(trim(text.substr(0, comma)));
    if (!item.empty()) out.push_back(to_double("list", item));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

dynamics::GalerkinConfig RunConfig::galerkin() const {
  dynamics::GalerkinConfig c;
  c.n = n;
  c.nu = nu;
  c.eta = eta;
  c.dt = dt;
  c.t_end = t_end;
  c.cfl_safety = cfl_safety;
  c.ledger_every = ledger_every;
  return c;
}

double RunConfig::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return to_double(std::string(kParamPrefix) + key, it->second);
}

std::vector<double> RunConfig::param_list(const std::string& key, std::vector<double> fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return parse_number_list(it->second);
  } catch (const std::exception& e) {
    throw ConfigError(std::string(kParamPrefix) + key, e.what());
  }
}

RunConfig build(const KeyValues& kv) {
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(key, "missing required key");
    return it->second;
  };
  auto optional = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  const long long n = to_integer("grid.n", require("grid.n"));
  if (n < 4 || n % 2 != 0 || n > (1 << 14)) throw ConfigError("grid.n", "must be an even integer >= 4");
  cfg.n = static_cast<int>(n);

  cfg.nu = to_double("params.nu", require("params.nu"));
  if (!(cfg.nu > 0)) throw ConfigError("params.nu", "must be positive");
  cfg.eta = to_double("params.eta", require("params.eta"));
  if (!(cfg.eta >= 0)) throw ConfigError("params.eta", "must be nonnegative");

  cfg.dt = to_double("time.dt", require("time.dt"));
  if (!(cfg.dt > 0)) throw ConfigError("time.dt", "must be positive");
  cfg.t_end = to_double("time.t_end", require("time.t_end"));
  if (!(cfg.t_end >= 0)) throw ConfigError("time.t_end", "must be nonnegative");
  if (const auto* v = optional("time.cfl_safety")) {
    cfg.cfl_safety = to_double("time.cfl_safety", *v);
    if (!(cfg.cfl_safety > 0 && cfg.cfl_safety <= 1)) throw ConfigError("time.cfl_safety", "must lie in (0, 1]");
  }

  if (const auto* v = optional("init.kind")) {
    try {
      cfg.init.kind = parse_init_kind(*v);
    } catch (const std::exception& e) {
      throw ConfigError("init.kind", e.what());
    }
  }
  if (const auto* v = optional("init.seed")) {
    const long long seed = to_integer("init.seed", *v);
    if (seed < 0) throw ConfigError("init.seed", "must be nonnegative");
    cfg.init.seed = static_cast<std::uint64_t>(seed);
  }
  if (const auto* v = optional("init.spectrum_exponent")) {
    cfg.init.spectrum_exponent = to_double("init.spectrum_exponent", *v);
    if (!(cfg.init.spectrum_exponent > 0)) throw ConfigError("init.spectrum_exponent", "must be positive");
  }
  if (const auto* v = optional("init.amplitude")) {
    cfg.init.amplitude = to_double("init.amplitude", *v);
    if (!(cfg.init.amplitude > 0)) throw ConfigError("init.amplitude", "must be positive");
  }
  if (const auto* v = optional("init.path")) cfg.init.path = *v;
  if (cfg.init.kind == InitKind::from_file && cfg.init.path.empty()) {
    throw ConfigError("init.path", "required when init.kind = from_file");
  }

  if (const auto* v = optional("output.dir")) {
    if (v->empty()) throw ConfigError("output.dir", "must not be empty");
    cfg.output_dir = *v;
  }
  if (const auto* v = optional("output.cadence")) {
    const long long c = to_integer("output.cadence", *v);
    if (c < 0) throw ConfigError("output.cadence", "must be nonnegative");
    cfg.cadence = static_cast<int>(c);
  }
  if (const auto* v = optional("output.ledger_every")) {
    const long long c = to_integer("output.ledger_every", *v);
    if (c < 1) throw ConfigError("output.ledger_every", "must be >= 1");
    cfg.ledger_every = static_cast<int>(c);
  }
  if (const auto* v = optional("experiment.name")) cfg.experiment = *v;

  for (const auto& [key, value] : kv) {
    if (key.starts_with(kParamPrefix)) {
      cfg.params[key.substr(kParamPrefix.size())] = value;
    } else if (!known_keys().contains(key)) {
      throw ConfigError(key, "unknown key");
    }
  }
  return cfg;
}

std::string echo(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[grid]\nn = " << cfg.n << "\n\n";
  out << "[params]\nnu = " << io::format_double(cfg.nu) << "\neta = " << io::format_double(cfg.eta) << "\n\n";
  out << "[time]\ndt = " << io::format_double(cfg.dt) << "\nt_end = " << io::format_double(cfg.t_end)
      << "\ncfl_safety = " << io::format_double(cfg.cfl_safety) << "\n\n";
  out << "[init]\nkind = \"" << to_string(cfg.init.kind) << "\"\nseed = " << cfg.init.seed
      << "\nspectrum_exponent = " << io::format_double(cfg.init.spectrum_exponent)
      << "\namplitude = " << io::format_double(cfg.init.amplitude) << '\n';
  if (!cfg.init.path.empty()) out << "path = \"" << cfg.init.path << "\"\n";
  out << "\n[output]\ndir = \"" << cfg.output_dir << "\"\ncadence = " << cfg.cadence
      << "\nledger_every = " << cfg.ledger_every << "\n\n";
  out << "[experiment]\nname = \"" << cfg.experiment << "\"\n";
  if (!cfg.params.empty()) {
    out << "\n[experiment.params]\n";
    for (const auto& [key, value] : cfg.params) out << key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace mhdrelax::config
