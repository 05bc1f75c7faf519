#include "edgesel/config_file.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

namespace edgesel {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

double to_double(const std::string& path, std::size_t line, const std::string& key,
                 const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || errno != 0 || end != value.c_str() + value.size()) {
    fail(path, line, "bad numeric value for " + key + ": '" + value + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& path, std::size_t line, const std::string& key,
                     const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || value.front() == '-' || errno != 0 ||
      end != value.c_str() + value.size()) {
    fail(path, line, "bad unsigned integer for " + key + ": '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& path, std::size_t line, const std::string& key,
             const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(path, line, "bad boolean for " + key + ": '" + value + "' (use true/false)");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void ExperimentConfig::merge_overrides(const ExperimentConfig& overrides) {
  if (overrides.tau) tau = overrides.tau;
  if (overrides.epsilon) epsilon = overrides.epsilon;
  if (overrides.k) k = overrides.k;
  if (overrides.delta) delta = overrides.delta;
  if (overrides.dwell_n) dwell_n = overrides.dwell_n;
  if (overrides.window_w) window_w = overrides.window_w;
  if (overrides.min_samples) min_samples = overrides.min_samples;
  if (overrides.observability) observability = overrides.observability;
  if (overrides.policy) policy = overrides.policy;
  if (overrides.seed) seed = overrides.seed;
  if (overrides.trace_path) trace_path = overrides.trace_path;
  if (overrides.preset) preset = overrides.preset;
  if (overrides.frames) frames = overrides.frames;
  if (overrides.tie_break) tie_break = overrides.tie_break;
  if (overrides.reset_on_challenger_change) {
    reset_on_challenger_change = overrides.reset_on_challenger_change;
  }
  if (overrides.exclude_warmup) exclude_warmup = overrides.exclude_warmup;
}

SimConfig ExperimentConfig::resolve() const {
  SimConfig cfg;
  cfg.policy = policy ? policy_kind_from_string(*policy) : PolicyKind::hysteresis;
  cfg.policy_config.slo.tau = tau.value_or(0.5);
  cfg.policy_config.slo.epsilon = epsilon.value_or(0.15);
  cfg.policy_config.slo.k = k.value_or(1.645);
  cfg.policy_config.delta = delta.value_or(0.05);
  cfg.policy_config.dwell = dwell_n.value_or(5);
  cfg.policy_config.min_samples = min_samples.value_or(2);
  cfg.policy_config.reset_on_challenger_change = reset_on_challenger_change.value_or(false);
  if (tie_break && *tie_break != "prefer_current_then_lowest_id") {
    throw std::invalid_argument("unknown tie_break '" + *tie_break +
                                "' (known: prefer_current_then_lowest_id)");
  }
  cfg.window_w = window_w.value_or(20);
  cfg.observability = observability ? observability_from_string(*observability)
                                    : Observability::full;
  cfg.exclude_warmup = exclude_warmup.value_or(false);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(path, line_no, "expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(path, line_no, "empty key");
    if (!seen.insert(key).second) fail(path, line_no, "duplicate key '" + key + "'");

    if (key == "tau") {
      cfg.tau = to_double(path, line_no, key, value);
    } else if (key == "epsilon") {
      cfg.epsilon = to_double(path, line_no, key, value);
    } else if (key == "k") {
      cfg.k = to_double(path, line_no, key, value);
    } else if (key == "delta") {
      cfg.delta = to_double(path, line_no, key, value);
    } else if (key == "dwell_n") {
      cfg.dwell_n = static_cast<std::size_t>(to_u64(path, line_no, key, value));
    } else if (key == "window_w") {
      cfg.window_w = static_cast<std::size_t>(to_u64(path, line_no, key, value));
    } else if (key == "min_samples") {
      cfg.min_samples = static_cast<std::size_t>(to_u64(path, line_no, key, value));
    } else if (key == "observability") {
      cfg.observability = value;
    } else if (key == "policy") {
      cfg.policy = value;
    } else if (key == "seed") {
      cfg.seed = to_u64(path, line_no, key, value);
    } else if (key == "trace_path") {
      cfg.trace_path = value;
    } else if (key == "preset") {
      cfg.preset = value;
    } else if (key == "frames") {
      cfg.frames = static_cast<std::size_t>(to_u64(path, line_no, key, value));
    } else if (key == "tie_break") {
      cfg.tie_break = value;
    } else if (key == "reset_on_challenger_change") {
      cfg.reset_on_challenger_change = to_bool(path, line_no, key, value);
    } else if (key == "exclude_warmup") {
      cfg.exclude_warmup = to_bool(path, line_no, key, value);
    } else {
      fail(path, line_no, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace edgesel
