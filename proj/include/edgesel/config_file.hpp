#pragma once

#include "edgesel/sim.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace edgesel {

/// One experiment described as flat key=value settings, either parsed from
/// a config file or assembled from CLI flags. Every field is optional so
/// that flag values can be layered over file values; `resolve` applies the
/// defaults.
struct ExperimentConfig {
  std::optional<double> tau;
  std::optional<double> epsilon;
  std::optional<double> k;
  std::optional<double> delta;
  std::optional<std::size_t> dwell_n;
  std::optional<std::size_t> window_w;
  std::optional<std::size_t> min_samples;
  std::optional<std::string> observability;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> trace_path;
  std::optional<std::string> preset;
  std::optional<std::size_t> frames;
  std::optional<std::string> tie_break;
  std::optional<bool> reset_on_challenger_change;
  std::optional<bool> exclude_warmup;

  /// Fields set in `overrides` replace the ones here (flags win over file).
  void merge_overrides(const ExperimentConfig& overrides);

  /// Builds a validated SimConfig, filling unset fields with the defaults
  /// (tau=0.5, epsilon=0.15, k=1.645, delta=0.05, dwell_n=5, window_w=20,
  /// min_samples=2, full observability, hysteresis policy).
  SimConfig resolve() const;
};

/// Parses `key=value` lines (blank lines and `#` comments allowed).
/// Unknown keys, duplicate keys and malformed values are errors that carry
/// the line number.
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace edgesel
