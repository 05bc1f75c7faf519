#pragma once

#include "edgesel/policy.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace edgesel {

/// A latency process for one server. regime_shift chains sub-processes over
/// frame segments; bursty wraps a base process and inflates a random
/// fraction of its draws.
struct Process {
  enum class Kind { gaussian, lognormal, regime_shift, bursty };

  Kind kind = Kind::gaussian;
  double mean = 0.0;
  double stddev = 0.0;
  double mu_log = 0.0;
  double sigma_log = 0.0;
  std::vector<std::pair<std::size_t, Process>> segments;  // (start_frame, process)
  std::vector<Process> base;                               // bursty: exactly one element
  double burst_prob = 0.0;
  double burst_multiplier = 1.0;

  static Process gaussian(double mean, double stddev);
  static Process lognormal(double mu_log, double sigma_log);
  /// Segments apply from their start_frame until the next segment begins;
  /// the first must start at frame 0 and starts must be strictly increasing.
  static Process regime_shift(std::vector<std::pair<std::size_t, Process>> segments);
  static Process bursty(Process base, double burst_prob, double burst_multiplier);

  void validate() const;
  std::string describe() const;
};

/// Synthetic trace description: one process per server, a latency floor that
/// clips non-physical low draws, and the seed that pins the output.
struct GeneratorSpec {
  std::vector<Process> servers;
  double floor_s = 0.001;
  std::uint64_t seed = 0;
  std::string name;

  void validate() const;
};

/// Full-observability latency matrix: `observations[t * num_servers + i]` is
/// the latency of server i at frame t.
struct Trace {
  std::size_t num_servers = 0;
  std::size_t num_frames = 0;
  std::vector<double> observations;
  std::string name;
  std::uint64_t seed = 0;
  std::string generator;

  double at(std::size_t frame, std::size_t server) const {
    return observations[frame * num_servers + server];
  }
  double& at(std::size_t frame, std::size_t server) {
    return observations[frame * num_servers + server];
  }

  void validate() const;
};

/// Samples a trace from the spec. Deterministic in spec.seed; every value is
/// clamped to spec.floor_s and rounded to 9 significant digits so that the
/// CSV round trip reproduces the matrix bit-exactly.
Trace generate(const GeneratorSpec& spec, std::size_t num_servers,
               std::size_t num_frames);

/// Reads a trace CSV (header `frame,server,latency_s`, one row per cell,
/// any row order). Every (frame, server) cell must be present exactly once;
/// parse and validation errors carry the offending line number.
Trace load_csv(const std::string& path);

/// Writes the pinned CSV format: LF line endings, latencies with up to 9
/// significant digits, rows in frame-major order.
void save_csv(const Trace& trace, const std::string& path);

/// A named scenario: the generator plus the policy knobs the scenario was
/// designed around (all presets currently keep the default operating point).
struct Preset {
  GeneratorSpec spec;
  PolicyConfig policy_overrides;
};

/// Known presets: testbed3, replay10, heteroscedastic2. Throws
/// std::invalid_argument listing the names for anything else.
Preset preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace edgesel
