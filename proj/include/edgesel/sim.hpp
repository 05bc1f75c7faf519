#pragma once

#include "edgesel/policy.hpp"
#include "edgesel/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace edgesel {

enum class PolicyKind { baseline, hybrid_risk, hysteresis };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

std::string to_string(Observability mode);
Observability observability_from_string(const std::string& name);

/// Everything one simulation run needs besides the trace itself.
struct SimConfig {
  PolicyKind policy = PolicyKind::hysteresis;
  PolicyConfig policy_config;
  std::size_t window_w = 20;
  Observability observability = Observability::full;
  /// Drop the first window_w frames from the metrics (sensitivity knob;
  /// default keeps every frame, matching the headline numbers).
  bool exclude_warmup = false;
  /// Keep the per-frame summaries visible to the policy (memory-heavy;
  /// used by tests that check summary staleness).
  bool record_summaries = false;

  void validate() const;
};

struct Metrics {
  double dmr = 0.0;
  double mean_delay = 0.0;
  double p95_delay = 0.0;
  double switch_freq = 0.0;
  std::size_t switch_count = 0;
  /// Number of frames the metrics cover (T, or T minus warm-up).
  std::size_t frames = 0;
};

/// One row of the decision log. Scores and probabilities refer to the
/// incumbent (score_curr) and the policy's best-ranked candidate this step;
/// they are NaN while undefined (warm-up, no incumbent, no candidate).
struct DecisionRecord {
  std::size_t frame = 0;
  int selected = -1;
  bool switched = false;
  double experienced_latency_s = 0.0;
  std::size_t feasible_count = 0;
  double score_curr = 0.0;
  double score_best = 0.0;
  double p_norm_best = 0.0;
  double p_cant_best = 0.0;
  std::size_t counter = 0;
  Reason reason = Reason::initial;
};

struct RunReport {
  std::vector<DecisionRecord> decisions;
  std::vector<double> experienced;
  Metrics metrics;
  SimConfig config;
  std::string trace_name;
  std::size_t num_servers = 0;
  std::size_t num_frames = 0;
  /// FNV-1a digest over every summary the policy saw, in frame/server
  /// order. Two runs that observed identical summaries share the digest.
  std::uint64_t summary_checksum = 0;
  /// Per frame, the per-server summaries visible at decision time (empty
  /// optional while a server has no samples). Only filled when
  /// config.record_summaries is set.
  std::vector<std::vector<std::optional<Summary>>> summary_log;
};

/// Plays the trace frame by frame: each decision uses the summaries built
/// from frames 0..t-1, the selected server's frame-t latency is experienced
/// and only then do the windows absorb frame t (every server in full
/// observability, the selected one otherwise).
RunReport run(const Trace& trace, const SimConfig& config);

struct CompareRow {
  PolicyKind policy;
  Metrics metrics;
};

/// Runs each policy over the identical trace (paired comparison).
std::vector<CompareRow> compare(const Trace& trace, const SimConfig& base,
                                const std::vector<PolicyKind>& policies);

struct SweepRow {
  double value = 0.0;
  Metrics metrics;
};

/// Re-runs the configured policy with the dwell window set to each value.
std::vector<SweepRow> sweep_dwell(const Trace& trace, const SimConfig& base,
                                  const std::vector<std::size_t>& dwell_values);

/// Re-runs the configured policy with the risk-aversion factor k set to
/// each value.
std::vector<SweepRow> sweep_k(const Trace& trace, const SimConfig& base,
                              const std::vector<double>& k_values);

/// Metrics over a run's experienced latencies and selection sequence;
/// exposed so an independent pass over a decision log can be compared
/// against the packaged numbers.
Metrics compute_metrics(const std::vector<double>& experienced,
                        const std::vector<int>& selected, double tau,
                        std::size_t skip_frames);

}  // namespace edgesel
