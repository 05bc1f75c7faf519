#include "edgesel/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace edgesel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
}

void fnv_mix_double(std::uint64_t& h, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  fnv_mix(h, &bits, sizeof bits);
}

struct ScoredAssessments {
  std::vector<RiskAssessment> assessments;
  std::vector<std::optional<double>> scores;
  std::size_t feasible_count = 0;
};

ScoredAssessments assess_all(const std::vector<std::optional<Summary>>& summaries,
                             const PolicyConfig& cfg) {
  ScoredAssessments out;
  out.assessments.reserve(summaries.size());
  out.scores.reserve(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const int id = static_cast<int>(i);
    if (!summaries[i].has_value()) {
      out.assessments.push_back(RiskAssessment::no_data(id));
      out.scores.emplace_back(std::nullopt);
      continue;
    }
    RiskAssessment a = assess(*summaries[i], cfg.slo, id);
    out.assessments.push_back(a);
    if (a.defined) {
      out.scores.emplace_back(percentile_score(*summaries[i], cfg.slo.k));
      if (a.feasible) ++out.feasible_count;
    } else {
      out.scores.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::baseline: return "baseline";
    case PolicyKind::hybrid_risk: return "hybrid_risk";
    case PolicyKind::hysteresis: return "hysteresis";
  }
  throw std::logic_error("to_string: unknown policy kind");
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "baseline") return PolicyKind::baseline;
  if (name == "hybrid_risk") return PolicyKind::hybrid_risk;
  if (name == "hysteresis") return PolicyKind::hysteresis;
  throw std::invalid_argument("unknown policy '" + name +
                              "' (known: baseline, hybrid_risk, hysteresis)");
}

std::string to_string(Observability mode) {
  switch (mode) {
    case Observability::full: return "full";
    case Observability::selected_only: return "selected_only";
  }
  throw std::logic_error("to_string: unknown observability mode");
}

Observability observability_from_string(const std::string& name) {
  if (name == "full") return Observability::full;
  if (name == "selected_only") return Observability::selected_only;
  throw std::invalid_argument("unknown observability '" + name +
                              "' (known: full, selected_only)");
}

void SimConfig::validate() const {
  policy_config.validate();
  if (window_w < 2) {
    throw std::invalid_argument("window_w must be at least 2 (deviation needs two samples)");
  }
  if (policy_config.min_samples > window_w) {
    throw std::invalid_argument("min_samples cannot exceed window_w (warm-up would never end)");
  }
}

Metrics compute_metrics(const std::vector<double>& experienced,
                        const std::vector<int>& selected, double tau,
                        std::size_t skip_frames) {
  if (experienced.size() != selected.size()) {
    throw std::invalid_argument("compute_metrics: vector lengths differ");
  }
  if (skip_frames >= experienced.size()) {
    throw std::invalid_argument("compute_metrics: nothing left after skipping warm-up");
  }
  Metrics m;
  m.frames = experienced.size() - skip_frames;

  std::size_t misses = 0;
  long double sum = 0.0L;
  for (std::size_t t = skip_frames; t < experienced.size(); ++t) {
    if (experienced[t] > tau) ++misses;
    sum += experienced[t];
  }
  m.dmr = static_cast<double>(misses) / static_cast<double>(m.frames);
  m.mean_delay = static_cast<double>(sum / static_cast<long double>(m.frames));

  std::vector<double> sorted(experienced.begin() + static_cast<std::ptrdiff_t>(skip_frames),
                             experienced.end());
  std::sort(sorted.begin(), sorted.end());
  // Nearest-rank: 1-based index ceil(0.95 * n), computed in integers.
  const std::size_t rank = (19 * sorted.size() + 19) / 20;
  m.p95_delay = sorted[rank - 1];

  for (std::size_t t = std::max<std::size_t>(skip_frames, 1); t < selected.size(); ++t) {
    if (selected[t] != selected[t - 1]) ++m.switch_count;
  }
  m.switch_freq = static_cast<double>(m.switch_count) / static_cast<double>(m.frames);
  return m;
}

RunReport run(const Trace& trace, const SimConfig& config) {
  trace.validate();
  config.validate();

  const std::size_t K = trace.num_servers;
  const std::size_t T = trace.num_frames;
  const PolicyConfig& pcfg = config.policy_config;

  RunReport report;
  report.config = config;
  report.trace_name = trace.name;
  report.num_servers = K;
  report.num_frames = T;
  report.decisions.reserve(T);
  report.experienced.reserve(T);
  if (config.record_summaries) report.summary_log.reserve(T);

  std::vector<Window> windows(K, Window(config.window_w));
  PolicyState state;
  std::uint64_t checksum = 1469598103934665603ULL;  // FNV offset basis

  std::vector<int> selected_seq;
  selected_seq.reserve(T);

  for (std::size_t t = 0; t < T; ++t) {
    // Summaries over everything observed so far (frames 0..t-1).
    std::vector<std::optional<Summary>> summaries(K);
    bool warm = state.current.has_value();
    for (std::size_t i = 0; i < K; ++i) {
      if (!windows[i].empty()) summaries[i] = summarize(windows[i]);
      const std::size_t count = summaries[i] ? summaries[i]->count : 0;
      if (count < pcfg.min_samples) warm = false;
      fnv_mix(checksum, &count, sizeof count);
      if (summaries[i]) {
        fnv_mix_double(checksum, summaries[i]->mean);
        fnv_mix_double(checksum,
                       summaries[i]->deviation.value_or(kNaN));
      }
    }
    if (config.record_summaries) report.summary_log.push_back(summaries);

    DecisionRecord rec;
    rec.frame = t;
    rec.score_curr = kNaN;
    rec.score_best = kNaN;
    rec.p_norm_best = kNaN;
    rec.p_cant_best = kNaN;

    int selected;
    if (!warm) {
      selected = bootstrap_select(t, K, config.observability);
      rec.reason = Reason::initial;
      state.current = selected;
      state.counter = 0;
      state.last_challenger.reset();
    } else {
      const ScoredAssessments sa = assess_all(summaries, pcfg);
      rec.feasible_count = sa.feasible_count;
      if (state.current && sa.scores[static_cast<std::size_t>(*state.current)]) {
        rec.score_curr = *sa.scores[static_cast<std::size_t>(*state.current)];
      } else if (state.current) {
        rec.score_curr = std::numeric_limits<double>::infinity();
      }

      Decision decision;
      switch (config.policy) {
        case PolicyKind::baseline:
          decision = baseline_select(summaries, state);
          state.current = decision.selected;
          break;
        case PolicyKind::hybrid_risk:
          decision = hybrid_risk_select(sa.assessments, state);
          state.current = decision.selected;
          break;
        case PolicyKind::hysteresis: {
          HysteresisResult result = hysteresis_step(sa.assessments, sa.scores, state, pcfg);
          decision = std::move(result.decision);
          state = result.state;
          break;
        }
      }
      selected = decision.selected;
      rec.reason = decision.reason;
      rec.counter = state.counter;
      if (decision.best_candidate) {
        const auto b = static_cast<std::size_t>(*decision.best_candidate);
        rec.score_best = sa.scores[b] ? *sa.scores[b] : kNaN;
        rec.p_norm_best = sa.assessments[b].defined ? sa.assessments[b].p_norm : kNaN;
        rec.p_cant_best = sa.assessments[b].defined ? sa.assessments[b].p_cant : kNaN;
      }
    }

    rec.selected = selected;
    rec.switched = !selected_seq.empty() && selected_seq.back() != selected;
    selected_seq.push_back(selected);

    const double latency = trace.at(t, static_cast<std::size_t>(selected));
    rec.experienced_latency_s = latency;
    report.experienced.push_back(latency);
    report.decisions.push_back(rec);

    // Frame t is over; the windows absorb it.
    if (config.observability == Observability::full) {
      for (std::size_t i = 0; i < K; ++i) windows[i].push(trace.at(t, i));
    } else {
      windows[static_cast<std::size_t>(selected)].push(latency);
    }
  }

  report.summary_checksum = checksum;
  const std::size_t skip = config.exclude_warmup ? std::min(config.window_w, T - 1) : 0;
  report.metrics = compute_metrics(report.experienced, selected_seq,
                                   pcfg.slo.tau, skip);
  return report;
}

std::vector<CompareRow> compare(const Trace& trace, const SimConfig& base,
                                const std::vector<PolicyKind>& policies) {
  if (policies.empty()) {
    throw std::invalid_argument("compare: need at least one policy");
  }
  std::vector<CompareRow> rows;
  rows.reserve(policies.size());
  for (PolicyKind kind : policies) {
    SimConfig cfg = base;
    cfg.policy = kind;
    rows.push_back({kind, run(trace, cfg).metrics});
  }
  return rows;
}

std::vector<SweepRow> sweep_dwell(const Trace& trace, const SimConfig& base,
                                  const std::vector<std::size_t>& dwell_values) {
  if (dwell_values.empty()) {
    throw std::invalid_argument("sweep_dwell: need at least one value");
  }
  std::vector<SweepRow> rows;
  rows.reserve(dwell_values.size());
  for (std::size_t n : dwell_values) {
    SimConfig cfg = base;
    cfg.policy_config.dwell = n;
    rows.push_back({static_cast<double>(n), run(trace, cfg).metrics});
  }
  return rows;
}

std::vector<SweepRow> sweep_k(const Trace& trace, const SimConfig& base,
                              const std::vector<double>& k_values) {
  if (k_values.empty()) {
    throw std::invalid_argument("sweep_k: need at least one value");
  }
  std::vector<SweepRow> rows;
  rows.reserve(k_values.size());
  for (double k : k_values) {
    SimConfig cfg = base;
    cfg.policy_config.slo.k = k;
    rows.push_back({k, run(trace, cfg).metrics});
  }
  return rows;
}

}  // namespace edgesel
