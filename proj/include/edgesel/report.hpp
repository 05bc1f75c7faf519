#pragma once

#include "edgesel/sim.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace edgesel {

/// Writes the per-frame decision log with the pinned header
/// `frame,selected,switched,experienced_latency_s,feasible_count,score_curr,
/// score_best,p_norm_best,p_cant_best,counter,reason`. LF endings, doubles
/// with up to 9 significant digits, undefined values as `nan`/`inf`.
void write_decisions_csv(const RunReport& report, const std::string& path);

/// Reads a decision log back (for timeline extraction and the independent
/// metrics recomputation). Parse errors carry the line number.
struct DecisionLog {
  std::vector<DecisionRecord> records;
};
DecisionLog read_decisions_csv(const std::string& path);

/// JSON document mirroring Metrics plus the config echo; two-space indent,
/// trailing newline.
std::string metrics_json(const RunReport& report);
void write_metrics_json(const RunReport& report, const std::string& path);

/// One Metrics line for terminals: policy, DMR, mean/P95 delay, switches.
std::string metrics_line(const RunReport& report);

/// Aligned-text rendering of a policy comparison (Avg Delay (s) / DMR (%) /
/// Switches (%)); percentages with one decimal place.
std::string compare_text(const std::vector<CompareRow>& rows);
/// The same numbers as CSV (full precision) and JSON.
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_json(const std::vector<CompareRow>& rows);

/// Sweep table as CSV: `<param>,switch_freq_pct,mean_delay_s,p95_delay_s`
/// with the parameter column named `dwell_n` or `k`.
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& param_name);
/// Aligned-text rendering of the same table.
std::string sweep_text(const std::vector<SweepRow>& rows, const std::string& param_name);
std::string sweep_json(const std::vector<SweepRow>& rows, const std::string& param_name);

/// Plot-ready `frame,selected` pairs, optionally restricted to
/// [span_begin, span_end).
std::string timeline_csv(const std::vector<DecisionRecord>& records,
                         std::size_t span_begin, std::size_t span_end);

/// Shortest representation of a double that parses back exactly; used by
/// every CSV writer.
std::string format_double(double v);

}  // namespace edgesel
