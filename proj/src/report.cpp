#include "edgesel/report.hpp"

#include <json.hpp>

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edgesel {

namespace {

using nlohmann::json;

Reason reason_from_string(const std::string& name) {
  if (name == "initial") return Reason::initial;
  if (name == "hold_no_feasible") return Reason::hold_no_feasible;
  if (name == "hold_insufficient_improvement") return Reason::hold_insufficient_improvement;
  if (name == "hold_counter") return Reason::hold_counter;
  if (name == "switch_committed") return Reason::switch_committed;
  if (name == "best_risk") return Reason::best_risk;
  throw std::invalid_argument("unknown decision reason '" + name + "'");
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

bool parse_size(const std::string& field, std::size_t& out) {
  if (field.empty() || field.front() == '-' || field.front() == '+') return false;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
  if (errno != 0 || end != field.c_str() + field.size()) return false;
  out = static_cast<std::size_t>(v);
  return true;
}

bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

std::string pct1(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  return buf;
}

std::string sec3(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", seconds);
  return buf;
}

json config_echo(const RunReport& report) {
  const SimConfig& cfg = report.config;
  const PolicyConfig& p = cfg.policy_config;
  return json{
      {"policy", to_string(cfg.policy)},
      {"tau", p.slo.tau},
      {"epsilon", p.slo.epsilon},
      {"k", p.slo.k},
      {"delta", p.delta},
      {"dwell_n", p.dwell},
      {"window_w", cfg.window_w},
      {"min_samples", p.min_samples},
      {"observability", to_string(cfg.observability)},
      {"tie_break", "prefer_current_then_lowest_id"},
      {"reset_on_challenger_change", p.reset_on_challenger_change},
      {"exclude_warmup", cfg.exclude_warmup},
  };
}

json metrics_object(const Metrics& m) {
  return json{
      {"dmr", m.dmr},
      {"mean_delay_s", m.mean_delay},
      {"p95_delay_s", m.p95_delay},
      {"switch_freq", m.switch_freq},
      {"switch_count", m.switch_count},
      {"frames_counted", m.frames},
  };
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_decisions_csv(const RunReport& report, const std::string& path) {
  std::ostringstream out;
  out << "frame,selected,switched,experienced_latency_s,feasible_count,"
         "score_curr,score_best,p_norm_best,p_cant_best,counter,reason\n";
  for (const DecisionRecord& r : report.decisions) {
    out << r.frame << ',' << r.selected << ',' << (r.switched ? 1 : 0) << ','
        << format_double(r.experienced_latency_s) << ',' << r.feasible_count << ','
        << format_double(r.score_curr) << ',' << format_double(r.score_best) << ','
        << format_double(r.p_norm_best) << ',' << format_double(r.p_cant_best) << ','
        << r.counter << ',' << to_string(r.reason) << '\n';
  }
  write_text_file(path, out.str());
}

DecisionLog read_decisions_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open decision log: " + path);

  static const std::string kHeader =
      "frame,selected,switched,experienced_latency_s,feasible_count,"
      "score_curr,score_best,p_norm_best,p_cant_best,counter,reason";

  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  if (line != kHeader) parse_fail(path, 1, "bad header '" + line + "'");

  DecisionLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string, 11> fields;
    std::size_t start = 0;
    std::size_t n = 0;
    for (; n < fields.size(); ++n) {
      const auto comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields[n] = line.substr(start);
        ++n;
        break;
      }
      fields[n] = line.substr(start, comma - start);
      start = comma + 1;
    }
    if (n != fields.size()) {
      parse_fail(path, line_no, "expected 11 fields, got " + std::to_string(n));
    }

    DecisionRecord r;
    std::size_t selected = 0;
    std::size_t switched = 0;
    if (!parse_size(fields[0], r.frame)) parse_fail(path, line_no, "bad frame");
    if (!parse_size(fields[1], selected)) parse_fail(path, line_no, "bad selected");
    if (!parse_size(fields[2], switched) || switched > 1) {
      parse_fail(path, line_no, "bad switched flag");
    }
    if (!parse_double(fields[3], r.experienced_latency_s)) {
      parse_fail(path, line_no, "bad experienced latency");
    }
    if (!parse_size(fields[4], r.feasible_count)) parse_fail(path, line_no, "bad feasible_count");
    if (!parse_double(fields[5], r.score_curr)) parse_fail(path, line_no, "bad score_curr");
    if (!parse_double(fields[6], r.score_best)) parse_fail(path, line_no, "bad score_best");
    if (!parse_double(fields[7], r.p_norm_best)) parse_fail(path, line_no, "bad p_norm_best");
    if (!parse_double(fields[8], r.p_cant_best)) parse_fail(path, line_no, "bad p_cant_best");
    if (!parse_size(fields[9], r.counter)) parse_fail(path, line_no, "bad counter");
    try {
      r.reason = reason_from_string(fields[10]);
    } catch (const std::invalid_argument& e) {
      parse_fail(path, line_no, e.what());
    }
    r.selected = static_cast<int>(selected);
    r.switched = switched == 1;
    log.records.push_back(r);
  }
  return log;
}

std::string metrics_json(const RunReport& report) {
  json doc{
      {"trace", report.trace_name},
      {"servers", report.num_servers},
      {"frames", report.num_frames},
      {"policy", to_string(report.config.policy)},
      {"metrics", metrics_object(report.metrics)},
      {"config", config_echo(report)},
  };
  return doc.dump(2) + "\n";
}

void write_metrics_json(const RunReport& report, const std::string& path) {
  write_text_file(path, metrics_json(report));
}

std::string metrics_line(const RunReport& report) {
  const Metrics& m = report.metrics;
  std::ostringstream os;
  os << to_string(report.config.policy) << ": dmr=" << pct1(m.dmr)
     << "% mean_delay=" << sec3(m.mean_delay) << "s p95_delay="
     << sec3(m.p95_delay) << "s switches=" << m.switch_count << " ("
     << pct1(m.switch_freq) << "%)";
  return os.str();
}

std::string compare_text(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "Policy        Avg Delay (s)  DMR (%)  Switches (%)\n";
  for (const CompareRow& row : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-12s  %13s  %7s  %12s\n",
                  to_string(row.policy).c_str(), sec3(row.metrics.mean_delay).c_str(),
                  pct1(row.metrics.dmr).c_str(), pct1(row.metrics.switch_freq).c_str());
    os << buf;
  }
  return os.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "policy,mean_delay_s,dmr_pct,switch_freq_pct\n";
  for (const CompareRow& row : rows) {
    os << to_string(row.policy) << ',' << format_double(row.metrics.mean_delay)
       << ',' << format_double(row.metrics.dmr * 100.0) << ','
       << format_double(row.metrics.switch_freq * 100.0) << '\n';
  }
  return os.str();
}

std::string compare_json(const std::vector<CompareRow>& rows) {
  json arr = json::array();
  for (const CompareRow& row : rows) {
    arr.push_back(json{
        {"policy", to_string(row.policy)},
        {"mean_delay_s", row.metrics.mean_delay},
        {"dmr_pct", row.metrics.dmr * 100.0},
        {"switch_freq_pct", row.metrics.switch_freq * 100.0},
        {"p95_delay_s", row.metrics.p95_delay},
        {"switch_count", row.metrics.switch_count},
    });
  }
  return arr.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& param_name) {
  std::ostringstream os;
  os << param_name << ",switch_freq_pct,mean_delay_s,p95_delay_s\n";
  for (const SweepRow& row : rows) {
    os << format_double(row.value) << ',' << format_double(row.metrics.switch_freq * 100.0)
       << ',' << format_double(row.metrics.mean_delay) << ','
       << format_double(row.metrics.p95_delay) << '\n';
  }
  return os.str();
}

std::string sweep_text(const std::vector<SweepRow>& rows, const std::string& param_name) {
  std::ostringstream os;
  char header[96];
  std::snprintf(header, sizeof(header), "%-8s  Switch Freq (%%)  Mean Delay (s)  P95 (s)\n",
                param_name.c_str());
  os << header;
  for (const SweepRow& row : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-8s  %15s  %14s  %7s\n",
                  format_double(row.value).c_str(), pct1(row.metrics.switch_freq).c_str(),
                  sec3(row.metrics.mean_delay).c_str(), sec3(row.metrics.p95_delay).c_str());
    os << buf;
  }
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows, const std::string& param_name) {
  json arr = json::array();
  for (const SweepRow& row : rows) {
    arr.push_back(json{
        {param_name, row.value},
        {"switch_freq_pct", row.metrics.switch_freq * 100.0},
        {"mean_delay_s", row.metrics.mean_delay},
        {"p95_delay_s", row.metrics.p95_delay},
    });
  }
  return arr.dump(2) + "\n";
}

std::string timeline_csv(const std::vector<DecisionRecord>& records,
                         std::size_t span_begin, std::size_t span_end) {
  std::ostringstream os;
  os << "frame,selected\n";
  for (const DecisionRecord& r : records) {
    if (r.frame < span_begin || r.frame >= span_end) continue;
    os << r.frame << ',' << r.selected << '\n';
  }
  return os.str();
}

}  // namespace edgesel
