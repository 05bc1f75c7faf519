#include "edgesel/config_file.hpp"
#include "edgesel/report.hpp"
#include "edgesel/sim.hpp"
#include "edgesel/trace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace edgesel;
using nlohmann::json;

// Flag holders; only values the user actually passed override the config
// file, so everything is optional.
struct CommonFlags {
  std::optional<std::string> config_path;
  ExperimentConfig overrides;

  ExperimentConfig resolve_layers() const {
    ExperimentConfig cfg;
    if (config_path) cfg = parse_config_file(*config_path);
    cfg.merge_overrides(overrides);
    return cfg;
  }
};

void add_common_options(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Config file (key=value lines; flags win)");
  cmd->add_option("--trace,--trace_path", flags.overrides.trace_path, "Trace CSV to replay");
  cmd->add_option("--preset", flags.overrides.preset,
                  "Generate the named preset in memory (testbed3, replay10, heteroscedastic2)");
  cmd->add_option("--frames", flags.overrides.frames, "Frames to generate for --preset");
  cmd->add_option("--seed", flags.overrides.seed, "Generator seed for --preset");
  cmd->add_option("--policy", flags.overrides.policy,
                  "baseline, hybrid_risk or hysteresis");
  cmd->add_option("--tau", flags.overrides.tau, "Latency deadline in seconds");
  cmd->add_option("--epsilon", flags.overrides.epsilon, "Risk tolerance");
  cmd->add_option("--k", flags.overrides.k, "Percentile factor for scores");
  cmd->add_option("--delta", flags.overrides.delta, "Relative improvement threshold");
  cmd->add_option("--dwell_n", flags.overrides.dwell_n, "Dwell window N");
  cmd->add_option("--window_w", flags.overrides.window_w, "Sliding window size W");
  cmd->add_option("--min_samples", flags.overrides.min_samples,
                  "Samples required before a server is assessed");
  cmd->add_option("--observability", flags.overrides.observability,
                  "full or selected_only");
  cmd->add_option("--tie_break", flags.overrides.tie_break,
                  "Tie-break rule (prefer_current_then_lowest_id)");
  cmd->add_flag("--reset_on_challenger_change",
                [&flags](std::int64_t count) {
                  if (count > 0) flags.overrides.reset_on_challenger_change = true;
                },
                "Restart the dwell counter when the challenger changes");
  cmd->add_flag("--exclude_warmup",
                [&flags](std::int64_t count) {
                  if (count > 0) flags.overrides.exclude_warmup = true;
                },
                "Drop the first window_w frames from the metrics");
}

Trace make_trace(const ExperimentConfig& cfg) {
  const bool has_path = cfg.trace_path.has_value();
  const bool has_preset = cfg.preset.has_value();
  if (has_path && has_preset) {
    throw std::invalid_argument("--trace and --preset are mutually exclusive");
  }
  if (!has_path && !has_preset) {
    throw std::invalid_argument("need a trace: pass --trace <csv> or --preset <name>");
  }
  if (has_path) return load_csv(*cfg.trace_path);
  Preset p = preset(*cfg.preset);
  p.spec.seed = cfg.seed.value_or(42);
  return generate(p.spec, p.spec.servers.size(), cfg.frames.value_or(200));
}

Process process_from_json(const json& node) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return Process::gaussian(node.at("mean").get<double>(),
                             node.at("stddev").get<double>());
  }
  if (kind == "lognormal") {
    return Process::lognormal(node.at("mu_log").get<double>(),
                              node.at("sigma_log").get<double>());
  }
  if (kind == "regime_shift") {
    std::vector<std::pair<std::size_t, Process>> segments;
    for (const json& seg : node.at("segments")) {
      segments.emplace_back(seg.at("start").get<std::size_t>(),
                            process_from_json(seg.at("process")));
    }
    return Process::regime_shift(std::move(segments));
  }
  if (kind == "bursty") {
    return Process::bursty(process_from_json(node.at("base")),
                           node.at("burst_prob").get<double>(),
                           node.at("burst_multiplier").get<double>());
  }
  throw std::invalid_argument("unknown process kind '" + kind +
                              "' (known: gaussian, lognormal, regime_shift, bursty)");
}

GeneratorSpec spec_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  json doc = json::parse(in);
  GeneratorSpec spec;
  spec.name = doc.value("name", path);
  spec.floor_s = doc.value("floor_s", 0.001);
  if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  for (const json& server : doc.at("servers")) {
    spec.servers.push_back(process_from_json(server));
  }
  return spec;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

int cmd_gen(const std::optional<std::string>& preset_name,
            const std::optional<std::string>& spec_file, std::size_t frames,
            std::optional<std::uint64_t> seed, const std::string& out_path) {
  if (preset_name.has_value() == spec_file.has_value()) {
    throw std::invalid_argument("pass exactly one of --preset and --spec-file");
  }
  GeneratorSpec spec = preset_name ? preset(*preset_name).spec
                                   : spec_from_json_file(*spec_file);
  if (seed) spec.seed = *seed;
  const Trace trace = generate(spec, spec.servers.size(), frames);
  save_csv(trace, out_path);
  std::cout << "wrote " << out_path << ": servers=" << trace.num_servers
            << " frames=" << trace.num_frames << " seed=" << trace.seed << "\n";
  return 0;
}

int cmd_run(const CommonFlags& flags, const std::optional<std::string>& out_prefix) {
  const ExperimentConfig cfg = flags.resolve_layers();
  const Trace trace = make_trace(cfg);
  const RunReport report = run(trace, cfg.resolve());
  if (out_prefix) {
    write_decisions_csv(report, *out_prefix + ".decisions.csv");
    write_metrics_json(report, *out_prefix + ".metrics.json");
  }
  std::cout << metrics_line(report) << "\n";
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::string& policies_arg,
                bool as_json, const std::optional<std::string>& out_path) {
  const ExperimentConfig cfg = flags.resolve_layers();
  const Trace trace = make_trace(cfg);
  std::vector<PolicyKind> policies;
  for (const std::string& name : split(policies_arg, ',')) {
    policies.push_back(policy_kind_from_string(name));
  }
  const std::vector<CompareRow> rows = compare(trace, cfg.resolve(), policies);
  if (out_path) write_file(*out_path, compare_csv(rows));
  std::cout << (as_json ? compare_json(rows) : compare_text(rows));
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& param,
              const std::string& values_arg, bool as_json,
              const std::optional<std::string>& out_path) {
  const ExperimentConfig cfg = flags.resolve_layers();
  const Trace trace = make_trace(cfg);
  const std::vector<std::string> raw = split(values_arg, ',');
  if (raw.empty()) throw std::invalid_argument("--values must not be empty");

  std::vector<SweepRow> rows;
  if (param == "dwell_n") {
    std::vector<std::size_t> values;
    for (const std::string& v : raw) values.push_back(std::stoull(v));
    rows = sweep_dwell(trace, cfg.resolve(), values);
  } else if (param == "k") {
    std::vector<double> values;
    for (const std::string& v : raw) values.push_back(std::stod(v));
    rows = sweep_k(trace, cfg.resolve(), values);
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + param +
                                "' (known: dwell_n, k)");
  }
  if (out_path) write_file(*out_path, sweep_csv(rows, param));
  std::cout << (as_json ? sweep_json(rows, param) : sweep_text(rows, param));
  return 0;
}

int cmd_timeline(const CommonFlags& flags, const std::optional<std::string>& decisions_path,
                 const std::optional<std::string>& span,
                 const std::optional<std::string>& out_path) {
  std::size_t begin = 0;
  std::size_t end = static_cast<std::size_t>(-1);
  if (span) {
    const auto colon = span->find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--span expects begin:end (end exclusive)");
    }
    begin = std::stoull(span->substr(0, colon));
    end = std::stoull(span->substr(colon + 1));
    if (end <= begin) throw std::invalid_argument("--span range is empty");
  }

  std::string csv;
  if (decisions_path) {
    const DecisionLog log = read_decisions_csv(*decisions_path);
    csv = timeline_csv(log.records, begin, end);
  } else {
    const ExperimentConfig cfg = flags.resolve_layers();
    const Trace trace = make_trace(cfg);
    const RunReport report = run(trace, cfg.resolve());
    csv = timeline_csv(report.decisions, begin, end);
  }
  if (out_path) {
    write_file(*out_path, csv);
  } else {
    std::cout << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-aware edge server selection: trace generation and policy simulation"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic trace CSV");
  std::optional<std::string> gen_preset;
  std::optional<std::string> gen_spec_file;
  std::size_t gen_frames = 200;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("--preset", gen_preset, "Preset name (testbed3, replay10, heteroscedastic2)");
  gen->add_option("--spec-file", gen_spec_file, "JSON generator spec");
  gen->add_option("--frames", gen_frames, "Number of frames")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed (default 42)");
  gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one policy over a trace");
  CommonFlags run_flags;
  std::optional<std::string> run_out;
  add_common_options(run_cmd, run_flags);
  run_cmd->add_option("-o,--out", run_out,
                      "Output prefix (<out>.decisions.csv, <out>.metrics.json)");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Run several policies over one trace");
  CommonFlags compare_flags;
  std::string compare_policies = "baseline,hybrid_risk,hysteresis";
  bool compare_as_json = false;
  std::optional<std::string> compare_out;
  add_common_options(compare_cmd, compare_flags);
  compare_cmd->add_option("--policies", compare_policies, "Comma-separated policy list")
      ->capture_default_str();
  compare_cmd->add_flag("--json", compare_as_json, "Print JSON instead of the text table");
  compare_cmd->add_option("-o,--out", compare_out, "Also write the table as CSV");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep dwell_n or k over one trace");
  CommonFlags sweep_flags;
  std::string sweep_param = "dwell_n";
  std::string sweep_values;
  bool sweep_as_json = false;
  std::optional<std::string> sweep_out;
  add_common_options(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", sweep_param, "dwell_n or k")->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep_cmd->add_flag("--json", sweep_as_json, "Print JSON instead of the text table");
  sweep_cmd->add_option("-o,--out", sweep_out, "Also write the table as CSV");

  // timeline
  auto* timeline_cmd = app.add_subcommand(
      "timeline", "Emit frame,selected pairs from a run or an existing decision log");
  CommonFlags timeline_flags;
  std::optional<std::string> timeline_decisions;
  std::optional<std::string> timeline_span;
  std::optional<std::string> timeline_out;
  add_common_options(timeline_cmd, timeline_flags);
  timeline_cmd->add_option("--decisions", timeline_decisions,
                           "Existing decision log CSV (skips the simulation)");
  timeline_cmd->add_option("--span", timeline_span, "Frame range begin:end (end exclusive)");
  timeline_cmd->add_option("-o,--out", timeline_out, "Output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_preset, gen_spec_file, gen_frames, gen_seed, gen_out);
    if (run_cmd->parsed()) return cmd_run(run_flags, run_out);
    if (compare_cmd->parsed()) {
      return cmd_compare(compare_flags, compare_policies, compare_as_json, compare_out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_flags, sweep_param, sweep_values, sweep_as_json, sweep_out);
    }
    if (timeline_cmd->parsed()) {
      return cmd_timeline(timeline_flags, timeline_decisions, timeline_span, timeline_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
