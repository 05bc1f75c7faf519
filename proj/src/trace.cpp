#include "edgesel/trace.hpp"

#include "edgesel/rng.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace edgesel {

namespace {

// Round to the serialized precision so save -> load is the identity.
double quantize9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::string format_latency(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double draw(const Process& p, std::size_t frame, Rng& rng);

double draw_base(const Process& p, Rng& rng) {
  switch (p.kind) {
    case Process::Kind::gaussian:
      return p.mean + p.stddev * rng.normal();
    case Process::Kind::lognormal:
      return std::exp(p.mu_log + p.sigma_log * rng.normal());
    default:
      throw std::logic_error("draw_base: composite process");
  }
}

double draw(const Process& p, std::size_t frame, Rng& rng) {
  switch (p.kind) {
    case Process::Kind::gaussian:
    case Process::Kind::lognormal:
      return draw_base(p, rng);
    case Process::Kind::regime_shift: {
      // Last segment whose start is <= frame.
      const Process* active = &p.segments.front().second;
      for (const auto& [start, proc] : p.segments) {
        if (start <= frame) active = &proc;
      }
      return draw(*active, frame, rng);
    }
    case Process::Kind::bursty: {
      const double u = rng.uniform01();
      double x = draw(p.base.front(), frame, rng);
      if (u < p.burst_prob) x *= p.burst_multiplier;
      return x;
    }
  }
  throw std::logic_error("draw: unknown process kind");
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

bool parse_size(const std::string& field, std::size_t& out) {
  if (field.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
  if (errno != 0 || end != field.c_str() + field.size()) return false;
  if (field.front() == '-' || field.front() == '+') return false;
  out = static_cast<std::size_t>(v);
  return true;
}

bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(field.c_str(), &end);
  return errno == 0 && end == field.c_str() + field.size();
}

}  // namespace

Process Process::gaussian(double mean, double stddev) {
  Process p;
  p.kind = Kind::gaussian;
  p.mean = mean;
  p.stddev = stddev;
  return p;
}

Process Process::lognormal(double mu_log, double sigma_log) {
  Process p;
  p.kind = Kind::lognormal;
  p.mu_log = mu_log;
  p.sigma_log = sigma_log;
  return p;
}

Process Process::regime_shift(std::vector<std::pair<std::size_t, Process>> segments) {
  Process p;
  p.kind = Kind::regime_shift;
  p.segments = std::move(segments);
  return p;
}

Process Process::bursty(Process base, double burst_prob, double burst_multiplier) {
  Process p;
  p.kind = Kind::bursty;
  p.base.push_back(std::move(base));
  p.burst_prob = burst_prob;
  p.burst_multiplier = burst_multiplier;
  return p;
}

void Process::validate() const {
  switch (kind) {
    case Kind::gaussian:
      if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("gaussian process needs a positive finite mean");
      }
      if (!(stddev >= 0.0) || !std::isfinite(stddev)) {
        throw std::invalid_argument("gaussian process needs a non-negative finite std");
      }
      break;
    case Kind::lognormal:
      if (!std::isfinite(mu_log)) {
        throw std::invalid_argument("lognormal process needs a finite mu_log");
      }
      if (!(sigma_log >= 0.0) || !std::isfinite(sigma_log)) {
        throw std::invalid_argument("lognormal process needs a non-negative finite sigma_log");
      }
      break;
    case Kind::regime_shift: {
      if (segments.empty()) {
        throw std::invalid_argument("regime_shift needs at least one segment");
      }
      if (segments.front().first != 0) {
        throw std::invalid_argument("regime_shift segments must start at frame 0");
      }
      std::size_t prev = 0;
      for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i > 0 && segments[i].first <= prev) {
          throw std::invalid_argument("regime_shift segment starts must be strictly increasing");
        }
        prev = segments[i].first;
        segments[i].second.validate();
        if (segments[i].second.kind == Kind::regime_shift) {
          throw std::invalid_argument("regime_shift segments cannot nest regime_shift");
        }
      }
      break;
    }
    case Kind::bursty:
      if (base.size() != 1) {
        throw std::invalid_argument("bursty process needs exactly one base process");
      }
      base.front().validate();
      if (!(burst_prob >= 0.0) || !(burst_prob <= 1.0)) {
        throw std::invalid_argument("burst_prob must be in [0, 1]");
      }
      if (!(burst_multiplier > 0.0) || !std::isfinite(burst_multiplier)) {
        throw std::invalid_argument("burst_multiplier must be finite and > 0");
      }
      break;
  }
}

std::string Process::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::gaussian:
      os << "gaussian(" << mean << "," << stddev << ")";
      break;
    case Kind::lognormal:
      os << "lognormal(" << mu_log << "," << sigma_log << ")";
      break;
    case Kind::regime_shift: {
      os << "regime_shift(";
      for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i > 0) os << ";";
        os << segments[i].first << ":" << segments[i].second.describe();
      }
      os << ")";
      break;
    }
    case Kind::bursty:
      os << "bursty(" << base.front().describe() << ",p=" << burst_prob
         << ",x" << burst_multiplier << ")";
      break;
  }
  return os.str();
}

void GeneratorSpec::validate() const {
  if (servers.empty()) {
    throw std::invalid_argument("generator spec needs at least one server process");
  }
  if (!(floor_s > 0.0) || !std::isfinite(floor_s)) {
    throw std::invalid_argument("latency floor must be finite and > 0");
  }
  for (const auto& p : servers) p.validate();
}

void Trace::validate() const {
  if (num_servers < 1 || num_frames < 1) {
    throw std::invalid_argument("trace must have at least one server and one frame");
  }
  if (observations.size() != num_servers * num_frames) {
    throw std::invalid_argument("trace observation matrix has the wrong size");
  }
  for (double v : observations) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("trace observations must be finite and > 0");
    }
  }
}

Trace generate(const GeneratorSpec& spec, std::size_t num_servers,
               std::size_t num_frames) {
  spec.validate();
  if (num_servers != spec.servers.size()) {
    throw std::invalid_argument("generate: spec has " +
                                std::to_string(spec.servers.size()) +
                                " server processes, requested " +
                                std::to_string(num_servers));
  }
  if (num_frames < 1) {
    throw std::invalid_argument("generate: need at least one frame");
  }

  Trace trace;
  trace.num_servers = num_servers;
  trace.num_frames = num_frames;
  trace.observations.resize(num_servers * num_frames);
  trace.name = spec.name;
  trace.seed = spec.seed;

  std::ostringstream desc;
  for (std::size_t i = 0; i < num_servers; ++i) {
    if (i > 0) desc << "|";
    desc << spec.servers[i].describe();
  }
  trace.generator = desc.str();

  for (std::size_t i = 0; i < num_servers; ++i) {
    Rng rng(Rng::substream(spec.seed, i));
    for (std::size_t t = 0; t < num_frames; ++t) {
      double v = draw(spec.servers[i], t, rng);
      if (v < spec.floor_s) v = spec.floor_s;
      trace.at(t, i) = quantize9(v);
    }
  }
  return trace;
}

Trace load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    parse_fail(path, 1, "empty file, expected header 'frame,server,latency_s'");
  }
  if (line != "frame,server,latency_s") {
    parse_fail(path, 1, "bad header '" + line + "', expected 'frame,server,latency_s'");
  }

  struct Cell {
    std::size_t frame;
    std::size_t server;
    double latency;
  };
  std::vector<Cell> cells;
  std::size_t max_frame = 0;
  std::size_t max_server = 0;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;  // tolerate a trailing blank line
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      parse_fail(path, line_no, "expected 3 comma-separated fields, got '" + line + "'");
    }
    Cell cell{};
    if (!parse_size(line.substr(0, c1), cell.frame)) {
      parse_fail(path, line_no, "bad frame index '" + line.substr(0, c1) + "'");
    }
    if (!parse_size(line.substr(c1 + 1, c2 - c1 - 1), cell.server)) {
      parse_fail(path, line_no, "bad server id '" + line.substr(c1 + 1, c2 - c1 - 1) + "'");
    }
    if (!parse_double(line.substr(c2 + 1), cell.latency)) {
      parse_fail(path, line_no, "bad latency '" + line.substr(c2 + 1) + "'");
    }
    if (!std::isfinite(cell.latency) || cell.latency <= 0.0) {
      parse_fail(path, line_no, "latency must be finite and > 0, got " + line.substr(c2 + 1));
    }
    max_frame = std::max(max_frame, cell.frame);
    max_server = std::max(max_server, cell.server);
    cells.push_back(cell);
  }
  if (cells.empty()) {
    throw std::runtime_error(path + ": no observations");
  }

  Trace trace;
  trace.num_frames = max_frame + 1;
  trace.num_servers = max_server + 1;
  trace.name = path;
  trace.observations.assign(trace.num_frames * trace.num_servers,
                            std::numeric_limits<double>::quiet_NaN());

  std::vector<bool> seen(trace.num_frames * trace.num_servers, false);
  for (const auto& cell : cells) {
    const std::size_t idx = cell.frame * trace.num_servers + cell.server;
    if (seen[idx]) {
      throw std::runtime_error(path + ": duplicate observation (frame=" +
                               std::to_string(cell.frame) + ", server=" +
                               std::to_string(cell.server) + ")");
    }
    seen[idx] = true;
    trace.observations[idx] = cell.latency;
  }
  for (std::size_t t = 0; t < trace.num_frames; ++t) {
    for (std::size_t i = 0; i < trace.num_servers; ++i) {
      if (!seen[t * trace.num_servers + i]) {
        throw std::runtime_error(path + ": missing observation (frame=" +
                                 std::to_string(t) + ", server=" +
                                 std::to_string(i) + ")");
      }
    }
  }
  return trace;
}

void save_csv(const Trace& trace, const std::string& path) {
  trace.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << "frame,server,latency_s\n";
  for (std::size_t t = 0; t < trace.num_frames; ++t) {
    for (std::size_t i = 0; i < trace.num_servers; ++i) {
      out << t << ',' << i << ',' << format_latency(trace.at(t, i)) << '\n';
    }
  }
  if (!out.flush()) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<std::string> preset_names() {
  return {"testbed3", "replay10", "heteroscedastic2"};
}

Preset preset(const std::string& name) {
  Preset p;
  if (name == "testbed3") {
    // The first two servers carry the same true tail risk (equal distance to
    // 0.5 s in deviations), so windowed risk rankings flip constantly; the
    // third starts unusable and becomes the clear winner mid-trace.
    p.spec.name = "testbed3";
    p.spec.servers.push_back(Process::gaussian(0.40, 0.1 / 3.0));
    p.spec.servers.push_back(Process::gaussian(0.41, 0.030));
    p.spec.servers.push_back(Process::regime_shift({
        {0, Process::gaussian(0.55, 0.02)},
        {120, Process::gaussian(0.34, 0.02)},
    }));
  } else if (name == "replay10") {
    // Ten servers with clearly separated means and small variability; the
    // slowest ones sit above any sensible threshold.
    p.spec.name = "replay10";
    const double means[] = {0.25, 0.262, 0.30, 0.34, 0.38, 0.42, 0.46, 0.52, 0.58, 0.65};
    const double stds[] = {0.012, 0.014, 0.012, 0.015, 0.013, 0.016, 0.014, 0.02, 0.02, 0.025};
    for (int i = 0; i < 10; ++i) {
      p.spec.servers.push_back(Process::gaussian(means[i], stds[i]));
    }
  } else if (name == "heteroscedastic2") {
    // Lower mean but fat spread vs slightly higher mean and tight spread:
    // mean-only ranking and risk-aware ranking disagree.
    p.spec.name = "heteroscedastic2";
    p.spec.servers.push_back(Process::gaussian(0.42, 0.08));
    p.spec.servers.push_back(Process::gaussian(0.45, 0.01));
  } else {
    std::string names;
    for (const auto& n : preset_names()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (known: " + names + ")");
  }
  return p;
}

}  // namespace edgesel
