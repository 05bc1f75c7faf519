#include "edgesel/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edgesel {

namespace {

void check_latency_value(double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument("latency must be finite and > 0, got " +
                                std::to_string(value));
  }
}

}  // namespace

void LatencySample::validate() const {
  check_latency_value(latency_s);
  if (server_id < 0) {
    throw std::invalid_argument("server_id must be non-negative");
  }
}

Window::Window(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw std::invalid_argument("window capacity must be positive");
  }
}

void Window::push(double value) {
  check_latency_value(value);
  values_.push_back(value);
  if (values_.size() > capacity_) {
    values_.pop_front();
  }
}

Summary summarize(const Window& window) {
  const auto& xs = window.values();
  if (xs.empty()) {
    throw std::runtime_error("summarize: no observations yet");
  }

  Summary s;
  s.count = xs.size();

  // Constant windows summarize exactly, without round-off in the mean or a
  // spurious nonzero deviation.
  if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); })) {
    s.mean = xs.front();
    if (s.count >= 2) s.deviation = 0.0;
    return s;
  }

  double sum = 0.0;
  for (double v : xs) sum += v;
  s.mean = sum / static_cast<double>(s.count);

  if (s.count >= 2) {
    double sq = 0.0;
    for (double v : xs) {
      const double d = v - s.mean;
      sq += d * d;
    }
    s.deviation = std::sqrt(sq / static_cast<double>(s.count - 1));
  }
  return s;
}

double aggregate_frame(std::span<const double> sub_samples) {
  if (sub_samples.empty()) {
    throw std::invalid_argument("aggregate_frame: empty sample list");
  }
  double sum = 0.0;
  for (double v : sub_samples) {
    check_latency_value(v);
    sum += v;
  }
  return sum / static_cast<double>(sub_samples.size());
}

}  // namespace edgesel
