#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace edgesel {

/// One latency observation: server `server_id` took `latency_s` seconds at
/// frame `frame_index`.
struct LatencySample {
  std::size_t frame_index = 0;
  int server_id = 0;
  double latency_s = 0.0;

  /// Throws std::invalid_argument if latency_s is not finite and positive
  /// or server_id is negative.
  void validate() const;
};

/// Windowed latency statistics for one server. `deviation` is the sample
/// standard deviation (n-1 divisor) and is empty while count < 2.
struct Summary {
  double mean = 0.0;
  std::optional<double> deviation;
  std::size_t count = 0;
};

/// Sliding window over the most recent latency observations of one server.
/// Oldest-first eviction once `capacity` is reached.
class Window {
 public:
  explicit Window(std::size_t capacity);

  /// Appends a value, evicting the oldest one when full.
  /// Throws std::invalid_argument for non-finite or non-positive values.
  void push(double value);

  std::size_t size() const { return values_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return values_.empty(); }
  const std::deque<double>& values() const { return values_; }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

/// Mean and sample standard deviation of the window contents, recomputed
/// from scratch. Throws std::runtime_error on an empty window.
Summary summarize(const Window& window);

/// Collapses the sub-samples measured within one frame into a single
/// observation (arithmetic mean). Throws std::invalid_argument on an empty
/// list or invalid values.
double aggregate_frame(std::span<const double> sub_samples);

}  // namespace edgesel
