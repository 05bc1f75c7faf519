#pragma once

// Independent reference implementations the tests compare the library
// against. Everything here is deliberately written from the defining
// formulas (series expansion, two-pass sums, plain loops) rather than
// reusing any library code path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

/// Standard normal CDF via the Taylor series
///   Phi(z) = 1/2 + phi(z) * sum_{n>=0} z^(2n+1) / (1*3*5*...*(2n+1)),
/// evaluated in long double. All series terms share the sign of z, so there
/// is no cancellation; absolute error is far below 1e-15 for |z| <= 38.
inline long double phi_series(long double z) {
  if (z < -38.0L) return 0.0L;
  if (z > 38.0L) return 1.0L;
  const long double phi =
      std::exp(-0.5L * z * z) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  long double term = z;  // z^(2n+1) / (1*3*...*(2n+1)) at n=0
  long double sum = z;
  // Terms grow until 2n+1 ~ z^2 (about n = 722 at z = 38), so the iteration
  // cap has to sit well past that; the equality test below stops the loop as
  // soon as the sum converges.
  for (int n = 1; n < 4000; ++n) {
    term *= z * z / static_cast<long double>(2 * n + 1);
    const long double next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  long double p = 0.5L + phi * sum;
  if (p < 0.0L) p = 0.0L;
  if (p > 1.0L) p = 1.0L;
  return p;
}

/// P(latency > tau) under a Normal(mu, sigma^2) surrogate.
inline double naive_p_norm(double mu, double sigma, double tau) {
  if (sigma == 0.0) return mu < tau ? 0.0 : 1.0;
  const long double z = (static_cast<long double>(tau) - mu) / sigma;
  return static_cast<double>(1.0L - phi_series(z));
}

/// One-sided Cantelli bound, with the same conventions as the library:
/// 1.0 once the mean reaches tau, point mass rules at sigma == 0.
inline double naive_p_cant(double mu, double sigma, double tau) {
  if (mu >= tau) return 1.0;
  if (sigma == 0.0) return 0.0;
  const long double z = (static_cast<long double>(tau) - mu) / sigma;
  return static_cast<double>(1.0L / (1.0L + z * z));
}

struct NaiveSummary {
  double mean = 0.0;
  double deviation = 0.0;
  bool deviation_defined = false;
};

/// Two-pass mean and sample standard deviation in long double.
inline NaiveSummary naive_summary(const std::vector<double>& values) {
  NaiveSummary s;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  s.mean = static_cast<double>(mean);
  if (values.size() >= 2) {
    long double ss = 0.0L;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.deviation = static_cast<double>(
        std::sqrt(ss / static_cast<long double>(values.size() - 1)));
    s.deviation_defined = true;
  }
  return s;
}

struct NaiveMetrics {
  double dmr = 0.0;
  double mean_delay = 0.0;
  double p95_delay = 0.0;
  double switch_freq = 0.0;
  std::size_t switch_count = 0;
};

/// Recomputes every metric with plain loops over the experienced-latency
/// and selection sequences (strict > for misses, 1-based nearest rank
/// ceil(0.95 n) for the percentile, first frame never a switch).
inline NaiveMetrics naive_metrics(const std::vector<double>& experienced,
                                  const std::vector<int>& selected, double tau,
                                  std::size_t skip) {
  NaiveMetrics m;
  const std::size_t n = experienced.size() - skip;
  std::size_t misses = 0;
  long double sum = 0.0L;
  for (std::size_t t = skip; t < experienced.size(); ++t) {
    if (experienced[t] > tau) ++misses;
    sum += experienced[t];
  }
  m.dmr = static_cast<double>(misses) / static_cast<double>(n);
  m.mean_delay = static_cast<double>(sum / static_cast<long double>(n));

  std::vector<double> sorted(experienced.begin() + static_cast<std::ptrdiff_t>(skip),
                             experienced.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95L * static_cast<long double>(n)));
  if (rank == 0) rank = 1;
  m.p95_delay = sorted[rank - 1];

  // A counted frame is a switch when it differs from its predecessor; the
  // very first frame of the run has none.
  for (std::size_t t = (skip == 0 ? 1 : skip); t < selected.size(); ++t) {
    if (selected[t] != selected[t - 1]) ++m.switch_count;
  }
  m.switch_freq = static_cast<double>(m.switch_count) / static_cast<double>(n);
  return m;
}

}  // namespace oracles
