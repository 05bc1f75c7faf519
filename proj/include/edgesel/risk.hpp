#pragma once

#include "edgesel/summaries.hpp"

namespace edgesel {

/// Operating point of the latency objective: threshold tau, risk tolerance
/// epsilon and risk-aversion factor k for percentile scores.
struct SloConfig {
  double tau = 0.5;
  double epsilon = 0.15;
  double k = 1.645;

  /// Throws std::invalid_argument unless tau > 0, 0 < epsilon <= 1, k >= 0.
  void validate() const;
};

/// Per-server risk snapshot at one decision step. `defined` is false while
/// the server's deviation is still undefined (fewer than two samples); such
/// servers are never feasible and carry the conservative placeholder values
/// p_norm = p_cant = 1 and score = +infinity.
struct RiskAssessment {
  int server_id = -1;
  double p_norm = 1.0;
  double p_cant = 1.0;
  double score = 0.0;
  bool feasible = false;
  bool defined = false;

  static RiskAssessment no_data(int server_id);
};

/// Standard normal CDF, implemented via the complementary error function.
/// Absolute error is well below 1e-7 on [-8, 8]; result clamped to [0, 1].
/// Throws std::invalid_argument for non-finite input.
double std_normal_cdf(double z);

/// Probability that latency exceeds tau under a Normal(mean, deviation^2)
/// surrogate: 1 - Phi((tau - mean) / deviation). A zero deviation collapses
/// to a point mass: 0 if mean < tau, 1 otherwise (the boundary mean == tau
/// is counted as a violation). Throws std::domain_error when the deviation
/// is undefined.
double normal_violation_prob(const Summary& summary, double tau);

/// One-sided Cantelli tail bound 1 / (1 + z^2) with z = (tau - mean) /
/// deviation, valid only for tau above the mean; returns 1.0 whenever
/// mean >= tau so a server whose mean breaches the threshold never looks
/// low-risk. Zero deviation follows the same point-mass rule as above.
/// Throws std::domain_error when the deviation is undefined.
double cantelli_violation_prob(const Summary& summary, double tau);

/// Percentile score mean + k * deviation; an upper-percentile latency
/// estimate under the Normal surrogate. Throws std::domain_error when the
/// deviation is undefined.
double percentile_score(const Summary& summary, double k);

/// Evaluates both violation probabilities and the percentile score for one
/// server. Feasible iff both probabilities are strictly below epsilon.
/// Undefined deviations yield defined = false rather than an error.
RiskAssessment assess(const Summary& summary, const SloConfig& cfg, int server_id);

}  // namespace edgesel
