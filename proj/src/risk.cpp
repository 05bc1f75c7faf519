#include "edgesel/risk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace edgesel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_deviation(const Summary& summary) {
  if (!summary.deviation.has_value()) {
    throw std::domain_error("insufficient samples: deviation undefined (count=" +
                            std::to_string(summary.count) + ")");
  }
  return *summary.deviation;
}

}  // namespace

void SloConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be finite and > 0");
  }
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1]");
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("k must be finite and >= 0");
  }
}

RiskAssessment RiskAssessment::no_data(int server_id) {
  RiskAssessment a;
  a.server_id = server_id;
  a.p_norm = 1.0;
  a.p_cant = 1.0;
  a.score = kInf;
  a.feasible = false;
  a.defined = false;
  return a;
}

double std_normal_cdf(double z) {
  if (!std::isfinite(z)) {
    throw std::invalid_argument("std_normal_cdf: non-finite argument");
  }
  const double p = 0.5 * std::erfc(-z * M_SQRT1_2);
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

double normal_violation_prob(const Summary& summary, double tau) {
  const double sigma = require_deviation(summary);
  const double mu = summary.mean;
  if (sigma == 0.0) {
    return mu < tau ? 0.0 : 1.0;
  }
  // 1 - Phi(z), evaluated in its complementary form 0.5 * erfc(z / sqrt(2)).
  // The naive subtraction saturates to exactly zero once Phi(z) rounds to 1
  // (z above roughly 8), which would tie every strong server at zero risk
  // and quietly reduce risk ranking to id order; erfc keeps the tail
  // strictly decreasing all the way down to the underflow threshold.
  const double z = (tau - mu) / sigma;
  const double p = 0.5 * std::erfc(z * M_SQRT1_2);
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

double cantelli_violation_prob(const Summary& summary, double tau) {
  const double sigma = require_deviation(summary);
  const double mu = summary.mean;
  // The one-sided bound only holds for thresholds above the mean.
  if (mu >= tau) {
    return 1.0;
  }
  if (sigma == 0.0) {
    return 0.0;
  }
  const double z = (tau - mu) / sigma;
  return 1.0 / (1.0 + z * z);
}

double percentile_score(const Summary& summary, double k) {
  const double sigma = require_deviation(summary);
  return summary.mean + k * sigma;
}

RiskAssessment assess(const Summary& summary, const SloConfig& cfg, int server_id) {
  if (!summary.deviation.has_value()) {
    return RiskAssessment::no_data(server_id);
  }
  RiskAssessment a;
  a.server_id = server_id;
  a.p_norm = normal_violation_prob(summary, cfg.tau);
  a.p_cant = cantelli_violation_prob(summary, cfg.tau);
  a.score = percentile_score(summary, cfg.k);
  a.defined = true;
  a.feasible = a.p_norm < cfg.epsilon && a.p_cant < cfg.epsilon;
  return a;
}

}  // namespace edgesel
