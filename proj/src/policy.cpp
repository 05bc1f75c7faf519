#include "edgesel/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgesel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// argmin with the shared tie-break rule: smallest value wins; on ties the
// incumbent beats any other candidate, otherwise the lowest id (ids are
// visited in ascending order).
template <typename ValueOf>
int argmin_with_tiebreak(const std::vector<int>& ids, std::optional<int> current,
                         ValueOf value_of) {
  int best = -1;
  double best_value = kInf;
  for (int id : ids) {
    const double v = value_of(id);
    if (best < 0 || v < best_value) {
      best = id;
      best_value = v;
    } else if (v == best_value && current && id == *current) {
      best = id;
    }
  }
  return best;
}

}  // namespace

void PolicyConfig::validate() const {
  slo.validate();
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be finite and >= 0");
  }
  if (dwell < 1) {
    throw std::invalid_argument("dwell must be >= 1");
  }
  if (min_samples < 1) {
    throw std::invalid_argument("min_samples must be >= 1");
  }
}

std::string to_string(Reason reason) {
  switch (reason) {
    case Reason::initial: return "initial";
    case Reason::hold_no_feasible: return "hold_no_feasible";
    case Reason::hold_insufficient_improvement: return "hold_insufficient_improvement";
    case Reason::hold_counter: return "hold_counter";
    case Reason::switch_committed: return "switch_committed";
    case Reason::best_risk: return "best_risk";
  }
  return "unknown";
}

Decision baseline_select(const std::vector<std::optional<Summary>>& summaries,
                         const PolicyState& state) {
  std::vector<int> eligible;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    if (summaries[i] && summaries[i]->count >= 1) {
      eligible.push_back(static_cast<int>(i));
    }
  }
  if (eligible.empty()) {
    throw std::runtime_error("baseline_select: no server has any samples");
  }

  Decision d;
  d.selected = argmin_with_tiebreak(eligible, state.current, [&](int id) {
    return summaries[static_cast<std::size_t>(id)]->mean;
  });
  d.best_candidate = d.selected;
  d.switched = state.current.has_value() && d.selected != *state.current;
  d.reason = state.current.has_value() ? Reason::best_risk : Reason::initial;
  d.feasible = eligible;
  return d;
}

std::vector<int> feasible_set(const std::vector<RiskAssessment>& assessments) {
  std::vector<int> out;
  for (std::size_t i = 0; i < assessments.size(); ++i) {
    if (assessments[i].feasible) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

Decision hybrid_risk_select(const std::vector<RiskAssessment>& assessments,
                            const PolicyState& state) {
  if (!state.current.has_value()) {
    throw std::logic_error("hybrid_risk_select: no incumbent server");
  }
  const int curr = *state.current;

  Decision d;
  d.feasible = feasible_set(assessments);
  d.assessments = assessments;

  std::vector<int> defined;
  for (std::size_t i = 0; i < assessments.size(); ++i) {
    if (assessments[i].defined) {
      defined.push_back(static_cast<int>(i));
    }
  }
  if (defined.empty()) {
    d.selected = curr;
    d.switched = false;
    d.reason = Reason::hold_no_feasible;
    return d;
  }

  const int j = argmin_with_tiebreak(defined, state.current, [&](int id) {
    return assessments[static_cast<std::size_t>(id)].p_norm;
  });
  d.best_candidate = j;

  if (assessments[static_cast<std::size_t>(j)].feasible) {
    d.selected = j;
    d.switched = j != curr;
    d.reason = Reason::best_risk;
  } else {
    // No feasible server: stay where we are.
    d.selected = curr;
    d.switched = false;
    d.reason = Reason::hold_no_feasible;
  }
  return d;
}

HysteresisResult hysteresis_step(const std::vector<RiskAssessment>& assessments,
                                 const std::vector<std::optional<double>>& scores,
                                 const PolicyState& state, const PolicyConfig& cfg) {
  if (!state.current.has_value()) {
    throw std::logic_error("hysteresis_step: no incumbent server");
  }
  const int curr = *state.current;

  HysteresisResult r;
  r.state = state;
  r.decision.feasible = feasible_set(assessments);
  r.decision.assessments = assessments;
  r.decision.selected = curr;
  r.decision.switched = false;

  if (r.decision.feasible.empty()) {
    r.state.counter = 0;
    r.state.last_challenger.reset();
    r.decision.reason = Reason::hold_no_feasible;
    return r;
  }

  const int j = argmin_with_tiebreak(r.decision.feasible, state.current, [&](int id) {
    return *scores[static_cast<std::size_t>(id)];
  });
  r.decision.best_candidate = j;

  if (j == curr) {
    // Incumbent is the best feasible server; nothing to track.
    r.state.counter = 0;
    r.state.last_challenger.reset();
    r.decision.reason = Reason::best_risk;
    return r;
  }

  const auto& curr_score = scores[static_cast<std::size_t>(curr)];
  const double score_curr = curr_score.has_value() ? *curr_score : kInf;
  const double score_j = *scores[static_cast<std::size_t>(j)];

  // An unassessable incumbent loses to any feasible challenger.
  const bool qualifies = std::isinf(score_curr)
                             ? true
                             : score_curr - score_j >= cfg.delta * score_curr;

  if (qualifies) {
    if (cfg.reset_on_challenger_change && r.state.last_challenger &&
        *r.state.last_challenger != j) {
      r.state.counter = 1;
    } else {
      r.state.counter = state.counter + 1;
    }
    r.state.last_challenger = j;
    if (r.state.counter >= cfg.dwell) {
      r.decision.selected = j;
      r.decision.switched = true;
      r.decision.reason = Reason::switch_committed;
      r.state.current = j;
      r.state.counter = 0;
      r.state.last_challenger.reset();
    } else {
      r.decision.reason = Reason::hold_counter;
    }
  } else {
    r.state.counter = 0;
    r.state.last_challenger.reset();
    r.decision.reason = Reason::hold_insufficient_improvement;
  }
  return r;
}

int bootstrap_select(std::size_t step_index, std::size_t num_servers,
                     Observability observability) {
  if (num_servers == 0) {
    throw std::invalid_argument("bootstrap_select: no servers");
  }
  if (observability == Observability::selected_only) {
    return static_cast<int>(step_index % num_servers);
  }
  return 0;
}

}  // namespace edgesel
