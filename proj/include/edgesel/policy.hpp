#pragma once

#include "edgesel/risk.hpp"

#include <optional>
#include <string>
#include <vector>

namespace edgesel {

enum class TieBreak { prefer_current_then_lowest_id };

enum class Observability { full, selected_only };

/// Knobs shared by the selection policies. `delta` is the relative score
/// improvement a challenger must sustain, `dwell` the number of consecutive
/// qualifying steps before a switch commits.
struct PolicyConfig {
  SloConfig slo;
  double delta = 0.05;
  std::size_t dwell = 5;
  TieBreak tie_break = TieBreak::prefer_current_then_lowest_id;
  bool reset_on_challenger_change = false;
  std::size_t min_samples = 2;

  void validate() const;
};

/// Mutable policy state carried across decision steps: the incumbent server,
/// the hysteresis counter and the challenger the counter is tracking.
struct PolicyState {
  std::optional<int> current;
  std::size_t counter = 0;
  std::optional<int> last_challenger;
};

enum class Reason {
  initial,
  hold_no_feasible,
  hold_insufficient_improvement,
  hold_counter,
  switch_committed,
  best_risk,
};

std::string to_string(Reason reason);

/// Outcome of one decision step.
struct Decision {
  int selected = -1;
  bool switched = false;
  std::vector<int> feasible;
  std::vector<RiskAssessment> assessments;
  Reason reason = Reason::initial;
  /// The candidate the policy ranked best this step (challenger for the
  /// hysteresis policy), independent of whether it was adopted.
  std::optional<int> best_candidate;
};

/// Mean-only policy: picks the server with the lowest windowed mean among
/// servers with at least one sample. Ties prefer the incumbent, then the
/// lowest id. Throws std::runtime_error when no server has data.
Decision baseline_select(const std::vector<std::optional<Summary>>& summaries,
                         const PolicyState& state);

/// Servers whose Normal and Cantelli violation probabilities are both below
/// tolerance, i.e. the ids with assessment.feasible set. Sorted ascending.
std::vector<int> feasible_set(const std::vector<RiskAssessment>& assessments);

/// Hybrid risk selection: ranks defined servers by the Normal violation
/// probability and adopts the best one only if it also clears the Cantelli
/// safeguard; otherwise holds the incumbent. Requires state.current to be
/// set (warm-up is handled by bootstrap_select).
Decision hybrid_risk_select(const std::vector<RiskAssessment>& assessments,
                            const PolicyState& state);

struct HysteresisResult {
  Decision decision;
  PolicyState state;
};

/// Percentile-based hysteresis control. Among feasible servers the lowest
/// percentile score is the challenger; a switch commits only after the
/// challenger beats the incumbent's score by delta * score_curr for dwell
/// consecutive steps. An incumbent with an undefined deviation scores
/// +infinity, so any feasible challenger qualifies. score entries are empty
/// for servers whose deviation is undefined. Requires state.current set.
HysteresisResult hysteresis_step(const std::vector<RiskAssessment>& assessments,
                                 const std::vector<std::optional<double>>& scores,
                                 const PolicyState& state, const PolicyConfig& cfg);

/// Warm-up probing before every server has min_samples observations: in
/// selected-only observability frame t probes server t mod K; with full
/// observability the lowest id is held while windows fill.
int bootstrap_select(std::size_t step_index, std::size_t num_servers,
                     Observability observability);

}  // namespace edgesel
