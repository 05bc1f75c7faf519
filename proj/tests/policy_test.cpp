#include "edgesel/policy.hpp"

#include "edgesel/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace edgesel;

namespace {

std::optional<Summary> S(double mean, double deviation, std::size_t count = 20) {
  Summary s;
  s.mean = mean;
  s.deviation = deviation;
  s.count = count;
  return s;
}

RiskAssessment A(int id, double p_norm, double p_cant, bool feasible) {
  RiskAssessment a;
  a.server_id = id;
  a.p_norm = p_norm;
  a.p_cant = p_cant;
  a.feasible = feasible;
  a.defined = true;
  return a;
}

PolicyState with_current(int id, std::size_t counter = 0) {
  PolicyState st;
  st.current = id;
  st.counter = counter;
  return st;
}

}  // namespace

TEST_CASE("baseline picks the lowest mean") {
  const std::vector<std::optional<Summary>> summaries{S(0.45, 0.01), S(0.40, 0.01),
                                                      S(0.50, 0.01)};
  const Decision d = baseline_select(summaries, with_current(0));
  CHECK(d.selected == 1);
  CHECK(d.switched);
  CHECK(d.reason == Reason::best_risk);
}

TEST_CASE("baseline tie-breaks toward the incumbent, then the lowest id") {
  const std::vector<std::optional<Summary>> summaries{S(0.40, 0.01), S(0.40, 0.01)};

  const Decision keep = baseline_select(summaries, with_current(1));
  CHECK(keep.selected == 1);
  CHECK_FALSE(keep.switched);

  const Decision fresh = baseline_select(summaries, PolicyState{});
  CHECK(fresh.selected == 0);
  CHECK_FALSE(fresh.switched);
  CHECK(fresh.reason == Reason::initial);
}

TEST_CASE("baseline considers single-sample servers and rejects empty input") {
  std::vector<std::optional<Summary>> summaries{std::nullopt, std::nullopt};
  CHECK_THROWS_AS(baseline_select(summaries, PolicyState{}), std::runtime_error);

  summaries[1] = S(0.3, 0.0, 1);
  summaries[1]->deviation.reset();  // one sample, no deviation yet
  const Decision d = baseline_select(summaries, PolicyState{});
  CHECK(d.selected == 1);
}

TEST_CASE("feasible_set applies the strict two-bound condition") {
  const std::vector<RiskAssessment> assessments{
      A(0, 0.01, 0.0588, true),
      A(1, 0.2, 0.5, false),
      RiskAssessment::no_data(2),
  };
  const std::vector<int> f = feasible_set(assessments);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == 0);
}

TEST_CASE("hybrid risk adopts the lowest normal-tail server when feasible") {
  // Two feasible servers; the higher-mean one has the smaller tail.
  const std::vector<RiskAssessment> assessments{
      A(0, 3.2e-5, 0.0588, true),  // z=4
      A(1, 2.9e-7, 0.0385, true),  // z=5
  };
  const Decision d = hybrid_risk_select(assessments, with_current(0));
  CHECK(d.selected == 1);
  CHECK(d.switched);
  CHECK(d.reason == Reason::best_risk);
  CHECK(d.best_candidate == 1);
}

TEST_CASE("hybrid risk holds the incumbent when nothing is feasible") {
  const std::vector<RiskAssessment> assessments{
      A(0, 0.48, 0.9, false),
      A(1, 0.6, 0.95, false),
  };
  const Decision d = hybrid_risk_select(assessments, with_current(1));
  CHECK(d.selected == 1);
  CHECK_FALSE(d.switched);
  CHECK(d.reason == Reason::hold_no_feasible);
}

TEST_CASE("hybrid risk keeps a feasible incumbent on ties and needs an incumbent") {
  const std::vector<RiskAssessment> assessments{
      A(0, 0.01, 0.05, true),
      A(1, 0.01, 0.05, true),
  };
  const Decision d = hybrid_risk_select(assessments, with_current(1));
  CHECK(d.selected == 1);
  CHECK_FALSE(d.switched);

  CHECK_THROWS_AS(hybrid_risk_select(assessments, PolicyState{}), std::logic_error);
}

TEST_CASE("hysteresis counts qualifying steps before committing") {
  PolicyConfig cfg;  // delta=0.05, dwell=5
  // Incumbent 0 scores 0.50; challenger 1 scores 0.47: improvement 0.03
  // against a bar of 0.025, so every step qualifies.
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.005, 0.04, true)};
  const std::vector<std::optional<double>> scores{0.50, 0.47};

  PolicyState st = with_current(0);
  for (std::size_t step = 1; step < cfg.dwell; ++step) {
    const HysteresisResult r = hysteresis_step(assessments, scores, st, cfg);
    CHECK(r.decision.selected == 0);
    CHECK_FALSE(r.decision.switched);
    CHECK(r.decision.reason == Reason::hold_counter);
    CHECK(r.state.counter == step);
    CHECK(r.state.last_challenger == 1);
    st = r.state;
  }
  const HysteresisResult r = hysteresis_step(assessments, scores, st, cfg);
  CHECK(r.decision.selected == 1);
  CHECK(r.decision.switched);
  CHECK(r.decision.reason == Reason::switch_committed);
  CHECK(r.state.current == 1);
  CHECK(r.state.counter == 0);
  CHECK_FALSE(r.state.last_challenger.has_value());
}

TEST_CASE("hysteresis resets the counter on a non-qualifying step") {
  PolicyConfig cfg;
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.005, 0.04, true)};
  // improvement 0.01 < 0.05 * 0.50
  const std::vector<std::optional<double>> scores{0.50, 0.49};
  const HysteresisResult r =
      hysteresis_step(assessments, scores, with_current(0, 3), cfg);
  CHECK(r.decision.selected == 0);
  CHECK(r.decision.reason == Reason::hold_insufficient_improvement);
  CHECK(r.state.counter == 0);
}

TEST_CASE("hysteresis clears the counter when no server is feasible") {
  PolicyConfig cfg;
  const std::vector<RiskAssessment> assessments{A(0, 0.4, 0.9, false),
                                                A(1, 0.3, 0.8, false)};
  const std::vector<std::optional<double>> scores{0.50, 0.45};
  PolicyState st = with_current(0, 4);
  st.last_challenger = 1;
  const HysteresisResult r = hysteresis_step(assessments, scores, st, cfg);
  CHECK(r.decision.selected == 0);
  CHECK(r.decision.reason == Reason::hold_no_feasible);
  CHECK(r.state.counter == 0);
  CHECK_FALSE(r.state.last_challenger.has_value());
}

TEST_CASE("hysteresis holds and resets when the incumbent is already best") {
  PolicyConfig cfg;
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.02, 0.06, true)};
  const std::vector<std::optional<double>> scores{0.45, 0.47};
  const HysteresisResult r =
      hysteresis_step(assessments, scores, with_current(0, 2), cfg);
  CHECK(r.decision.selected == 0);
  CHECK(r.decision.reason == Reason::best_risk);
  CHECK(r.state.counter == 0);
}

TEST_CASE("the strict improvement bar uses >= exactly") {
  PolicyConfig cfg;
  cfg.dwell = 1;
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.005, 0.04, true)};

  // improvement == delta * score_curr exactly: 0.50 - 0.475 = 0.025
  const std::vector<std::optional<double>> boundary{0.50, 0.475};
  const HysteresisResult hit =
      hysteresis_step(assessments, boundary, with_current(0), cfg);
  CHECK(hit.decision.selected == 1);

  const std::vector<std::optional<double>> below{0.50, 0.4750001};
  const HysteresisResult miss =
      hysteresis_step(assessments, below, with_current(0), cfg);
  CHECK(miss.decision.selected == 0);
}

TEST_CASE("an unassessable incumbent loses to any feasible challenger") {
  PolicyConfig cfg;
  cfg.dwell = 1;
  cfg.delta = 0.0;  // would otherwise multiply infinity by zero
  std::vector<RiskAssessment> assessments{RiskAssessment::no_data(0),
                                          A(1, 0.005, 0.04, true)};
  const std::vector<std::optional<double>> scores{std::nullopt, 0.47};
  const HysteresisResult r = hysteresis_step(assessments, scores, with_current(0), cfg);
  CHECK(r.decision.selected == 1);
  CHECK(r.decision.reason == Reason::switch_committed);
}

TEST_CASE("challenger changes keep or restart the counter depending on the flag") {
  PolicyConfig cfg;  // dwell=5
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.005, 0.04, true),
                                                A(2, 0.006, 0.045, true)};
  const std::vector<std::optional<double>> j_is_1{0.50, 0.45, 0.46};
  const std::vector<std::optional<double>> j_is_2{0.50, 0.46, 0.45};

  SUBCASE("pseudocode-literal default keeps counting") {
    PolicyState st = with_current(0);
    st = hysteresis_step(assessments, j_is_1, st, cfg).state;
    CHECK(st.counter == 1);
    st = hysteresis_step(assessments, j_is_2, st, cfg).state;
    CHECK(st.counter == 2);
    CHECK(st.last_challenger == 2);
  }

  SUBCASE("reset_on_challenger_change restarts at one") {
    cfg.reset_on_challenger_change = true;
    PolicyState st = with_current(0);
    st = hysteresis_step(assessments, j_is_1, st, cfg).state;
    st = hysteresis_step(assessments, j_is_1, st, cfg).state;
    CHECK(st.counter == 2);
    st = hysteresis_step(assessments, j_is_2, st, cfg).state;
    CHECK(st.counter == 1);
    CHECK(st.last_challenger == 2);
  }
}

TEST_CASE("counter stays below the dwell window after every step") {
  PolicyConfig cfg;
  cfg.dwell = 3;
  Rng rng(5150);
  const std::vector<RiskAssessment> assessments{A(0, 0.01, 0.05, true),
                                                A(1, 0.005, 0.04, true)};
  PolicyState st = with_current(0);
  for (int step = 0; step < 500; ++step) {
    const double challenger = 0.40 + rng.uniform01() * 0.15;
    std::vector<std::optional<double>> scores{0.50, challenger};
    if (*st.current == 1) scores = {challenger, 0.50};
    const HysteresisResult r = hysteresis_step(assessments, scores, st, cfg);
    CHECK(r.state.counter < cfg.dwell);
    if (r.decision.switched) {
      CHECK(r.decision.reason == Reason::switch_committed);
      CHECK(r.decision.selected != *st.current);
    }
    st = r.state;
  }
}

TEST_CASE("bootstrap probing") {
  CHECK(bootstrap_select(0, 3, Observability::selected_only) == 0);
  CHECK(bootstrap_select(1, 3, Observability::selected_only) == 1);
  CHECK(bootstrap_select(2, 3, Observability::selected_only) == 2);
  CHECK(bootstrap_select(3, 3, Observability::selected_only) == 0);
  CHECK(bootstrap_select(5, 3, Observability::selected_only) == 2);
  CHECK(bootstrap_select(0, 3, Observability::full) == 0);
  CHECK(bootstrap_select(7, 3, Observability::full) == 0);
  CHECK(bootstrap_select(4, 1, Observability::selected_only) == 0);
  CHECK_THROWS_AS(bootstrap_select(0, 0, Observability::full), std::invalid_argument);
}

TEST_CASE("policy config validation") {
  PolicyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.delta = -0.01;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PolicyConfig{};
  cfg.dwell = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PolicyConfig{};
  cfg.min_samples = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PolicyConfig{};
  cfg.delta = 0.0;  // reduction runs rely on a zero threshold being legal
  cfg.dwell = 1;
  CHECK_NOTHROW(cfg.validate());
}
