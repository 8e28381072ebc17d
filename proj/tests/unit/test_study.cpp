#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "tapdrag/gesture_integrator.hpp"
#include "tapdrag/study_harness.hpp"
#include "tapdrag/trace_io.hpp"

using namespace tapdrag;
using namespace tapdrag::study;

TEST_CASE("session: 400 trials, balanced cells, exact distances") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    StudyConfig cfg;
    cfg.seed = seed;
    const auto trials = generate_session(cfg);
    REQUIRE(trials.size() == 400);
    std::map<std::tuple<Technique, bool, SourceArea, Distance, Direction>, int> cells;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto& t = trials[i];
      REQUIRE(t.index == static_cast<int>(i));
      REQUIRE(check_trial(t, cfg).empty());
      REQUIRE(distance(t.source, t.target) == distance_mm(t.distance));
      ++cells[{t.technique, t.target_visible, t.source_area, t.distance, t.direction}];
    }
    CHECK(cells.size() == 40);
    for (const auto& [k, n] : cells) CHECK(n == 10);
  }
}

TEST_CASE("long drags head away from their half") {
  StudyConfig cfg;
  cfg.seed = 5;
  for (const auto& t : generate_session(cfg)) {
    if (t.distance != Distance::long_drag) continue;
    CHECK(t.target.y == t.source.y);
    if (t.source_area == SourceArea::left_half) {
      CHECK(t.target.x - t.source.x == 550.0);
    } else {
      CHECK(t.source.x - t.target.x == 550.0);
    }
  }
}

TEST_CASE("determinism and seed sensitivity") {
  StudyConfig a;
  a.seed = 7;
  CHECK(generate_session(a) == generate_session(a));
  StudyConfig b = a;
  b.seed = 8;
  CHECK(generate_session(a) != generate_session(b));
  const auto study = generate_study(a, 3);
  CHECK(study.size() == 1200);
  CHECK(std::vector<TrialSpec>(study.begin(), study.begin() + 400) == generate_session(a));
  CHECK(study.back().index == 1199);
}

TEST_CASE("display too small") {
  StudyConfig cfg;
  cfg.display = {600, 398};
  CHECK_THROWS_AS(generate_session(cfg), StudyError);
}

TEST_CASE("evaluate_trial") {
  TrialSpec spec;
  spec.index = 4;
  spec.target = {300, 200};
  TrialLog log{4, 500, 2000, {300, 200}, {}};
  auto r = evaluate_trial(spec, log);
  CHECK(r.passed);
  CHECK(r.completion_time_s == 1.5);
  log.drop_point = {300, 217.5};
  CHECK(evaluate_trial(spec, log).passed);
  log.drop_point = {300, 218.0};
  CHECK_FALSE(evaluate_trial(spec, log).passed);
  log.trial_index = 5;
  CHECK_THROWS_AS(evaluate_trial(spec, log), StudyError);
  log = {4, 500, 500, {}, {}};
  CHECK_THROWS_AS(evaluate_trial(spec, log), std::invalid_argument);
}

TEST_CASE("evaluate_trial is translation invariant") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    TrialSpec spec;
    spec.target = {300, 200};
    TrialLog log{0, 0, 1000, {300 + u(rng) / 2, 200 + u(rng) / 2}, {}};
    const bool base = evaluate_trial(spec, log).passed;
    // Shift by multiples of 1/8 mm so the shifted distance is unchanged.
    const Vector2 shift{std::round(u(rng)) * 0.125, std::round(u(rng)) * 0.125};
    const Point2 d0 = log.drop_point;
    spec.target = spec.target + shift;
    log.drop_point = d0 + shift;
    if (distance(log.drop_point, spec.target) == distance(d0, spec.target - shift)) {
      CHECK(evaluate_trial(spec, log).passed == base);
    }
  }
}

TEST_CASE("synthesized performances pass under both techniques") {
  StudyConfig cfg;
  cfg.seed = 3;
  const auto trials = generate_session(cfg);
  for (int i = 0; i < 40; ++i) {
    const auto& spec = trials[static_cast<std::size_t>(i)];
    const auto events = synthesize_trial_events(spec, 1000.0);
    const auto log = run_trial(spec, events, {});
    CHECK(log.drop_point == spec.target);
    CHECK(evaluate_trial(spec, log).passed);
  }
}

TEST_CASE("quantiles and five-number summary") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  const auto f = five_number_summary({3, 1, 2});
  CHECK(f.min == 1);
  CHECK(f.median == 2);
  CHECK(f.max == 3);
  CHECK_THROWS_AS(five_number_summary({}), StudyError);
}

TEST_CASE("summarize: example, grouping, permutation invariance") {
  TrialSpec a, b, c;
  a.index = 0;
  b.index = 1;
  c.index = 2;
  c.technique = Technique::traditional;
  std::vector<JoinedTrial> rows = {{a, {0, 1, true}}, {b, {1, 2, true}}, {c, {2, 3, true}}};
  const auto all = summarize(rows, {});
  REQUIRE(all.size() == 1);
  CHECK(all[0].key == "all");
  CHECK(all[0].mean_time_s == 2.0);
  CHECK(all[0].failure_rate == 0.0);

  const Factor by[] = {Factor::technique};
  const auto g = summarize(rows, by);
  REQUIRE(g.size() == 2);
  CHECK(g[0].key == "technique=tapdrag");
  CHECK(g[0].n == 2);

  std::mt19937_64 rng(2);
  std::vector<JoinedTrial> many;
  std::uniform_real_distribution<double> u(0.5, 3);
  for (int i = 0; i < 200; ++i) {
    TrialSpec s;
    s.index = i;
    many.push_back({s, {i, u(rng), i % 7 != 0}});
  }
  const auto ref = summarize(many, {});
  for (int k = 0; k < 20; ++k) {
    std::shuffle(many.begin(), many.end(), rng);
    const auto again = summarize(many, {});
    CHECK(again[0].mean_time_s == ref[0].mean_time_s);
    CHECK(again[0].times.q1 == ref[0].times.q1);
  }
  CHECK_THROWS_AS(summarize(std::vector<JoinedTrial>{}, {}), StudyError);
}

TEST_CASE("CSV round trips and join") {
  StudyConfig cfg;
  cfg.seed = 11;
  const auto trials = generate_session(cfg);
  const auto csv = trials_to_csv(trials);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 401);
  CHECK(trials_from_csv(csv) == trials);
  std::vector<TrialResult> results;
  for (const auto& t : trials) results.push_back({t.index, 1.25, t.index % 2 == 0});
  CHECK(results_from_csv(results_to_csv(results)) == results);
  CHECK(join(trials, results).size() == 400);
  results.push_back({9999, 1, true});
  CHECK_THROWS_AS(join(trials, results), StudyError);
  CHECK_THROWS_AS(results_from_csv("nope\n"), ParseError);
}
