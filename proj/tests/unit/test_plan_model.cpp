#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "exeplan/error.hpp"
#include "exeplan/plan_model.hpp"
#include "support.hpp"

using namespace exeplan;

namespace {

using F = Formula;

GroundedPlan plan_of(std::vector<Formula> seq) {
  std::vector<PlanStep> steps;
  for (auto f : seq) steps.push_back({f, Mes{}});
  return ground(std::move(steps));
}

MlnModel random_model(std::mt19937_64& rng, bool coarse) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MlnModel m;
  for (auto& row : m.weights) {
    for (auto& w : row) w = coarse ? std::round(u(rng) * 3.0) : u(rng);
  }
  return m;
}

// Independent brute force: recursive enumeration, explicit score sum, and a
// lexicographic tie-break on the formula sequence.
std::vector<Formula> oracle_best(const MlnModel& m, std::size_t task, std::vector<Formula> items) {
  std::vector<Formula> best;
  double best_score = -1.0;
  std::vector<Formula> current;
  std::vector<bool> used(items.size(), false);
  auto score = [&](const std::vector<Formula>& seq) {
    double s = 0.0;
    for (auto f : seq) s += m.weights[task][index_of(f)];
    for (std::size_t i = 1; i < seq.size(); ++i) s += m.weights[task][index_of(*transition_between(seq[i - 1], seq[i]))];
    return s;
  };
  std::function<void()> rec = [&] {
    if (current.size() == items.size()) {
      const double s = score(current);
      if (s > best_score || (s == best_score && current < best)) {
        best_score = s;
        best = current;
      }
      return;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(items[i]);
      rec();
      current.pop_back();
      used[i] = false;
    }
  };
  rec();
  return best;
}

}  // namespace

TEST_SUITE("plan_model") {

TEST_CASE("three clauses at 0.3 each give 0.9") {
  MlnModel m;
  auto& drill = m.weights[m.task_index("drill")];
  drill[index_of(F::DrillHole)] = 0.3;
  drill[index_of(F::TranDC)] = 0.3;
  drill[index_of(F::CleanSpot)] = 0.3;
  CHECK(std::abs(score_plan(m, "drill", plan_of({F::DrillHole, F::CleanSpot})) - 0.9) <= 1e-12);
  CHECK(score_plan(m, "drill", GroundedPlan{}) == 0.0);
  CHECK(score_plan(MlnModel{}, "install", plan_of({F::DrillHole, F::InstallScrew})) == 0.0);
}

TEST_CASE("grounding") {
  auto p = plan_of({F::DrillHole, F::CleanSpot});
  FormulaSet expected;
  expected.set(index_of(F::DrillHole)).set(index_of(F::CleanSpot)).set(index_of(F::TranDC));
  CHECK(p.satisfied == expected);
  CHECK(p.transitions() == std::vector<Formula>{F::TranDC});
  CHECK(plan_of({F::CleanSpot}).satisfied.count() == 1);
  CHECK_THROWS_AS(plan_of({F::DrillHole, F::DrillHole}), DuplicateSubGoal);

  std::vector<SubGoalMention> mentions = {{{0, 0}, F::DrillHole, 1.0}, {{1, 1}, F::CleanSpot, 1.0}};
  CHECK(ground(mentions, {F::TranDC}, {}).satisfied == expected);
  CHECK_THROWS(ground(mentions, {F::TranCD}, {}));
  CHECK_THROWS(ground(mentions, {}, {}));
}

TEST_CASE("plans never repeat a basic formula and carry one transition per gap") {
  for (auto a : kBasicFormulas) {
    for (auto b : kBasicFormulas) {
      for (auto c : kBasicFormulas) {
        if (a == b || b == c || a == c) continue;
        auto p = plan_of({a, b, c});
        CHECK(p.transitions().size() == 2);
        CHECK(p.satisfied.count() == 5);
      }
    }
  }
}

TEST_CASE("classification picks the best task, ties to the first") {
  MlnModel m;
  const double fig[9] = {0.009, 0.243, 0.077, 0.169, 0.126, 0.104, 0.165, 0.108, 0.002};
  for (std::size_t i = 0; i < 9; ++i) {
    m.weights[0][i] = 0.05;
    m.weights[1][i] = fig[i];
    m.weights[2][i] = 0.05;
  }
  auto drill_clean = plan_of({F::DrillHole, F::CleanSpot});
  CHECK(m.task_types[classify_task(m, drill_clean).task] == "drill");
  CHECK(classify_task(MlnModel{}, drill_clean).task == 0);

  auto doubled = m;
  for (auto& row : doubled.weights) {
    for (auto& w : row) w *= 2.0;
  }
  CHECK(classify_task(doubled, drill_clean).task == classify_task(m, drill_clean).task);
}

TEST_CASE("argmax is the same under exponentiated scores") {
  std::mt19937_64 rng(5);
  const std::vector<std::vector<Formula>> plans = {
      {F::CleanSpot}, {F::DrillHole, F::CleanSpot}, {F::DrillHole, F::InstallScrew, F::CleanSpot},
      {F::InstallScrew}, {F::CleanSpot, F::DrillHole}};
  for (int t = 0; t < 100; ++t) {
    auto m = random_model(rng, false);
    for (double z : {0.5, 1.0, 7.0}) {
      for (const auto& seq : plans) {
        auto p = plan_of(seq);
        auto raw = classify_task(m, p);
        auto prob = classify_task(m, p, [z](double s) { return std::exp(s) / z; });
        CHECK(raw.task == prob.task);
      }
    }
  }
}

TEST_CASE("score is the sum of step and transition weights") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    auto m = random_model(rng, false);
    auto p = plan_of({F::InstallScrew, F::CleanSpot, F::DrillHole});
    const auto& w = m.weights[2];
    const double expected = w[index_of(F::InstallScrew)] + w[index_of(F::CleanSpot)] + w[index_of(F::DrillHole)] +
                            w[index_of(F::TranIC)] + w[index_of(F::TranCD)];
    CHECK(score_plan(m, "install", p) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("plan selection equals exhaustive enumeration") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    // coarse weights make ties common, so the tie-break is exercised too
    auto m = random_model(rng, t % 2 == 0);
    std::vector<Formula> pool = {F::CleanSpot, F::DrillHole, F::InstallScrew};
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % 3);
    const std::size_t task = rng() % 3;
    std::vector<PlanStep> candidates;
    for (auto f : pool) candidates.push_back({f, Mes{}});
    auto chosen = select_plan(m, task, candidates);
    CHECK(chosen.sequence() == oracle_best(m, task, pool));
    CHECK(chosen.steps.size() == pool.size());
  }
}

TEST_CASE("plan selection examples") {
  MlnModel m;
  auto& drill = m.weights[1];
  drill[index_of(F::DrillHole)] = 0.3;
  drill[index_of(F::TranDC)] = 0.3;
  drill[index_of(F::CleanSpot)] = 0.3;
  drill[index_of(F::TranCD)] = 0.1;
  std::vector<PlanStep> candidates = {{F::CleanSpot, Mes{}}, {F::DrillHole, Mes{}}};
  CHECK(select_plan(m, "drill", candidates).sequence() == std::vector<Formula>{F::DrillHole, F::CleanSpot});
  CHECK(select_plan(m, "drill", {{F::InstallScrew, Mes{}}}).sequence() == std::vector<Formula>{F::InstallScrew});
  CHECK_THROWS_AS(select_plan(m, "drill", {}), NoCandidates);

  // the MES travels with its formula
  Mes at_center;
  at_center.loc = "center";
  auto chosen = select_plan(m, "drill", {{F::CleanSpot, Mes{}}, {F::DrillHole, at_center}});
  CHECK(chosen.steps[0].mes.loc == std::optional<std::string>("center"));
}

TEST_CASE("model file round-trips and rejects bad weights") {
  std::mt19937_64 rng(1);
  auto m = random_model(rng, false);
  const auto text = serialize_model(m);
  CHECK(serialize_model(parse_model(text)) == text);
  CHECK(parse_model(text) == m);
  CHECK(parse_model(serialize_model(testing::shipped_models().planner)) == testing::shipped_models().planner);

  auto negative = m;
  negative.weights[0][0] = -1.0;
  CHECK_THROWS(parse_model(serialize_model(negative)));
  CHECK_THROWS(parse_model("{\"version\": 1}"));
  CHECK_THROWS(MlnModel{}.task_index("paint"));
}

}  // TEST_SUITE
