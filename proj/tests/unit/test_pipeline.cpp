#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "exeplan/error.hpp"
#include "exeplan/pipeline.hpp"
#include "support.hpp"

using namespace exeplan;
using namespace exeplan::testing;

namespace {

using F = Formula;

const char* const kThreeStep = "please drill a hole at the middle, install a screw. Keep the surface clean";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 0.3 on every clause of a drill -> clean plan, so that plan scores 0.9.
MlnModel point_three_model() {
  MlnModel m;
  for (auto& row : m.weights) row.fill(0.0);
  const auto drill = m.task_index("drill");
  m.weights[drill][index_of(F::DrillHole)] = 0.3;
  m.weights[drill][index_of(F::TranDC)] = 0.3;
  m.weights[drill][index_of(F::CleanSpot)] = 0.3;
  const auto clean = m.task_index("clean");
  m.weights[clean][index_of(F::CleanSpot)] = 0.3;
  m.weights[clean][index_of(F::TranCI)] = 0.3;
  m.weights[clean][index_of(F::InstallScrew)] = 0.3;
  return m;
}

PlanStep complete_step(F f, const std::string& loc, const WorldState& world) {
  Mes partial;
  partial.loc = loc;
  return {f, complete_mes(partial, f, shipped_kb(), world)};
}

WorldState without_drill_tools(WorldState w) {
  for (const auto& t : shipped_kb().at(F::DrillHole).tool) w.available_tools.erase(t);
  return w;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("three-step instruction compiles to drill, install, clean") {
  const auto r = compile(kThreeStep, shipped_models(), shipped_world());
  REQUIRE(r.ok());
  const auto& plan = r.plan();
  CHECK(plan.executable);
  CHECK(plan.task_type == "install");
  REQUIRE(plan.steps.size() == 3);
  CHECK(plan.steps[0].formula == F::DrillHole);
  CHECK(plan.steps[1].formula == F::InstallScrew);
  CHECK(plan.steps[2].formula == F::CleanSpot);
  CHECK(plan.transitions == std::vector<Formula>{F::TranDI, F::TranIC});
  for (const auto& s : plan.steps) {
    CHECK(s.mes.complete());
    CHECK(s.mes.loc == "center");
  }
  CHECK(plan.executability > plan.threshold);
  CHECK(plan.threshold == kDefaultThreshold);
}

TEST_CASE("three-step plan document matches the golden file") {
  const auto r = compile(kThreeStep, shipped_models(), shipped_world());
  REQUIRE(r.ok());
  CHECK(export_plan(r.plan()) == read_file(std::filesystem::path(EXEPLAN_TEST_GOLDEN_DIR) / "three_step_plan.json"));
}

TEST_CASE("no sub-goal") {
  const auto r = compile("hello there", shipped_models(), shipped_world());
  REQUIRE_FALSE(r.ok());
  CHECK(r.failure().stage == FailureStage::NoSubgoals);
  CHECK_FALSE(r.failure().message.empty());
  CHECK_FALSE(r.task_type.has_value());
}

TEST_CASE("missing drill tool surfaces as MES_INCOMPLETE") {
  const auto r = compile(kThreeStep, shipped_models(), without_drill_tools(shipped_world()));
  REQUIRE_FALSE(r.ok());
  CHECK(r.failure().stage == FailureStage::MesIncomplete);
  CHECK(r.failure().details == std::vector<std::string>{"DrillHole.tool"});
  REQUIRE(r.failure().partial.has_value());
  CHECK_FALSE(r.failure().partial->executable);
}

TEST_CASE("assess: threshold on the 0.9 plan") {
  const auto model = point_three_model();
  const auto world = shipped_world();
  std::vector<PlanStep> steps = {complete_step(F::DrillHole, "center", world)};
  WorldState after = world;
  apply_effects(F::DrillHole, "center", after);
  steps.push_back(complete_step(F::CleanSpot, "center", after));
  const auto plan = ground(steps);

  const auto ok = assess(plan, model.task_index("drill"), model, world, 0.5);
  CHECK(ok.executable);
  CHECK(ok.executability == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(ok.failing.empty());

  const auto high = assess(plan, model.task_index("drill"), model, world, 0.95);
  CHECK_FALSE(high.executable);
  CHECK(high.failing == std::vector<std::string>{std::string(kBelowThreshold)});

  // the comparison is strict
  const auto edge = assess(plan, model.task_index("drill"), model, world, 0.9);
  CHECK_FALSE(edge.executable);
}

TEST_CASE("assess: install without a hole fails its precondition") {
  const auto model = point_three_model();
  WorldState world = shipped_world();
  world.spots.at("center").dirty = true;
  world.spots.at("center").hole_size_ok = true;
  std::vector<PlanStep> steps = {complete_step(F::CleanSpot, "center", world)};
  WorldState after = world;
  apply_effects(F::CleanSpot, "center", after);
  steps.push_back(complete_step(F::InstallScrew, "center", after));

  const auto a = assess(ground(steps), model.task_index("clean"), model, world, 0.5);
  CHECK_FALSE(a.executable);
  CHECK(a.failing == std::vector<std::string>{"InstallScrew.precon:a-hole-exists", "tranCI"});

  // with the usual world the hole size is also unknown
  WorldState plain = shipped_world();
  plain.spots.at("center").dirty = true;
  const auto b = assess(ground(steps), model.task_index("clean"), model, plain, 0.5);
  REQUIRE_FALSE(b.failing.empty());
  CHECK(b.failing.front() == "InstallScrew.precon:a-hole-exists");
}

TEST_CASE("export and parse") {
  const auto r = compile(kThreeStep, shipped_models(), shipped_world());
  REQUIRE(r.ok());
  const std::string doc = export_plan(r.plan());
  const auto back = parse_plan(doc);
  CHECK(back == r.plan());
  CHECK(export_plan(back) == doc);

  auto bad = r.plan();
  bad.executable = false;
  CHECK_THROWS_AS(export_plan(bad), RefuseNonExecutable);
  CHECK_THROWS_AS(parse_plan("{\"version\": 2}"), SchemaError);
  CHECK_THROWS_AS(parse_plan("not json"), SchemaError);
}

TEST_CASE("re-assessing an exported plan gives the same verdict") {
  const auto& models = shipped_models();
  for (const auto& doc : default_corpora().held_out) {
    const auto r = compile(doc.text, models, doc.world);
    if (!r.ok()) continue;
    const auto plan = parse_plan(export_plan(r.plan()));
    const auto a = assess(plan, models.planner, doc.world);
    CHECK(a.executable);
    CHECK(a.executability == doctest::Approx(plan.executability).epsilon(1e-12));
  }
}

TEST_CASE("apply_plan progresses the world") {
  const auto r = compile(kThreeStep, shipped_models(), shipped_world());
  REQUIRE(r.ok());
  const auto w = apply_plan(r.plan(), shipped_world());
  const auto& center = w.spots.at("center");
  CHECK(center.has_hole);
  CHECK(center.has_screw);
  CHECK_FALSE(center.dirty);
  CHECK(w.spots.at("upper-right") == shipped_world().spots.at("upper-right"));
}

TEST_CASE("literal mode keeps instructed order and fills nothing") {
  CompileOptions lit;
  lit.mode = CompileMode::Literal;
  const auto r = compile(kThreeStep, shipped_models(), shipped_world(), lit);
  REQUIRE(r.task_type.has_value());
  CHECK(*r.task_type == "clean");
  REQUIRE_FALSE(r.ok());
  CHECK(r.failure().stage == FailureStage::MesIncomplete);
  REQUIRE(r.failure().partial.has_value());
  const auto& steps = r.failure().partial->steps;
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].formula == F::DrillHole);
  CHECK(steps[1].formula == F::InstallScrew);
  CHECK(steps[2].formula == F::CleanSpot);
  CHECK_FALSE(steps[0].mes.act.has_value());
}

TEST_CASE("mode names") {
  CHECK(mode_from_name("literal") == CompileMode::Literal);
  CHECK(mode_from_name("exeplan") == CompileMode::Exeplan);
  CHECK_FALSE(mode_from_name("other").has_value());
  CHECK(stage_name(FailureStage::BelowThreshold) == "BELOW_THRESHOLD");
}

TEST_CASE("threshold monotonicity and mode dominance over random scenarios") {
  const auto& models = shipped_models();
  const auto& docs = default_corpora().held_out;
  std::mt19937_64 rng(2024);
  const std::vector<double> thresholds = {0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
  std::size_t literal_ok = 0, exeplan_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& doc = docs[rng() % docs.size()];
    WorldState world = doc.world;
    if (rng() % 2 && !world.available_tools.empty()) {
      auto it = world.available_tools.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng() % world.available_tools.size()));
      world.available_tools.erase(it);
    }
    for (auto& [name, spot] : world.spots) {
      if (rng() % 4 == 0) spot.dirty = !spot.dirty;
      if (rng() % 8 == 0) spot.has_hole = !spot.has_hole;
    }

    bool higher_ok = false;
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
      CompileOptions o;
      o.threshold = *it;
      const bool ok = compile(doc.text, models, world, o).ok();
      // once executable at some threshold, every lower threshold must agree
      if (higher_ok) CHECK(ok);
      higher_ok = higher_ok || ok;
    }

    CompileOptions lit;
    lit.mode = CompileMode::Literal;
    const bool l = compile(doc.text, models, world, lit).ok();
    const bool e = compile(doc.text, models, world).ok();
    if (l) CHECK(e);
    literal_ok += l;
    exeplan_ok += e;
  }
  CHECK(exeplan_ok >= literal_ok);
  CHECK(exeplan_ok > 0);
}

TEST_CASE("compile is deterministic") {
  const auto& models = shipped_models();
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& doc = default_corpora().held_out[i];
    const auto a = compile(doc.text, models, doc.world);
    const auto b = compile(doc.text, models, doc.world);
    CHECK(a.ok() == b.ok());
    if (a.ok() && b.ok()) CHECK(a.plan() == b.plan());
  }
}

}  // TEST_SUITE
