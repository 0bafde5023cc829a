#include <doctest.h>

#include <memory>

#include "exeplan/session.hpp"
#include "support.hpp"

using namespace exeplan;
using namespace exeplan::testing;

namespace {

SessionState fresh_session(bool json = false) {
  SessionState s;
  s.models = std::make_shared<const Models>(shipped_models());
  s.world = shipped_world();
  s.json = json;
  return s;
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("drilling first lets a later install succeed") {
  auto s = fresh_session();
  repl_turn(s, "drill a hole at the center");
  REQUIRE(s.transcript.size() == 1);
  CHECK(s.transcript[0].executable);
  CHECK(s.world.spots.at("center").has_hole);

  const auto out = repl_turn(s, "install a screw at the center");
  REQUIRE(s.transcript.size() == 2);
  CHECK(s.transcript[1].executable);
  CHECK(out.find("EXECUTABLE") != std::string::npos);
  CHECK(s.world.spots.at("center").has_screw);
}

TEST_CASE("install on a fresh world reports the missing hole") {
  auto s = fresh_session();
  const WorldState before = s.world;
  const auto out = repl_turn(s, "install a screw at the center");
  REQUIRE(s.transcript.size() == 1);
  CHECK_FALSE(s.transcript[0].executable);
  REQUIRE(s.transcript[0].stage.has_value());
  CHECK(*s.transcript[0].stage == FailureStage::MesIncomplete);
  CHECK(out.find("InstallScrew.precon:a-hole-exists") != std::string::npos);
  CHECK(s.world == before);
}

TEST_CASE("empty lines change nothing") {
  auto s = fresh_session();
  const WorldState before = s.world;
  CHECK(repl_turn(s, "").empty());
  CHECK(repl_turn(s, "   \t").empty());
  CHECK(s.transcript.empty());
  CHECK(s.world == before);
}

TEST_CASE("failures are rendered, not thrown") {
  auto s = fresh_session();
  std::string out;
  CHECK_NOTHROW(out = repl_turn(s, "hello there"));
  CHECK(out.find("NO_SUBGOALS") != std::string::npos);
  CHECK(s.transcript.size() == 1);
}

TEST_CASE("json rendering emits the plan document") {
  auto s = fresh_session(true);
  const auto out = repl_turn(s, "drill a hole at the center");
  const auto plan = parse_plan(out);
  CHECK(plan.task_type == "drill");
  CHECK(export_plan(plan) == out);
}

TEST_CASE("replaying a transcript reproduces every verdict") {
  const std::vector<std::string> lines = {
      "install a screw at the center",
      "drill a hole at the center",
      "then clean the dust at the center",
      "install a screw at the center",
      "install a screw at the center",
      "drill a hole in the top-right corner and clean it with a brush",
      "hello there",
      "",
  };
  auto a = fresh_session();
  for (const auto& l : lines) repl_turn(a, l);
  auto b = fresh_session();
  for (const auto& t : a.transcript) repl_turn(b, t.instruction);
  REQUIRE(a.transcript.size() == b.transcript.size());
  for (std::size_t i = 0; i < a.transcript.size(); ++i) {
    CHECK(a.transcript[i].executable == b.transcript[i].executable);
    CHECK(a.transcript[i].stage == b.transcript[i].stage);
    CHECK(a.transcript[i].rendered == b.transcript[i].rendered);
  }
  CHECK(a.world == b.world);
  // a second screw at the same spot has nowhere to go
  CHECK(a.transcript[3].executable);
  CHECK_FALSE(a.transcript[4].executable);
}

TEST_CASE("render helpers") {
  CompileFailure f;
  f.stage = FailureStage::MesIncomplete;
  f.details = {"DrillHole.tool"};
  f.message = "plan is not executable in the current world";
  const auto text = render_failure(f);
  CHECK(text.find("MES_INCOMPLETE") != std::string::npos);
  CHECK(text.find("DrillHole.tool") != std::string::npos);
}

}  // TEST_SUITE
