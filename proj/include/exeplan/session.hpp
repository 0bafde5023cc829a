#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exeplan/pipeline.hpp"

namespace exeplan {

struct Turn {
  std::string instruction;
  bool executable = false;
  std::optional<FailureStage> stage;
  std::string rendered;
};

/// Interactive state: the world only changes by executing compiled plans.
struct SessionState {
  std::shared_ptr<const Models> models;
  WorldState world;
  CompileOptions options;
  bool json = false;
  std::vector<Turn> transcript;
};

/// Table view of a plan.
std::string render_plan(const ExecutablePlan& plan);
std::string render_failure(const CompileFailure& failure);

/// Compile one line against the current world. An executable plan is
/// applied to the world; every non-empty line is appended to the transcript.
std::string repl_turn(SessionState& state, std::string_view line);

}  // namespace exeplan
