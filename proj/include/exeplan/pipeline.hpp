#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "exeplan/detector.hpp"
#include "exeplan/lexicon.hpp"
#include "exeplan/mes.hpp"
#include "exeplan/plan_model.hpp"

namespace exeplan {

/// Everything a compile reads; shared read-only between compiles.
struct Models {
  Lexicon lexicon;
  Classifier detector;
  MlnModel planner;
  MesKB kb;
};

enum class CompileMode {
  Exeplan,  // classify the task, order the steps, complete the MES
  Literal,  // instructed order and only what the text says
};

std::string_view mode_name(CompileMode mode);
std::optional<CompileMode> mode_from_name(std::string_view name);

inline constexpr double kDefaultThreshold = 0.5;

struct CompileOptions {
  double threshold = kDefaultThreshold;
  CompileMode mode = CompileMode::Exeplan;
};

struct ExecutablePlan {
  std::string task_type;
  std::vector<PlanStep> steps;
  std::vector<Formula> transitions;
  double executability = 0.0;
  double threshold = kDefaultThreshold;
  bool executable = false;

  bool operator==(const ExecutablePlan&) const = default;
};

enum class FailureStage { NoSubgoals, Duplicate, MesIncomplete, BelowThreshold };

std::string_view stage_name(FailureStage stage);

struct CompileFailure {
  FailureStage stage = FailureStage::NoSubgoals;
  std::vector<std::string> details;
  std::optional<ExecutablePlan> partial;
  std::string message;
};

struct CompileResult {
  std::variant<ExecutablePlan, CompileFailure> outcome;
  /// Task chosen for the instruction, when sub-goals were found.
  std::optional<std::string> task_type;
  /// Detected steps in instructed order with only the slots the text fills.
  std::vector<PlanStep> extracted;

  bool ok() const { return std::holds_alternative<ExecutablePlan>(outcome); }
  const ExecutablePlan& plan() const { return std::get<ExecutablePlan>(outcome); }
  const CompileFailure& failure() const { return std::get<CompileFailure>(outcome); }
};

struct Assessment {
  bool executable = false;
  double executability = 0.0;
  /// "Formula.slot", "Formula.precon:condition", "Formula.tool:name",
  /// transition names, and "BELOW_THRESHOLD", in check order.
  std::vector<std::string> failing;
};

inline constexpr std::string_view kBelowThreshold = "BELOW_THRESHOLD";

/// Completeness and world checks per step under simulated state
/// progression, transition feasibility, then executability > threshold.
Assessment assess(const GroundedPlan& plan, std::size_t task, const MlnModel& model, const WorldState& world,
                  double threshold);
Assessment assess(const ExecutablePlan& plan, const MlnModel& model, const WorldState& world);

CompileResult compile(std::string_view text, const Models& models, const WorldState& world,
                      const CompileOptions& options = {});

/// Canonical plan document. Throws RefuseNonExecutable for a failed plan.
std::string export_plan(const ExecutablePlan& plan);
ExecutablePlan parse_plan(std::string_view json_text);

/// World after executing every step in order.
WorldState apply_plan(const ExecutablePlan& plan, WorldState world);

}  // namespace exeplan
