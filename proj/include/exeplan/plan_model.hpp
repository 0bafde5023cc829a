#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "exeplan/detector.hpp"
#include "exeplan/formula.hpp"
#include "exeplan/mes.hpp"

namespace exeplan {

using FormulaWeights = std::array<double, kFormulaCount>;

/// Per-task non-negative weights over the nine formulas.
struct MlnModel {
  std::vector<std::string> task_types = {"clean", "drill", "install"};
  std::vector<FormulaWeights> weights = std::vector<FormulaWeights>(3, FormulaWeights{});

  std::size_t task_index(std::string_view task) const;

  bool operator==(const MlnModel&) const = default;
};

std::string serialize_model(const MlnModel& model);
MlnModel parse_model(std::string_view json_text);
void save_model(const MlnModel& model, const std::filesystem::path& path);
MlnModel load_model(const std::filesystem::path& path);

struct PlanStep {
  Formula formula = Formula::CleanSpot;
  Mes mes;

  bool operator==(const PlanStep&) const = default;
};

struct GroundedPlan {
  std::vector<PlanStep> steps;
  FormulaSet satisfied;

  std::vector<Formula> sequence() const;
  std::vector<Formula> transitions() const;
  bool operator==(const GroundedPlan&) const = default;
};

/// Step formulas plus the transition of every consecutive pair.
FormulaSet satisfied_formulas(const std::vector<Formula>& sequence);

/// Build a plan from an ordered list of steps. Throws DuplicateSubGoal when
/// a basic formula repeats.
GroundedPlan ground(std::vector<PlanStep> steps);

/// Build a plan from detector output. The transitions must be the ones
/// implied by adjacent mentions; `mes_per_step` is empty or one per mention.
GroundedPlan ground(const std::vector<SubGoalMention>& mentions, const std::vector<Formula>& transitions,
                    const std::vector<Mes>& mes_per_step);

double score_formulas(const MlnModel& model, std::size_t task, const FormulaSet& satisfied);
double score_plan(const MlnModel& model, std::string_view task, const GroundedPlan& plan);

struct TaskDecision {
  std::size_t task = 0;
  std::vector<double> scores;
};

/// Argmax over task types of the plan score; ties go to the earlier task.
TaskDecision classify_task(const MlnModel& model, const FormulaSet& satisfied);
TaskDecision classify_task(const MlnModel& model, const GroundedPlan& plan);
/// Same decision with every raw score passed through `transform` first.
TaskDecision classify_task(const MlnModel& model, const GroundedPlan& plan,
                           const std::function<double(double)>& transform);

/// Best ordering of all candidate steps under the task's weights. Ties go
/// to the lexicographically smallest formula sequence.
GroundedPlan select_plan(const MlnModel& model, std::string_view task, std::vector<PlanStep> candidates);
GroundedPlan select_plan(const MlnModel& model, std::size_t task, std::vector<PlanStep> candidates);

}  // namespace exeplan
