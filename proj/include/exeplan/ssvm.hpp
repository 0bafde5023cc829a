#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exeplan/plan_model.hpp"

namespace exeplan {

/// Observation (satisfied formulas of an instructed plan) with its task label.
struct PlanExample {
  FormulaSet x;
  std::size_t y = 0;
};

/// Joint feature map: the block of task `y` holds the indicator of `x`.
std::vector<double> psi(const FormulaSet& x, std::size_t y, std::size_t n_tasks);

/// Flatten per-task weights into the joint-feature layout and back.
std::vector<double> flatten(const MlnModel& model);
MlnModel unflatten(const std::vector<double>& w, std::vector<std::string> task_types);

/// Zero for a correct label, otherwise 1 plus the score difference under `model`.
double loss(const MlnModel& model, const FormulaSet& x, std::size_t y, std::size_t ybar);

/// argmax over tasks of score(w, x, y) + loss(reference, x, y_true, y).
/// Ties go to the earlier task.
std::size_t loss_augmented_infer(const MlnModel& w, const FormulaSet& x, std::size_t y_true,
                                 const MlnModel& loss_reference);

struct SsvmOptions {
  double c = 1.0;
  double epsilon = 1e-3;
  std::size_t max_iterations = 1000;
  /// Model whose scores define the loss difference term. When unset, a
  /// first pass with an all-zero reference (pure 0/1 loss) is trained and
  /// its weights become the reference of the returned second pass.
  std::optional<MlnModel> loss_reference;
};

struct CuttingPlaneStep {
  /// Working-set dual objective after the re-solve.
  double objective = 0.0;
  /// Slack at the re-solved weights.
  double xi = 0.0;
  /// b - a.W of the constraint found at the start of this iteration.
  double violation = 0.0;
  std::size_t working_set = 0;
};

struct SsvmResult {
  MlnModel model;
  MlnModel loss_reference;
  double xi = 0.0;
  /// b - a.W - xi for the most violated constraint at the returned weights.
  double final_violation = 0.0;
  std::size_t iterations = 0;
  std::vector<CuttingPlaneStep> trace;
};

/// One aggregated constraint a.W >= b - xi of the working set.
struct WorkingConstraint {
  std::vector<double> a;
  double b = 0.0;
};

struct WorkingSetSolution {
  std::vector<double> w;
  std::vector<double> lambda;  // one per constraint
  double xi = 0.0;
  double dual_objective = 0.0;
  double primal_objective = 0.0;
};

/// min 1/2|W|^2 + C xi  s.t.  W >= 0, xi >= 0, a_k.W >= b_k - xi for all k.
/// `warm_start` may hold multipliers from a previous solve of a prefix of the
/// constraints.
WorkingSetSolution solve_working_set(const std::vector<WorkingConstraint>& constraints, double c,
                                     const std::vector<double>& warm_start = {});

/// 1-slack structural SVM trained by cutting planes. The loss reference
/// stays fixed for the whole run. Throws NonConvergence when the iteration
/// cap is reached.
SsvmResult train_ssvm(const std::vector<PlanExample>& data, const std::vector<std::string>& task_types,
                      const SsvmOptions& options = {});

}  // namespace exeplan
