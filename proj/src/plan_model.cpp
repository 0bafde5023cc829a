#include "exeplan/plan_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "exeplan/error.hpp"

namespace exeplan {

using json = nlohmann::json;

std::size_t MlnModel::task_index(std::string_view task) const {
  auto it = std::find(task_types.begin(), task_types.end(), task);
  if (it == task_types.end()) throw std::invalid_argument("unknown task type '" + std::string(task) + "'");
  return static_cast<std::size_t>(it - task_types.begin());
}

std::string serialize_model(const MlnModel& model) {
  json doc;
  doc["version"] = 1;
  doc["task_types"] = model.task_types;
  doc["formulas"] = json::array();
  for (auto f : kAllFormulas) doc["formulas"].push_back(std::string(formula_name(f)));
  doc["weights"] = json::array();
  for (const auto& row : model.weights) doc["weights"].push_back(row);
  return doc.dump(2) + "\n";
}

MlnModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("planner model: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) throw SchemaError("planner model: unsupported version");
    MlnModel model;
    model.task_types = doc.at("task_types").get<std::vector<std::string>>();
    if (model.task_types.empty()) throw SchemaError("planner model: task_types is empty");
    const auto formulas = doc.at("formulas").get<std::vector<std::string>>();
    if (formulas.size() != kFormulaCount) throw SchemaError("planner model: expected 9 formulas");
    for (std::size_t i = 0; i < kFormulaCount; ++i) {
      if (formulas[i] != formula_name(kAllFormulas[i])) {
        throw SchemaError("planner model: formulas[" + std::to_string(i) + "] must be " +
                          std::string(formula_name(kAllFormulas[i])));
      }
    }
    const auto& rows = doc.at("weights");
    if (!rows.is_array() || rows.size() != model.task_types.size()) {
      throw SchemaError("planner model: weights must have one row per task type");
    }
    model.weights.clear();
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != kFormulaCount) {
        throw SchemaError("planner model: weights[" + std::to_string(t) + "] must have 9 entries");
      }
      FormulaWeights w{};
      for (std::size_t i = 0; i < kFormulaCount; ++i) {
        w[i] = rows[t][i].get<double>();
        if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
          throw SchemaError("planner model: weights[" + std::to_string(t) + "][" + std::to_string(i) +
                            "] must be finite and non-negative");
        }
      }
      model.weights.push_back(w);
    }
    return model;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("planner model: ") + e.what());
  }
}

void save_model(const MlnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_model(model);
}

MlnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("planner model: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::vector<Formula> GroundedPlan::sequence() const {
  std::vector<Formula> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.formula);
  return out;
}

std::vector<Formula> GroundedPlan::transitions() const {
  std::vector<Formula> out;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (auto t = transition_between(steps[k - 1].formula, steps[k].formula)) out.push_back(*t);
  }
  return out;
}

FormulaSet satisfied_formulas(const std::vector<Formula>& sequence) {
  FormulaSet s;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    s.set(index_of(sequence[k]));
    if (k > 0) {
      if (auto t = transition_between(sequence[k - 1], sequence[k])) s.set(index_of(*t));
    }
  }
  return s;
}

GroundedPlan ground(std::vector<PlanStep> steps) {
  FormulaSet seen;
  for (const auto& s : steps) {
    if (!is_basic(s.formula)) throw std::invalid_argument("plan steps must be basic formulas");
    if (seen.test(index_of(s.formula))) {
      throw DuplicateSubGoal(std::string(formula_name(s.formula)) + " appears more than once");
    }
    seen.set(index_of(s.formula));
  }
  GroundedPlan plan;
  plan.steps = std::move(steps);
  plan.satisfied = satisfied_formulas(plan.sequence());
  return plan;
}

GroundedPlan ground(const std::vector<SubGoalMention>& mentions, const std::vector<Formula>& transitions,
                    const std::vector<Mes>& mes_per_step) {
  if (!mes_per_step.empty() && mes_per_step.size() != mentions.size()) {
    throw std::invalid_argument("one Mes per mention expected");
  }
  std::vector<PlanStep> steps;
  for (std::size_t k = 0; k < mentions.size(); ++k) {
    steps.push_back({mentions[k].label, mes_per_step.empty() ? Mes{} : mes_per_step[k]});
  }
  GroundedPlan plan = ground(std::move(steps));
  if (plan.transitions() != transitions) {
    throw std::invalid_argument("transitions do not match adjacent mentions");
  }
  return plan;
}

double score_formulas(const MlnModel& model, std::size_t task, const FormulaSet& satisfied) {
  const auto& w = model.weights.at(task);
  double total = 0.0;
  for (std::size_t i = 0; i < kFormulaCount; ++i) {
    if (satisfied.test(i)) total += w[i];
  }
  return total;
}

double score_plan(const MlnModel& model, std::string_view task, const GroundedPlan& plan) {
  return score_formulas(model, model.task_index(task), plan.satisfied);
}

namespace {

TaskDecision argmax_task(std::vector<double> scores) {
  TaskDecision d;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[d.task]) d.task = t;
  }
  d.scores = std::move(scores);
  return d;
}

}  // namespace

TaskDecision classify_task(const MlnModel& model, const FormulaSet& satisfied) {
  std::vector<double> scores;
  for (std::size_t t = 0; t < model.task_types.size(); ++t) scores.push_back(score_formulas(model, t, satisfied));
  return argmax_task(std::move(scores));
}

TaskDecision classify_task(const MlnModel& model, const GroundedPlan& plan) {
  return classify_task(model, plan.satisfied);
}

TaskDecision classify_task(const MlnModel& model, const GroundedPlan& plan,
                           const std::function<double(double)>& transform) {
  std::vector<double> scores;
  for (std::size_t t = 0; t < model.task_types.size(); ++t) {
    scores.push_back(transform(score_formulas(model, t, plan.satisfied)));
  }
  return argmax_task(std::move(scores));
}

GroundedPlan select_plan(const MlnModel& model, std::string_view task, std::vector<PlanStep> candidates) {
  return select_plan(model, model.task_index(task), std::move(candidates));
}

GroundedPlan select_plan(const MlnModel& model, std::size_t task, std::vector<PlanStep> candidates) {
  if (candidates.empty()) throw NoCandidates("no candidate steps to order");
  // validates the once-only constraint
  (void)ground(candidates);
  std::sort(candidates.begin(), candidates.end(),
            [](const PlanStep& a, const PlanStep& b) { return a.formula < b.formula; });

  auto by_formula = [](const PlanStep& a, const PlanStep& b) { return a.formula < b.formula; };
  std::vector<PlanStep> best = candidates;
  double best_score = score_formulas(model, task, satisfied_formulas(ground(candidates).sequence()));
  while (std::next_permutation(candidates.begin(), candidates.end(), by_formula)) {
    std::vector<Formula> seq;
    for (const auto& c : candidates) seq.push_back(c.formula);
    const double s = score_formulas(model, task, satisfied_formulas(seq));
    if (s > best_score) {
      best_score = s;
      best = candidates;
    }
  }
  return ground(std::move(best));
}

}  // namespace exeplan
