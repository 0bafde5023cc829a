#include "exeplan/pipeline.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

#include "exeplan/error.hpp"
#include "exeplan/frontend.hpp"

namespace exeplan {

using json = nlohmann::json;

std::string_view mode_name(CompileMode mode) { return mode == CompileMode::Literal ? "literal" : "exeplan"; }

std::optional<CompileMode> mode_from_name(std::string_view name) {
  if (name == "literal") return CompileMode::Literal;
  if (name == "exeplan") return CompileMode::Exeplan;
  return std::nullopt;
}

std::string_view stage_name(FailureStage stage) {
  static constexpr std::array<std::string_view, 4> kNames = {"NO_SUBGOALS", "DUPLICATE", "MES_INCOMPLETE",
                                                             "BELOW_THRESHOLD"};
  return kNames[static_cast<std::size_t>(stage)];
}

Assessment assess(const GroundedPlan& plan, std::size_t task, const MlnModel& model, const WorldState& world,
                  double threshold) {
  Assessment out;
  WorldState state = world;
  std::vector<bool> precon_failed(plan.steps.size(), false);
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto& step = plan.steps[k];
    const std::string prefix = std::string(formula_name(step.formula)) + ".";
    const auto check = check_subgoal_executable(step.mes, step.formula, state);
    for (const auto& f : check.failed) {
      out.failing.push_back(prefix + f);
      if (f.rfind("precon:", 0) == 0) precon_failed[k] = true;
    }
    if (step.mes.loc) apply_effects(step.formula, *step.mes.loc, state);
  }
  // a transition is infeasible when the state left by the earlier step
  // does not satisfy the later step's preconditions
  for (std::size_t k = 1; k < plan.steps.size(); ++k) {
    if (!precon_failed[k]) continue;
    if (auto t = transition_between(plan.steps[k - 1].formula, plan.steps[k].formula)) {
      out.failing.emplace_back(formula_name(*t));
    }
  }
  out.executability = score_formulas(model, task, plan.satisfied);
  if (!(out.executability > threshold)) out.failing.emplace_back(kBelowThreshold);
  out.executable = out.failing.empty();
  return out;
}

Assessment assess(const ExecutablePlan& plan, const MlnModel& model, const WorldState& world) {
  return assess(ground(plan.steps), model.task_index(plan.task_type), model, world, plan.threshold);
}

namespace {

CompileFailure failure(FailureStage stage, std::vector<std::string> details, std::string message,
                       std::optional<ExecutablePlan> partial = std::nullopt) {
  return CompileFailure{stage, std::move(details), std::move(partial), std::move(message)};
}

// Fill the unset slots of every step, progressing the world step by step so
// later steps see the effects of earlier ones.
void complete_steps(std::vector<PlanStep>& steps, const MesKB& kb, const WorldState& world) {
  WorldState state = world;
  for (auto& step : steps) {
    try {
      step.mes = complete_mes(step.mes, step.formula, kb, state);
    } catch (const NoFeasibleValue&) {
      // leave the tool unset and complete the rest so assessment lists
      // every missing item
      Mes probe = step.mes;
      probe.tool = std::string();
      probe = complete_mes(probe, step.formula, kb, state);
      probe.tool.reset();
      step.mes = std::move(probe);
    }
    if (step.mes.loc) apply_effects(step.formula, *step.mes.loc, state);
  }
}

void clear_failed_slots(std::vector<PlanStep>& steps, const std::vector<PlanStep>& instructed,
                        const std::vector<std::string>& failing) {
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string prefix = std::string(formula_name(steps[k].formula)) + ".";
    const auto said = std::find_if(instructed.begin(), instructed.end(),
                                   [&](const PlanStep& s) { return s.formula == steps[k].formula; });
    for (const auto& f : failing) {
      if (f.rfind(prefix, 0) != 0) continue;
      const std::string item = f.substr(prefix.size());
      const std::string slot = item.substr(0, item.find(':'));
      auto s = slot_from_name(slot);
      if (!s || *s == MesSlot::Loc) continue;
      // slots the instructor stated are kept as said
      if (said != instructed.end() && said->mes.is_set(*s)) continue;
      steps[k].mes.clear(*s);
    }
  }
}

}  // namespace

CompileResult compile(std::string_view text, const Models& models, const WorldState& world,
                      const CompileOptions& options) {
  CompileResult result;
  const ParsedDocument doc = parse_document(text, models.lexicon);
  const Detection detection = detect(doc, models.detector, models.lexicon);
  if (detection.mentions.empty()) {
    result.outcome = failure(FailureStage::NoSubgoals, {}, "no sub-goal found in the instruction");
    return result;
  }

  for (const auto& m : detection.mentions) result.extracted.push_back({m.label, extract_mes(doc, m, models.kb)});

  GroundedPlan instructed;
  try {
    instructed = ground(result.extracted);
  } catch (const DuplicateSubGoal& e) {
    std::vector<std::string> details;
    FormulaSet seen;
    for (const auto& s : result.extracted) {
      if (seen.test(index_of(s.formula))) details.emplace_back(formula_name(s.formula));
      seen.set(index_of(s.formula));
    }
    result.outcome = failure(FailureStage::Duplicate, std::move(details), e.what());
    return result;
  }

  std::size_t task = 0;
  std::vector<PlanStep> steps = result.extracted;
  if (options.mode == CompileMode::Literal) {
    // the last instructed step names the task
    task = models.planner.task_index(task_of(steps.back().formula));
  } else {
    std::vector<Mes> said;
    for (const auto& s : steps) said.push_back(s.mes);
    inherit_locations(said);
    for (std::size_t k = 0; k < steps.size(); ++k) steps[k].mes = said[k];
    task = classify_task(models.planner, instructed).task;
    steps = select_plan(models.planner, task, steps).steps;
  }
  result.task_type = models.planner.task_types.at(task);

  if (options.mode == CompileMode::Exeplan) complete_steps(steps, models.kb, world);
  Assessment verdict = assess(ground(steps), task, models.planner, world, options.threshold);

  if (!verdict.executable && options.mode == CompileMode::Exeplan) {
    // one more round of interpretation: drop what failed and refill
    clear_failed_slots(steps, result.extracted, verdict.failing);
    complete_steps(steps, models.kb, world);
    verdict = assess(ground(steps), task, models.planner, world, options.threshold);
  }

  ExecutablePlan plan;
  plan.task_type = *result.task_type;
  plan.steps = steps;
  plan.transitions = ground(steps).transitions();
  plan.executability = verdict.executability;
  plan.threshold = options.threshold;
  plan.executable = verdict.executable;

  if (verdict.executable) {
    result.outcome = std::move(plan);
    return result;
  }
  const bool only_threshold = verdict.failing.size() == 1 && verdict.failing.front() == kBelowThreshold;
  const FailureStage stage = only_threshold ? FailureStage::BelowThreshold : FailureStage::MesIncomplete;
  std::string message = only_threshold ? "plan executability is not above the threshold"
                                       : "plan is not executable in the current world";
  result.outcome = failure(stage, verdict.failing, std::move(message), std::move(plan));
  return result;
}

namespace {

json optional_list(const std::optional<std::vector<std::string>>& v) {
  return v ? json(*v) : json::array();
}

}  // namespace

std::string export_plan(const ExecutablePlan& plan) {
  if (!plan.executable) throw RefuseNonExecutable("refusing to export a non-executable plan");
  json doc;
  doc["version"] = 1;
  doc["task_type"] = plan.task_type;
  doc["executability"] = plan.executability;
  doc["threshold"] = plan.threshold;
  doc["steps"] = json::array();
  for (const auto& s : plan.steps) {
    json step;
    step["formula"] = std::string(formula_name(s.formula));
    step["location"] = s.mes.loc.value_or("");
    step["actions"] = optional_list(s.mes.act);
    step["tool"] = s.mes.tool.value_or("");
    step["preconditions"] = optional_list(s.mes.precon);
    step["human_requirements"] = optional_list(s.mes.req);
    doc["steps"].push_back(std::move(step));
  }
  doc["transitions"] = json::array();
  for (auto t : plan.transitions) doc["transitions"].push_back(std::string(formula_name(t)));
  return doc.dump(2) + "\n";
}

ExecutablePlan parse_plan(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("plan: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) throw SchemaError("plan: unsupported version");
    ExecutablePlan plan;
    plan.task_type = doc.at("task_type").get<std::string>();
    plan.executability = doc.at("executability").get<double>();
    plan.threshold = doc.at("threshold").get<double>();
    const auto& steps = doc.at("steps");
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      const auto name = s.at("formula").get<std::string>();
      auto f = formula_from_name(name);
      if (!f || !is_basic(*f)) throw SchemaError("plan: steps[" + std::to_string(k) + "].formula '" + name + "'");
      PlanStep step{*f, {}};
      step.mes.loc = s.at("location").get<std::string>();
      step.mes.act = s.at("actions").get<std::vector<std::string>>();
      step.mes.tool = s.at("tool").get<std::string>();
      step.mes.precon = s.at("preconditions").get<std::vector<std::string>>();
      step.mes.req = s.at("human_requirements").get<std::vector<std::string>>();
      plan.steps.push_back(std::move(step));
    }
    for (const auto& t : doc.at("transitions")) {
      auto f = formula_from_name(t.get<std::string>());
      if (!f || is_basic(*f)) throw SchemaError("plan: bad transition '" + t.get<std::string>() + "'");
      plan.transitions.push_back(*f);
    }
    if (ground(plan.steps).transitions() != plan.transitions) {
      throw SchemaError("plan: transitions do not match the step order");
    }
    plan.executable = true;
    return plan;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("plan: ") + e.what());
  } catch (const DuplicateSubGoal& e) {
    throw SchemaError(std::string("plan: ") + e.what());
  }
}

WorldState apply_plan(const ExecutablePlan& plan, WorldState world) {
  for (const auto& s : plan.steps) {
    if (s.mes.loc) apply_effects(s.formula, *s.mes.loc, world);
  }
  return world;
}

}  // namespace exeplan
