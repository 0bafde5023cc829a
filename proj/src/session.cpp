#include "exeplan/session.hpp"

#include <iomanip>
#include <sstream>

#include "text_util.hpp"

namespace exeplan {

namespace {

std::string join(const std::optional<std::vector<std::string>>& v) {
  if (!v) return "-";
  std::string out;
  for (const auto& s : *v) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::string render_plan(const ExecutablePlan& plan) {
  std::ostringstream out;
  out << "task " << plan.task_type << "  executability " << std::setprecision(4) << plan.executability
      << " (threshold " << plan.threshold << ")  " << (plan.executable ? "EXECUTABLE" : "NON_EXECUTABLE") << '\n';
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto& s = plan.steps[k];
    out << "  " << k + 1 << ". " << std::left << std::setw(13) << formula_name(s.formula)
        << " loc=" << s.mes.loc.value_or("-") << "  tool=" << s.mes.tool.value_or("-")
        << "  act=[" << join(s.mes.act) << "]  precon=[" << join(s.mes.precon) << "]  req=[" << join(s.mes.req)
        << "]\n";
  }
  if (!plan.transitions.empty()) {
    out << "  transitions:";
    for (auto t : plan.transitions) out << ' ' << formula_name(t);
    out << '\n';
  }
  return out.str();
}

std::string render_failure(const CompileFailure& failure) {
  std::ostringstream out;
  out << "FAILED " << stage_name(failure.stage) << ": " << failure.message << '\n';
  for (const auto& d : failure.details) out << "  - " << d << '\n';
  return out.str();
}

std::string repl_turn(SessionState& state, std::string_view line) {
  const auto text = detail::trim(line);
  if (text.empty()) return "";
  const CompileResult result = compile(text, *state.models, state.world, state.options);
  Turn turn;
  turn.instruction = std::string(text);
  if (result.ok()) {
    const auto& plan = result.plan();
    state.world = apply_plan(plan, state.world);
    turn.executable = true;
    turn.rendered = state.json ? export_plan(plan) : render_plan(plan);
  } else {
    turn.stage = result.failure().stage;
    turn.rendered = render_failure(result.failure());
  }
  state.transcript.push_back(turn);
  return turn.rendered;
}

}  // namespace exeplan
