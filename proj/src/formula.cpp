#include "exeplan/formula.hpp"

#include <stdexcept>

namespace exeplan {

namespace {

constexpr std::array<std::string_view, kFormulaCount> kNames = {
    "CleanSpot", "DrillHole", "InstallScrew", "tranCD", "tranDC",
    "tranCI",    "tranIC",    "tranDI",       "tranID",
};

}  // namespace

std::string_view formula_name(Formula f) { return kNames[index_of(f)]; }

std::optional<Formula> formula_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFormulaCount; ++i) {
    if (kNames[i] == name) return static_cast<Formula>(i);
  }
  return std::nullopt;
}

std::optional<Formula> transition_between(Formula from, Formula to) {
  using F = Formula;
  if (!is_basic(from) || !is_basic(to) || from == to) return std::nullopt;
  if (from == F::CleanSpot) return to == F::DrillHole ? F::TranCD : F::TranCI;
  if (from == F::DrillHole) return to == F::CleanSpot ? F::TranDC : F::TranDI;
  return to == F::CleanSpot ? F::TranIC : F::TranID;
}

std::pair<Formula, Formula> transition_endpoints(Formula transition) {
  using F = Formula;
  switch (transition) {
    case F::TranCD: return {F::CleanSpot, F::DrillHole};
    case F::TranDC: return {F::DrillHole, F::CleanSpot};
    case F::TranCI: return {F::CleanSpot, F::InstallScrew};
    case F::TranIC: return {F::InstallScrew, F::CleanSpot};
    case F::TranDI: return {F::DrillHole, F::InstallScrew};
    case F::TranID: return {F::InstallScrew, F::DrillHole};
    default: throw std::invalid_argument("not a transition formula");
  }
}

std::string_view task_of(Formula basic) {
  switch (basic) {
    case Formula::CleanSpot: return "clean";
    case Formula::DrillHole: return "drill";
    case Formula::InstallScrew: return "install";
    default: throw std::invalid_argument("not a basic formula");
  }
}

}  // namespace exeplan
