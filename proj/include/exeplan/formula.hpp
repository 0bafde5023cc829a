#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace exeplan {

/// The nine propositional clauses of the task model, in their fixed order.
enum class Formula : std::uint8_t {
  CleanSpot,
  DrillHole,
  InstallScrew,
  TranCD,
  TranDC,
  TranCI,
  TranIC,
  TranDI,
  TranID,
};

inline constexpr std::size_t kFormulaCount = 9;
inline constexpr std::size_t kBasicFormulaCount = 3;

using FormulaSet = std::bitset<kFormulaCount>;

inline constexpr std::array<Formula, kFormulaCount> kAllFormulas = {
    Formula::CleanSpot, Formula::DrillHole, Formula::InstallScrew,
    Formula::TranCD,    Formula::TranDC,    Formula::TranCI,
    Formula::TranIC,    Formula::TranDI,    Formula::TranID,
};

inline constexpr std::array<Formula, kBasicFormulaCount> kBasicFormulas = {
    Formula::CleanSpot, Formula::DrillHole, Formula::InstallScrew};

constexpr std::size_t index_of(Formula f) { return static_cast<std::size_t>(f); }

constexpr bool is_basic(Formula f) { return index_of(f) < kBasicFormulaCount; }

std::string_view formula_name(Formula f);
std::optional<Formula> formula_from_name(std::string_view name);

/// tranXY for X before Y; nullopt when either side is not basic or X == Y.
std::optional<Formula> transition_between(Formula from, Formula to);

/// Endpoints of a transition formula.
std::pair<Formula, Formula> transition_endpoints(Formula transition);

/// Task type a single basic formula stands for ("clean", "drill", "install").
std::string_view task_of(Formula basic);

}  // namespace exeplan
