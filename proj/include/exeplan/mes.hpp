#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exeplan/detector.hpp"
#include "exeplan/formula.hpp"
#include "exeplan/frontend.hpp"

namespace exeplan {

enum class MesSlot { Precon, Loc, Act, Tool, Req };

inline constexpr std::array<MesSlot, 5> kMesSlots = {MesSlot::Precon, MesSlot::Loc, MesSlot::Act, MesSlot::Tool,
                                                     MesSlot::Req};

std::string_view slot_name(MesSlot slot);
std::optional<MesSlot> slot_from_name(std::string_view name);

/// Machine execution specification of one sub-goal. An unset optional is
/// an UNSET slot.
struct Mes {
  std::optional<std::vector<std::string>> precon;
  std::optional<std::string> loc;
  std::optional<std::vector<std::string>> act;
  std::optional<std::string> tool;
  std::optional<std::vector<std::string>> req;

  bool is_set(MesSlot slot) const;
  void clear(MesSlot slot);
  bool complete() const;

  bool operator==(const Mes&) const = default;
};

/// Known values for one basic formula, each list in its listed order.
struct FormulaKnowledge {
  std::vector<std::string> precon;
  /// true when the listed preconditions are alternatives rather than a
  /// conjunction.
  bool precon_any = false;
  std::vector<std::string> loc;
  std::vector<std::vector<std::string>> act;  // steps; each step lists synonymous actions
  std::vector<std::string> tool;
  std::vector<std::string> req;
  /// value -> surface phrases that mention it
  std::map<std::string, std::vector<std::string>> keywords;
};

class MesKB {
 public:
  MesKB() = default;
  explicit MesKB(std::map<Formula, FormulaKnowledge> formulas);

  static MesKB parse(std::string_view json_text);
  static MesKB load(const std::filesystem::path& path);
  std::string serialize() const;

  const FormulaKnowledge& at(Formula f) const;
  bool contains(Formula f) const { return formulas_.count(f) > 0; }
  const std::map<Formula, FormulaKnowledge>& formulas() const { return formulas_; }

 private:
  std::map<Formula, FormulaKnowledge> formulas_;
};

inline constexpr std::array<std::string_view, 3> kSpots = {"upper-right", "center", "bottom-right"};

struct SpotState {
  bool dirty = false;
  bool has_hole = false;
  bool has_screw = false;
  bool clear_of_tools = true;
  bool hole_size_ok = false;

  bool operator==(const SpotState&) const = default;
};

struct WorldState {
  std::map<std::string, SpotState> spots;
  std::set<std::string> available_tools;

  bool operator==(const WorldState&) const = default;
};

WorldState parse_world(std::string_view json_text);
WorldState load_world(const std::filesystem::path& path);
std::string serialize_world(const WorldState& world);

/// Condition names understood by the world model.
bool is_known_condition(std::string_view condition);
/// Truth of a named precondition at a spot; throws SchemaError for unknown names.
bool evaluate_condition(std::string_view condition, const SpotState& spot);

/// State change caused by executing a sub-goal at a spot.
void apply_effects(Formula formula, const std::string& loc, WorldState& world);

/// Slots the instruction itself mentions in the mention's sentence.
/// Only loc, tool and req can be instructed; precon and act are never read
/// from text. The trigger token itself fills nothing.
Mes extract_mes(const ParsedDocument& doc, const SubGoalMention& mention, const MesKB& kb);

/// Fill UNSET slots from the knowledge base. Location is never filled.
/// Throws NoFeasibleValue when no listed tool is available.
Mes complete_mes(const Mes& partial, Formula formula, const MesKB& kb, const WorldState& world);

/// Give steps without an instructed location the location of the nearest
/// earlier step, or failing that the nearest later one.
void inherit_locations(std::vector<Mes>& steps);

struct SubGoalCheck {
  bool executable = false;
  std::vector<std::string> failed;
};

/// Conjunction over all MES hard constraints of one sub-goal.
SubGoalCheck check_subgoal_executable(const Mes& mes, Formula formula, const WorldState& world);

}  // namespace exeplan
