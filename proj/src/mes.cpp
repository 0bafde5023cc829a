#include "exeplan/mes.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exeplan/error.hpp"
#include "text_util.hpp"

namespace exeplan {

namespace {

using json = nlohmann::json;

struct ConditionRule {
  std::string_view name;
  bool (*holds)(const SpotState&);
};

constexpr std::array<ConditionRule, 9> kConditions = {{
    {"spot dirty", [](const SpotState& s) { return s.dirty; }},
    {"after drilling", [](const SpotState& s) { return s.has_hole; }},
    {"point is clean", [](const SpotState& s) { return !s.dirty; }},
    {"no hole exists", [](const SpotState& s) { return !s.has_hole; }},
    {"when human gives an order", [](const SpotState&) { return true; }},
    {"a hole exists", [](const SpotState& s) { return s.has_hole; }},
    {"no screw in hole", [](const SpotState& s) { return !s.has_screw; }},
    {"no unnecessary tool", [](const SpotState& s) { return s.clear_of_tools; }},
    {"hole size appropriate", [](const SpotState& s) { return s.hole_size_ok; }},
}};

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw SchemaError(std::string(what) + ": cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> string_list(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) throw SchemaError("kb " + where + ": expected a non-empty array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string() || node[i].get<std::string>().empty()) {
      throw SchemaError("kb " + where + "[" + std::to_string(i) + "]: expected a non-empty string");
    }
    out.push_back(node[i].get<std::string>());
  }
  return out;
}

// Whole-phrase match of `phrase` (space-separated, lowercase) against the
// lowercased surfaces starting at `start`.
bool phrase_at(const std::vector<std::string>& words, std::size_t start, const std::vector<std::string>& phrase) {
  if (start + phrase.size() > words.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    if (words[start + k] != phrase[k]) return false;
  }
  return true;
}

struct PhraseHit {
  std::string value;
  std::size_t start;
  std::size_t length;
};

std::vector<PhraseHit> find_values(const std::vector<std::string>& words, std::size_t trigger,
                                   const std::vector<std::string>& values,
                                   const std::map<std::string, std::vector<std::string>>& keywords) {
  std::vector<PhraseHit> hits;
  for (const auto& value : values) {
    auto it = keywords.find(value);
    if (it == keywords.end()) continue;
    for (const auto& variant : it->second) {
      std::vector<std::string> phrase;
      std::istringstream ss(detail::to_lower(variant));
      for (std::string w; ss >> w;) phrase.push_back(w);
      if (phrase.empty()) continue;
      for (std::size_t s = 0; s < words.size(); ++s) {
        if (trigger >= s && trigger < s + phrase.size()) continue;
        if (phrase_at(words, s, phrase)) hits.push_back({value, s, phrase.size()});
      }
    }
  }
  return hits;
}

std::optional<std::string> nearest(const std::vector<PhraseHit>& hits, std::size_t trigger) {
  const PhraseHit* best = nullptr;
  std::size_t best_distance = 0;
  for (const auto& h : hits) {
    const std::size_t d = h.start > trigger ? h.start - trigger : trigger - h.start;
    // ties resolve toward the earlier phrase, then the longer one
    if (!best || d < best_distance || (d == best_distance && h.start < best->start) ||
        (d == best_distance && h.start == best->start && h.length > best->length)) {
      best = &h;
      best_distance = d;
    }
  }
  if (!best) return std::nullopt;
  return best->value;
}

}  // namespace

std::string_view slot_name(MesSlot slot) {
  static constexpr std::array<std::string_view, 5> kNames = {"precon", "loc", "act", "tool", "req"};
  return kNames[static_cast<std::size_t>(slot)];
}

std::optional<MesSlot> slot_from_name(std::string_view name) {
  for (auto s : kMesSlots) {
    if (slot_name(s) == name) return s;
  }
  return std::nullopt;
}

bool Mes::is_set(MesSlot slot) const {
  switch (slot) {
    case MesSlot::Precon: return precon.has_value();
    case MesSlot::Loc: return loc.has_value();
    case MesSlot::Act: return act.has_value();
    case MesSlot::Tool: return tool.has_value();
    case MesSlot::Req: return req.has_value();
  }
  return false;
}

void Mes::clear(MesSlot slot) {
  switch (slot) {
    case MesSlot::Precon: precon.reset(); break;
    case MesSlot::Loc: loc.reset(); break;
    case MesSlot::Act: act.reset(); break;
    case MesSlot::Tool: tool.reset(); break;
    case MesSlot::Req: req.reset(); break;
  }
}

bool Mes::complete() const {
  return std::all_of(kMesSlots.begin(), kMesSlots.end(), [this](MesSlot s) { return is_set(s); });
}

MesKB::MesKB(std::map<Formula, FormulaKnowledge> formulas) : formulas_(std::move(formulas)) {}

const FormulaKnowledge& MesKB::at(Formula f) const {
  auto it = formulas_.find(f);
  if (it == formulas_.end()) throw std::out_of_range("kb has no entry for " + std::string(formula_name(f)));
  return it->second;
}

MesKB MesKB::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("kb: ") + e.what());
  }
  if (!doc.is_object() || doc.empty()) throw SchemaError("kb: expected a non-empty object of formulas");

  std::map<Formula, FormulaKnowledge> formulas;
  for (const auto& [name, node] : doc.items()) {
    auto formula = formula_from_name(name);
    if (!formula || !is_basic(*formula)) throw SchemaError("kb " + name + ": not a basic formula");
    if (!node.is_object()) throw SchemaError("kb " + name + ": expected an object");
    for (const auto& [key, _] : node.items()) {
      static const std::set<std::string> kKeys = {"precon", "precon_mode", "loc", "act", "tool", "req", "keywords"};
      if (!kKeys.count(key)) throw SchemaError("kb " + name + "." + key + ": unknown field");
    }
    FormulaKnowledge k;
    for (auto slot : kMesSlots) {
      if (!node.contains(std::string(slot_name(slot)))) {
        throw SchemaError("kb " + name + "." + std::string(slot_name(slot)) + ": missing");
      }
    }
    k.precon = string_list(node["precon"], name + ".precon");
    for (const auto& c : k.precon) {
      if (!is_known_condition(c)) throw SchemaError("kb " + name + ".precon: unknown condition '" + c + "'");
    }
    if (node.contains("precon_mode")) {
      const auto& mode = node["precon_mode"];
      if (mode == "any") k.precon_any = true;
      else if (mode != "all") throw SchemaError("kb " + name + ".precon_mode: expected \"all\" or \"any\"");
    }
    k.loc = string_list(node["loc"], name + ".loc");
    for (const auto& l : k.loc) {
      if (std::find(kSpots.begin(), kSpots.end(), l) == kSpots.end()) {
        throw SchemaError("kb " + name + ".loc: unknown spot '" + l + "'");
      }
    }
    const auto& act = node["act"];
    if (!act.is_array() || act.empty()) throw SchemaError("kb " + name + ".act: expected a non-empty array");
    for (std::size_t i = 0; i < act.size(); ++i) {
      k.act.push_back(string_list(act[i], name + ".act[" + std::to_string(i) + "]"));
    }
    k.tool = string_list(node["tool"], name + ".tool");
    k.req = string_list(node["req"], name + ".req");
    if (node.contains("keywords")) {
      const auto& kw = node["keywords"];
      if (!kw.is_object()) throw SchemaError("kb " + name + ".keywords: expected an object");
      for (const auto& [value, variants] : kw.items()) {
        const bool known = std::find(k.loc.begin(), k.loc.end(), value) != k.loc.end() ||
                           std::find(k.tool.begin(), k.tool.end(), value) != k.tool.end() ||
                           std::find(k.req.begin(), k.req.end(), value) != k.req.end();
        if (!known) throw SchemaError("kb " + name + ".keywords." + value + ": not a loc/tool/req value");
        if (!variants.is_array()) throw SchemaError("kb " + name + ".keywords." + value + ": expected an array");
        std::vector<std::string> list;
        for (const auto& v : variants) {
          if (!v.is_string()) throw SchemaError("kb " + name + ".keywords." + value + ": expected strings");
          list.push_back(v.get<std::string>());
        }
        k.keywords.emplace(value, std::move(list));
      }
    }
    formulas.emplace(*formula, std::move(k));
  }
  return MesKB(std::move(formulas));
}

MesKB MesKB::load(const std::filesystem::path& path) { return parse(read_file(path, "kb")); }

std::string MesKB::serialize() const {
  json doc = json::object();
  for (const auto& [formula, k] : formulas_) {
    json node;
    node["precon"] = k.precon;
    if (k.precon_any) node["precon_mode"] = "any";
    node["loc"] = k.loc;
    node["act"] = k.act;
    node["tool"] = k.tool;
    node["req"] = k.req;
    node["keywords"] = json::object();
    for (const auto& [value, variants] : k.keywords) node["keywords"][value] = variants;
    doc[std::string(formula_name(formula))] = std::move(node);
  }
  return doc.dump(2) + "\n";
}

WorldState parse_world(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("world: ") + e.what());
  }
  try {
    WorldState world;
    const auto& spots = doc.at("spots");
    for (auto spot : kSpots) {
      const std::string name(spot);
      if (!spots.contains(name)) throw SchemaError("world: spot '" + name + "' missing");
      const auto& s = spots.at(name);
      SpotState st;
      st.dirty = s.at("dirty").get<bool>();
      st.has_hole = s.at("has_hole").get<bool>();
      st.has_screw = s.at("has_screw").get<bool>();
      st.clear_of_tools = s.at("clear_of_tools").get<bool>();
      st.hole_size_ok = s.at("hole_size_ok").get<bool>();
      world.spots.emplace(name, st);
    }
    if (spots.size() != kSpots.size()) throw SchemaError("world: unexpected spot");
    for (const auto& t : doc.at("available_tools")) world.available_tools.insert(t.get<std::string>());
    return world;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("world: ") + e.what());
  }
}

WorldState load_world(const std::filesystem::path& path) { return parse_world(read_file(path, "world")); }

namespace {

json world_to_json(const WorldState& world) {
  json doc;
  doc["spots"] = json::object();
  for (const auto& [name, s] : world.spots) {
    doc["spots"][name] = {{"dirty", s.dirty},
                          {"has_hole", s.has_hole},
                          {"has_screw", s.has_screw},
                          {"clear_of_tools", s.clear_of_tools},
                          {"hole_size_ok", s.hole_size_ok}};
  }
  doc["available_tools"] = json::array();
  for (const auto& t : world.available_tools) doc["available_tools"].push_back(t);
  return doc;
}

}  // namespace

std::string serialize_world(const WorldState& world) { return world_to_json(world).dump(2) + "\n"; }

bool is_known_condition(std::string_view condition) {
  return std::any_of(kConditions.begin(), kConditions.end(), [&](const auto& r) { return r.name == condition; });
}

bool evaluate_condition(std::string_view condition, const SpotState& spot) {
  for (const auto& r : kConditions) {
    if (r.name == condition) return r.holds(spot);
  }
  throw SchemaError("unknown precondition '" + std::string(condition) + "'");
}

void apply_effects(Formula formula, const std::string& loc, WorldState& world) {
  auto it = world.spots.find(loc);
  if (it == world.spots.end()) return;
  auto& s = it->second;
  switch (formula) {
    case Formula::DrillHole:
      s.has_hole = true;
      s.hole_size_ok = true;
      s.dirty = true;
      break;
    case Formula::CleanSpot: s.dirty = false; break;
    case Formula::InstallScrew: s.has_screw = true; break;
    default: break;
  }
}

Mes extract_mes(const ParsedDocument& doc, const SubGoalMention& mention, const MesKB& kb) {
  Mes mes;
  const auto& k = kb.at(mention.label);
  const auto& sentence = doc.sentences.at(mention.site.sentence);
  std::vector<std::string> words;
  words.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) words.push_back(detail::to_lower(t.surface));
  const std::size_t trigger = mention.site.token;

  if (auto loc = nearest(find_values(words, trigger, k.loc, k.keywords), trigger)) mes.loc = *loc;
  if (auto tool = nearest(find_values(words, trigger, k.tool, k.keywords), trigger)) mes.tool = *tool;

  auto req_hits = find_values(words, trigger, k.req, k.keywords);
  if (!req_hits.empty()) {
    std::vector<std::string> req;
    for (const auto& value : k.req) {
      if (std::any_of(req_hits.begin(), req_hits.end(), [&](const auto& h) { return h.value == value; })) {
        req.push_back(value);
      }
    }
    mes.req = std::move(req);
  }
  return mes;
}

Mes complete_mes(const Mes& partial, Formula formula, const MesKB& kb, const WorldState& world) {
  Mes mes = partial;
  const auto& k = kb.at(formula);
  if (!mes.precon) {
    if (k.precon_any) {
      std::string chosen = k.precon.front();
      if (mes.loc) {
        if (auto it = world.spots.find(*mes.loc); it != world.spots.end()) {
          for (const auto& c : k.precon) {
            if (evaluate_condition(c, it->second)) {
              chosen = c;
              break;
            }
          }
        }
      }
      mes.precon = std::vector<std::string>{chosen};
    } else {
      mes.precon = k.precon;
    }
  }
  if (!mes.act) {
    std::vector<std::string> act;
    for (const auto& step : k.act) act.push_back(step.front());
    mes.act = std::move(act);
  }
  if (!mes.tool) {
    for (const auto& t : k.tool) {
      if (world.available_tools.count(t)) {
        mes.tool = t;
        break;
      }
    }
    if (!mes.tool) throw NoFeasibleValue(std::string(formula_name(formula)), "tool");
  }
  if (!mes.req) mes.req = k.req;
  return mes;
}

void inherit_locations(std::vector<Mes>& steps) {
  std::optional<std::string> last;
  for (auto& m : steps) {
    if (m.loc) last = m.loc;
    else if (last) m.loc = last;
  }
  std::optional<std::string> next;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->loc) next = it->loc;
    else if (next) it->loc = next;
  }
}

SubGoalCheck check_subgoal_executable(const Mes& mes, Formula formula, const WorldState& world) {
  (void)formula;
  SubGoalCheck out;
  for (auto slot : kMesSlots) {
    if (!mes.is_set(slot)) out.failed.emplace_back(slot_name(slot));
  }
  const SpotState* spot = nullptr;
  if (mes.loc) {
    auto it = world.spots.find(*mes.loc);
    if (it == world.spots.end()) out.failed.push_back("loc:" + detail::slug(*mes.loc));
    else spot = &it->second;
  }
  if (mes.precon && spot) {
    for (const auto& c : *mes.precon) {
      if (!is_known_condition(c) || !evaluate_condition(c, *spot)) out.failed.push_back("precon:" + detail::slug(c));
    }
  }
  if (mes.tool && !world.available_tools.count(*mes.tool)) out.failed.push_back("tool:" + detail::slug(*mes.tool));
  out.executable = out.failed.empty();
  return out;
}

}  // namespace exeplan
