#include "exeplan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "exeplan/error.hpp"
#include "exeplan/frontend.hpp"

namespace exeplan {

namespace {

using json = nlohmann::json;
using Phrases = std::vector<std::string>;

// Portable draws on top of mt19937_64; the std distributions are not
// specified bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v.at(below(v.size()));
  }

 private:
  std::mt19937_64 engine_;
};

// Markup: "[X|word]" marks a trigger word whose gold label is X, one of
// C, D, I (sub-goals) or O (not a sub-goal).

const std::map<std::string, Phrases>& location_phrases() {
  static const std::map<std::string, Phrases> kPhrases = {
      {"center", {"at the center", "in the middle", "at the center of the board", "in middle", "at the centre"}},
      {"upper-right",
       {"at the upper right corner", "at the top right", "at the upper-right spot", "in the top-right corner"}},
      {"bottom-right",
       {"at the bottom right", "in the lower right corner", "at the bottom-right corner", "at the lower-right point"}},
  };
  return kPhrases;
}

const std::map<std::string, std::string>& tool_phrases() {
  static const std::map<std::string, std::string> kPhrases = {
      {"brush", "brush"},
      {"air hose", "air hose"},
      {"cloth", "cloth"},
      {"rag", "rag"},
      {"broom", "broom"},
      {"sweeper", "sweeper"},
      {"driller", "driller"},
      {"drilling arm", "[O|drilling] arm"},
      {"drilling machine", "[O|drilling] machine"},
      {"screwdriver", "screwdriver"},
      {"install machine", "[O|install] machine"},
  };
  return kPhrases;
}

struct FormulaTemplates {
  std::vector<std::string> tools;
  std::map<std::string, Phrases> req;
  Phrases sentences;        // {c} connective, {L} location, {T} tool, {R} requirement
  Phrases unlocated;        // used when the location is unsaid
};

const std::map<Formula, FormulaTemplates>& templates() {
  static const std::map<Formula, FormulaTemplates> kTemplates = {
      {Formula::CleanSpot,
       {{"brush", "air hose", "cloth", "rag", "broom", "sweeper"},
        {{"sweep slowly", {" slowly", " gently"}},
         {"keep the unneeded tools away", {" and keep the unneeded tools away", " and keep unneeded tools away"}},
         {"sweep precisely", {" precisely", " thoroughly"}}},
        {"{c}[C|clean] the dust{L}{T}{R}.", "{c}[C|clean] the spot{L}{T}{R}.", "{c}[C|remove] the dust{L}{T}{R}.",
         "{c}[C|remove] the debris{L}{T}{R}.", "{c}[C|sweep] away the chips{L}{T}{R}.",
         "{c}[C|wipe] the surface{L}{T}{R}.", "{c}keep the surface [C|clean]{L}{T}{R}.",
         "{c}[C|clean] up the dirt{L}{T}{R}.", "{c}[C|sweep] the dust away{L}{T}{R}."},
        {"{c}[C|clean] the dust{T}{R}.", "{c}[C|remove] the chips{T}{R}.", "{c}keep the surface [C|clean]{T}{R}.",
         "{c}[C|wipe] the spot{T}{R}.", "{c}[C|sweep] away the debris{T}{R}."}}},
      {Formula::DrillHole,
       {{"driller", "drilling arm", "drilling machine"},
        {{"slowly", {" slowly"}},
         {"keep away from unneeded tools", {" and keep away from unneeded tools", " and keep away from the unneeded tools"}},
         {"precisely", {" precisely", " accurately"}}},
        {"{c}[D|drill] a hole{L}{T}{R}.", "{c}[D|bore] a hole{L}{T}{R}.", "{c}[D|drill] a small hole{L}{T}{R}.",
         "{c}[D|drill] one hole{L}{T}{R}.", "{c}make a hole{L} by [D|drilling]{T}{R}."},
        {"{c}[D|drill] a hole{T}{R}.", "{c}[D|bore] a hole there{T}{R}.", "{c}[D|drill] a small hole{T}{R}."}}},
      {Formula::InstallScrew,
       {{"screwdriver", "install machine"},
        {{"firmly", {" firmly", " tightly"}},
         {"slowly", {" slowly"}},
         {"make surface clean", {" and leave the surface tidy"}}},
        {"{c}[I|install] a screw{L}{T}{R}.", "{c}[I|insert] a screw{L}{T}{R}.", "{c}[I|mount] the screw{L}{T}{R}.",
         "{c}[I|install] one screw{L}{T}{R}."},
        {"{c}[I|install] a screw at the created hole{T}{R}.", "{c}[I|insert] a screw into the hole{T}{R}.",
         "{c}[I|mount] a screw there{T}{R}."}}},
  };
  return kTemplates;
}

const Phrases& distractor_sentences() {
  static const Phrases kSentences = {
      "Wait, I need to [O|remove] the tools on the surface.",
      "Wait, I need to [O|remove] the cables on the table.",
      "Wait, we have to [O|remove] the boxes on the board.",
      "Eh, the [O|drill] is missing.",
      "Oh, the [O|drill] is broken.",
      "Hmm, the [O|drill] is still on the table.",
      "First I will [O|install] a [O|drill] on your arm.",
      "First I will [O|install] a gripper on your arm.",
      "Later I will [O|install] a camera on your arm.",
      "The [O|drilling] machine is heavy.",
      "The [O|drilling] machine is loud.",
      "Do not [O|remove] the screwdriver from the table.",
      "Do not [O|remove] the cables from your arm.",
      "Someone [O|removed] the tools from the table.",
      "I [O|installed] the camera yesterday.",
  };
  return kSentences;
}

const Phrases& neutral_sentences() {
  static const Phrases kSentences = {"This is the practice board.", "Thanks.", "The board is ready now.",
                                     "Let me know when you are done."};
  return kSentences;
}

struct Rendered {
  std::string text;
  std::vector<char> labels;
};

Rendered render(const std::string& marked) {
  Rendered out;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (marked[i] == '[') {
      const auto bar = marked.find('|', i);
      const auto close = marked.find(']', i);
      out.labels.push_back(marked[i + 1]);
      out.text += marked.substr(bar + 1, close - bar - 1);
      i = close;
    } else {
      out.text += marked[i];
    }
  }
  if (!out.text.empty()) out.text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out.text[0])));
  return out;
}

std::string replace(std::string s, const std::string& key, const std::string& value) {
  const auto pos = s.find(key);
  if (pos != std::string::npos) s.replace(pos, key.size(), value);
  return s;
}

bool has_markup(const std::string& s) { return s.find('[') != std::string::npos; }

struct PlanTemplate {
  std::string task;
  std::vector<Formula> steps;
};

const std::vector<PlanTemplate>& plan_templates() {
  using F = Formula;
  static const std::vector<PlanTemplate> kPlans = {
      {"clean", {F::CleanSpot}},
      {"drill", {F::DrillHole}},
      {"drill", {F::DrillHole, F::CleanSpot}},
      {"install", {F::InstallScrew}},
      {"install", {F::DrillHole, F::InstallScrew}},
      {"install", {F::InstallScrew, F::CleanSpot}},
      {"install", {F::DrillHole, F::InstallScrew, F::CleanSpot}},
  };
  return kPlans;
}

WorldState initial_world(const PlanTemplate& plan, const std::string& spot) {
  WorldState w;
  for (auto s : kSpots) w.spots.emplace(std::string(s), SpotState{});
  auto& st = w.spots.at(spot);
  if (plan.steps.front() == Formula::CleanSpot) st.dirty = true;
  if (plan.steps.front() == Formula::InstallScrew) {
    st.has_hole = true;
    st.hole_size_ok = true;
  }
  for (const auto& [tool, _] : tool_phrases()) w.available_tools.insert(tool);
  w.available_tools.insert("screw");
  return w;
}

CorpusDoc generate_doc(std::size_t id, const CorpusConfig& cfg, Rng& rng, const Lexicon& lexicon) {
  // task type first so the three types stay balanced whatever their template count
  static const std::vector<std::string> kTasks = {"clean", "drill", "install"};
  const std::string& task = rng.pick(kTasks);
  std::vector<const PlanTemplate*> options;
  for (const auto& p : plan_templates()) {
    if (p.task == task) options.push_back(&p);
  }
  const PlanTemplate& plan = *rng.pick(options);
  const std::string spot(kSpots[rng.below(kSpots.size())]);

  CorpusDoc doc;
  doc.id = id;
  doc.task_type = plan.task;
  doc.world = initial_world(plan, spot);

  std::vector<std::size_t> told(plan.steps.size());
  for (std::size_t k = 0; k < told.size(); ++k) told[k] = k;
  const bool reversed = plan.steps.size() == 2 && rng.chance(cfg.reorder_rate);
  if (reversed) std::reverse(told.begin(), told.end());

  for (auto f : plan.steps) {
    const auto& t = templates().at(f);
    GoldStep step;
    step.formula = f;
    step.loc = spot;
    step.tool = rng.pick(t.tools);
    if (has_markup(tool_phrases().at(step.tool)) && !rng.chance(cfg.distractor_rate)) {
      std::vector<std::string> plain;
      for (const auto& tool : t.tools) {
        if (!has_markup(tool_phrases().at(tool))) plain.push_back(tool);
      }
      step.tool = rng.pick(plain);
    }
    std::vector<std::string> reqs;
    for (const auto& [value, _] : t.req) reqs.push_back(value);
    step.req = {rng.pick(reqs)};
    step.tool_said = !rng.chance(cfg.omission_rate);
    step.req_said = !rng.chance(cfg.omission_rate);
    doc.steps.push_back(std::move(step));
  }
  for (std::size_t n = 0; n < told.size(); ++n) {
    doc.steps[told[n]].loc_said = n == 0 || !rng.chance(cfg.omission_rate);
  }

  // drop a few tools nobody asked for
  std::set<std::string> needed;
  for (const auto& s : doc.steps) needed.insert(s.tool);
  for (auto it = doc.world.available_tools.begin(); it != doc.world.available_tools.end();) {
    if (!needed.count(*it) && rng.chance(0.15)) it = doc.world.available_tools.erase(it);
    else ++it;
  }
  for (auto f : kBasicFormulas) {
    const auto& tools = templates().at(f).tools;
    if (std::none_of(tools.begin(), tools.end(), [&](const auto& t) { return doc.world.available_tools.count(t); })) {
      doc.world.available_tools.insert(tools.front());
    }
  }

  std::vector<std::string> sentences;
  for (std::size_t n = 0; n < told.size(); ++n) {
    const GoldStep& step = doc.steps[told[n]];
    const auto& t = templates().at(step.formula);
    std::string connective;
    if (n == 0) {
      static const Phrases kFirst = {"", "", "first, ", "please ", "first "};
      connective = rng.pick(kFirst);
    } else if (reversed) {
      static const Phrases kBefore = {"but first, ", "but before that you should "};
      connective = rng.pick(kBefore);
    } else if (n + 1 == told.size() && told.size() > 2) {
      static const Phrases kLast = {"finally, ", "then ", "after that, "};
      connective = rng.pick(kLast);
    } else {
      static const Phrases kNext = {"then ", "after that, ", "next, ", "then "};
      connective = rng.pick(kNext);
    }
    const bool fronted = step.loc_said && n == 0 && rng.chance(0.15);
    std::string sentence = rng.pick(step.loc_said ? t.sentences : t.unlocated);
    std::string loc;
    if (step.loc_said) {
      loc = rng.pick(location_phrases().at(step.loc));
      if (fronted) {
        connective = loc + " ";
        loc.clear();
      } else {
        loc = " " + loc;
      }
    }
    std::string tool;
    if (step.tool_said) {
      static const Phrases kWith = {" with the ", " using the ", " with the "};
      tool = rng.pick(kWith) + tool_phrases().at(step.tool);
    }
    std::string req;
    if (step.req_said) req = rng.pick(t.req.at(step.req.front()));
    sentence = replace(sentence, "{c}", connective);
    sentence = replace(sentence, "{L}", loc);
    sentence = replace(sentence, "{T}", tool);
    sentence = replace(sentence, "{R}", req);
    sentences.push_back(std::move(sentence));
  }
  if (rng.chance(cfg.distractor_rate)) {
    const auto at = rng.below(sentences.size() + 1);
    sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(at), rng.pick(distractor_sentences()));
  }
  if (rng.chance(0.2)) {
    const auto at = rng.below(sentences.size() + 1);
    sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(at), rng.pick(neutral_sentences()));
  }

  std::vector<char> labels;
  for (const auto& s : sentences) {
    Rendered r = render(s);
    if (!doc.text.empty()) doc.text += ' ';
    doc.text += r.text;
    labels.insert(labels.end(), r.labels.begin(), r.labels.end());
  }

  const ParsedDocument parsed = parse_document(doc.text, lexicon);
  const auto sites = candidate_sites(parsed, lexicon);
  if (sites.size() != labels.size()) {
    throw std::logic_error("generator markup does not align with candidate sites in: " + doc.text);
  }
  std::optional<Formula> previous;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    switch (labels[i]) {
      case 'C': doc.mentions.push_back({sites[i], Formula::CleanSpot}); break;
      case 'D': doc.mentions.push_back({sites[i], Formula::DrillHole}); break;
      case 'I': doc.mentions.push_back({sites[i], Formula::InstallScrew}); break;
      default: doc.distractors.push_back(sites[i]); continue;
    }
    const Formula f = doc.mentions.back().formula;
    if (previous) {
      if (auto tr = transition_between(*previous, f)) doc.transitions.push_back(*tr);
    }
    previous = f;
  }
  return doc;
}

json site_json(const Site& s) { return {{"sentence", s.sentence}, {"token", s.token}}; }

Site site_from(const json& j) { return {j.at("sentence").get<std::size_t>(), j.at("token").get<std::size_t>()}; }

Formula formula_from(const json& j, bool basic) {
  const auto name = j.get<std::string>();
  auto f = formula_from_name(name);
  if (!f || is_basic(*f) != basic) throw SchemaError("corpus: unexpected formula '" + name + "'");
  return *f;
}

}  // namespace

std::vector<CorpusDoc> generate_corpus(const CorpusConfig& config, const Lexicon& lexicon) {
  for (double r : {config.distractor_rate, config.omission_rate, config.reorder_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("corpus rates must lie in [0, 1]");
  }
  Rng rng(config.seed);
  std::vector<CorpusDoc> corpus;
  corpus.reserve(config.n_docs);
  for (std::size_t i = 0; i < config.n_docs; ++i) corpus.push_back(generate_doc(i, config, rng, lexicon));
  return corpus;
}

std::string serialize_doc(const CorpusDoc& doc) {
  json j;
  j["version"] = 1;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["task_type"] = doc.task_type;
  j["mentions"] = json::array();
  for (const auto& m : doc.mentions) {
    auto s = site_json(m.site);
    s["formula"] = std::string(formula_name(m.formula));
    j["mentions"].push_back(std::move(s));
  }
  j["distractors"] = json::array();
  for (const auto& s : doc.distractors) j["distractors"].push_back(site_json(s));
  j["transitions"] = json::array();
  for (auto t : doc.transitions) j["transitions"].push_back(std::string(formula_name(t)));
  j["steps"] = json::array();
  j["omitted"] = json::array();
  for (std::size_t k = 0; k < doc.steps.size(); ++k) {
    const auto& s = doc.steps[k];
    j["steps"].push_back({{"formula", std::string(formula_name(s.formula))},
                          {"location", s.loc},
                          {"tool", s.tool},
                          {"human_requirements", s.req}});
    if (!s.loc_said) j["omitted"].push_back({{"step", k}, {"slot", "loc"}});
    if (!s.tool_said) j["omitted"].push_back({{"step", k}, {"slot", "tool"}});
    if (!s.req_said) j["omitted"].push_back({{"step", k}, {"slot", "req"}});
  }
  j["world"] = json::parse(serialize_world(doc.world));
  return j.dump();
}

CorpusDoc parse_doc(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("corpus: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) throw SchemaError("corpus: unsupported version");
    CorpusDoc doc;
    doc.id = j.at("id").get<std::size_t>();
    doc.text = j.at("text").get<std::string>();
    doc.task_type = j.at("task_type").get<std::string>();
    for (const auto& m : j.at("mentions")) doc.mentions.push_back({site_from(m), formula_from(m.at("formula"), true)});
    for (const auto& s : j.at("distractors")) doc.distractors.push_back(site_from(s));
    for (const auto& t : j.at("transitions")) doc.transitions.push_back(formula_from(t, false));
    for (const auto& s : j.at("steps")) {
      GoldStep step;
      step.formula = formula_from(s.at("formula"), true);
      step.loc = s.at("location").get<std::string>();
      step.tool = s.at("tool").get<std::string>();
      step.req = s.at("human_requirements").get<std::vector<std::string>>();
      doc.steps.push_back(std::move(step));
    }
    for (const auto& o : j.at("omitted")) {
      const auto k = o.at("step").get<std::size_t>();
      if (k >= doc.steps.size()) throw SchemaError("corpus: omitted step out of range");
      const auto slot = o.at("slot").get<std::string>();
      if (slot == "loc") doc.steps[k].loc_said = false;
      else if (slot == "tool") doc.steps[k].tool_said = false;
      else if (slot == "req") doc.steps[k].req_said = false;
      else throw SchemaError("corpus: omitted slot must be loc, tool or req");
    }
    doc.world = parse_world(j.at("world").dump());
    return doc;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("corpus: ") + e.what());
  }
}

std::string serialize_corpus(const std::vector<CorpusDoc>& corpus) {
  std::string out;
  for (const auto& d : corpus) {
    out += serialize_doc(d);
    out += '\n';
  }
  return out;
}

std::vector<CorpusDoc> parse_corpus(std::string_view jsonl) {
  std::vector<CorpusDoc> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    ++line_no;
    const auto line = jsonl.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_doc(line));
      } catch (const SchemaError& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return out;
}

void save_corpus(const std::vector<CorpusDoc>& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_corpus(corpus);
}

std::vector<CorpusDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("corpus: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

std::vector<GoldSite> gold_sites(const CorpusDoc& doc) {
  std::vector<GoldSite> out;
  for (const auto& m : doc.mentions) out.push_back({m.site, index_of(m.formula)});
  for (const auto& s : doc.distractors) out.push_back({s, kOtherClass});
  std::sort(out.begin(), out.end(), [](const GoldSite& a, const GoldSite& b) { return a.site < b.site; });
  return out;
}

std::vector<LabeledSite> labeled_sites(const std::vector<CorpusDoc>& corpus, const Lexicon& lexicon) {
  std::vector<LabeledSite> out;
  for (const auto& doc : corpus) {
    const ParsedDocument parsed = parse_document(doc.text, lexicon);
    const auto sites = candidate_sites(parsed, lexicon);
    for (const auto& g : gold_sites(doc)) {
      out.push_back({extract_features(parsed, g.site, lexicon, sites), g.label});
    }
  }
  return out;
}

DetectorSplit split_sites(const std::vector<CorpusDoc>& train, const std::vector<CorpusDoc>& held_out,
                          const Lexicon& lexicon, std::size_t n_seed, std::size_t n_test, SeedPick pick) {
  DetectorSplit split;
  auto train_sites = labeled_sites(train, lexicon);
  if (train_sites.size() < n_seed) throw std::invalid_argument("training corpus has fewer sites than the seed size");

  std::vector<bool> in_seed(train_sites.size(), false);
  if (pick == SeedPick::First) {
    std::fill(in_seed.begin(), in_seed.begin() + static_cast<std::ptrdiff_t>(n_seed), true);
  } else {
    // groups in order of first appearance, each a queue of site positions
    using Key = std::tuple<std::size_t, std::string, std::string>;
    std::vector<std::pair<Key, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < train_sites.size(); ++i) {
      const auto& f = train_sites[i].features;
      const Key key{train_sites[i].label, f.w, f.pos};
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
      if (it == groups.end()) groups.push_back({key, {i}});
      else it->second.push_back(i);
    }
    std::size_t taken = 0;
    for (std::size_t round = 0; taken < n_seed; ++round) {
      for (auto& g : groups) {
        if (taken == n_seed) break;
        if (round < g.second.size()) {
          in_seed[g.second[round]] = true;
          ++taken;
        }
      }
    }
  }
  for (std::size_t i = 0; i < train_sites.size(); ++i) {
    if (in_seed[i]) {
      split.seed.push_back(std::move(train_sites[i]));
    } else {
      split.unlabeled.push_back(std::move(train_sites[i].features));
      split.unlabeled_labels.push_back(train_sites[i].label);
    }
  }
  auto test_sites = labeled_sites(held_out, lexicon);
  if (test_sites.size() > n_test) test_sites.resize(n_test);
  split.test = std::move(test_sites);
  return split;
}

PlanExample plan_example(const CorpusDoc& doc, const std::vector<std::string>& task_types) {
  std::vector<Formula> seq;
  for (const auto& s : doc.steps) seq.push_back(s.formula);
  auto it = std::find(task_types.begin(), task_types.end(), doc.task_type);
  if (it == task_types.end()) throw std::invalid_argument("document task '" + doc.task_type + "' is not a task type");
  return {satisfied_formulas(seq), static_cast<std::size_t>(it - task_types.begin())};
}

std::vector<PlanExample> plan_examples(const std::vector<CorpusDoc>& corpus, const std::vector<std::string>& task_types) {
  std::vector<PlanExample> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) out.push_back(plan_example(d, task_types));
  return out;
}

}  // namespace exeplan
