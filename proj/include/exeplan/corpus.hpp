#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exeplan/detector.hpp"
#include "exeplan/lexicon.hpp"
#include "exeplan/mes.hpp"
#include "exeplan/ssvm.hpp"

namespace exeplan {

struct CorpusConfig {
  std::size_t n_docs = 600;
  std::uint64_t seed = 1;
  /// Chance of a distractor sentence per document, and of a tool phrase
  /// that contains a trigger word ("the drilling machine").
  double distractor_rate = 0.3;
  /// Chance that a location (after the first step), tool or requirement
  /// is left unsaid.
  double omission_rate = 0.5;
  /// Chance that a two-step plan is told in reverse ("... But first, ...").
  double reorder_rate = 0.1;
};

struct GoldMention {
  Site site;
  Formula formula = Formula::CleanSpot;
  bool operator==(const GoldMention&) const = default;
};

/// One step of the intended plan with the slot values the instructor has
/// in mind, whether said or not.
struct GoldStep {
  Formula formula = Formula::CleanSpot;
  std::string loc;
  std::string tool;
  std::vector<std::string> req;
  bool loc_said = true;
  bool tool_said = true;
  bool req_said = true;
  bool operator==(const GoldStep&) const = default;
};

struct CorpusDoc {
  std::size_t id = 0;
  std::string text;
  /// Trigger sites that are sub-goals, in text order.
  std::vector<GoldMention> mentions;
  /// Trigger sites that are not sub-goals.
  std::vector<Site> distractors;
  /// tranXY between adjacent mentions in text order.
  std::vector<Formula> transitions;
  std::string task_type;
  /// Steps in execution order.
  std::vector<GoldStep> steps;
  WorldState world;
  bool operator==(const CorpusDoc&) const = default;
};

/// Deterministic template generator. The lexicon is used to align trigger
/// words with the candidate sites the frontend finds.
std::vector<CorpusDoc> generate_corpus(const CorpusConfig& config, const Lexicon& lexicon);

std::string serialize_doc(const CorpusDoc& doc);
CorpusDoc parse_doc(std::string_view json_line);
/// JSON Lines, one document per line.
std::string serialize_corpus(const std::vector<CorpusDoc>& corpus);
std::vector<CorpusDoc> parse_corpus(std::string_view jsonl);
void save_corpus(const std::vector<CorpusDoc>& corpus, const std::filesystem::path& path);
std::vector<CorpusDoc> load_corpus(const std::filesystem::path& path);

/// Every candidate site of the document with its gold detector label.
struct GoldSite {
  Site site;
  std::size_t label = kOtherClass;
};
std::vector<GoldSite> gold_sites(const CorpusDoc& doc);

/// Features and labels of every candidate site, in corpus order.
std::vector<LabeledSite> labeled_sites(const std::vector<CorpusDoc>& corpus, const Lexicon& lexicon);

/// Seed, unlabeled pool and held-out test set for self-training.
struct DetectorSplit {
  std::vector<LabeledSite> seed;
  std::vector<FeatureVector> unlabeled;
  /// Gold labels of the unlabeled pool, kept for reporting only.
  std::vector<std::size_t> unlabeled_labels;
  std::vector<LabeledSite> test;
};

enum class SeedPick {
  First,    // the first sites of the corpus
  Diverse,  // round-robin over (label, surface, tag) groups, earliest site first
};

/// The seed is taken from `train` and the rest of its sites, in corpus
/// order, form the unlabeled pool.
DetectorSplit split_sites(const std::vector<CorpusDoc>& train, const std::vector<CorpusDoc>& held_out,
                          const Lexicon& lexicon, std::size_t n_seed = 50, std::size_t n_test = 50,
                          SeedPick pick = SeedPick::Diverse);

/// Planner training example: the gold plan in execution order and its task.
PlanExample plan_example(const CorpusDoc& doc, const std::vector<std::string>& task_types);
std::vector<PlanExample> plan_examples(const std::vector<CorpusDoc>& corpus, const std::vector<std::string>& task_types);

}  // namespace exeplan
