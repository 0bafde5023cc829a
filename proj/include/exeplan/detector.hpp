#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exeplan/features.hpp"
#include "exeplan/formula.hpp"
#include "exeplan/svm.hpp"

namespace exeplan {

/// Detector labels: the three basic formulas plus the rejection class.
inline const std::vector<std::string> kDetectorClasses = {"CleanSpot", "DrillHole", "InstallScrew", "Other"};
inline constexpr std::size_t kOtherClass = 3;

struct LabeledSite {
  FeatureVector features;
  std::size_t label = 0;
};

enum class SelfTrainOrder {
  Corpus,      // unlabeled samples in the order given
  Confidence,  // most confident first under the seed classifier
};

struct SelfTrainOptions {
  SvmOptions svm;
  SelfTrainOrder order = SelfTrainOrder::Corpus;
};

struct SelfTrainResult {
  Classifier classifier;
  TrainingSet training;
  double precision = 0.0;
  std::size_t test_correct = 0;
  std::size_t test_total = 0;
};

/// Self-training over pre-encoded vectors; the classifier carries no
/// feature index.
SelfTrainResult self_train(const TrainingSet& seed, const std::vector<SparseVector>& unlabeled,
                           const TrainingSet& test, const SelfTrainOptions& options = {});

/// Self-training over raw feature vectors. The feature index is seeded from
/// the labeled samples and grows as self-labeled samples bring new values.
SelfTrainResult self_train(const std::vector<LabeledSite>& seed, const std::vector<FeatureVector>& unlabeled,
                           const std::vector<LabeledSite>& test, const SelfTrainOptions& options = {});

struct SubGoalMention {
  Site site;
  Formula label = Formula::CleanSpot;
  double score = 0.0;

  bool operator==(const SubGoalMention&) const = default;
};

struct Detection {
  std::vector<SubGoalMention> mentions;
  std::vector<Formula> transitions;
};

/// Label every candidate site, drop Other, and derive tranXY for each
/// adjacent pair of distinct sub-goals.
Detection detect(const ParsedDocument& doc, const Classifier& h, const Lexicon& lexicon);

std::string serialize_classifier(const Classifier& h);
Classifier parse_classifier(std::string_view json_text);
void save_classifier(const Classifier& h, const std::filesystem::path& path);
Classifier load_classifier(const std::filesystem::path& path);

}  // namespace exeplan
