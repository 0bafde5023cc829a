#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exeplan/corpus.hpp"
#include "exeplan/pipeline.hpp"

namespace exeplan {

/// Precision and recall from confusion counts. A zero denominator yields 0
/// and sets the matching flag.
struct Prf {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
};

Prf make_prf(std::size_t tp, std::size_t fp, std::size_t fn);

struct LabelMetric {
  std::string label;
  Prf prf;
};

struct MetricReport {
  std::vector<LabelMetric> per_label;
  /// Mean precision and recall over labels that occur in gold or prediction.
  double average_precision = 0.0;
  double average_recall = 0.0;
  std::optional<Prf> mes_mapping;
  std::size_t documents = 0;
  std::size_t executable = 0;
  std::optional<double> executable_proportion;

  const LabelMetric* find(std::string_view label) const;
};

std::string report_json(const MetricReport& report);

struct DocDetection {
  std::vector<GoldMention> mentions;
  std::vector<Formula> transitions;
};

/// Per-formula scores (sub-goals and transitions) of given detections.
MetricReport score_detections(const std::vector<CorpusDoc>& corpus, const std::vector<DocDetection>& predicted);

MetricReport eval_disambiguation(const Classifier& detector, const Lexicon& lexicon,
                                 const std::vector<CorpusDoc>& corpus);

struct PlanEvalOptions {
  CompileMode mode = CompileMode::Exeplan;
  double threshold = kDefaultThreshold;
  /// Compile every document against this world instead of its own.
  std::optional<WorldState> world;
};

/// Per-task scores, MES mapping and executable-plan proportion.
MetricReport eval_plans(const Models& models, const std::vector<CorpusDoc>& corpus, const PlanEvalOptions& options = {});

}  // namespace exeplan
