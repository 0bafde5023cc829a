#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exeplan/corpus.hpp"
#include "exeplan/detector.hpp"
#include "exeplan/ssvm.hpp"

namespace exeplan {

/// Held-out corpus paired with a training configuration: same rates, a
/// disjoint seed stream.
CorpusConfig held_out_config(const CorpusConfig& train, std::size_t n_docs = 200);

struct DetectorTraining {
  SelfTrainResult result;
  DetectorSplit split;
};

/// Self-train the detector on the sites of `train`, scoring precision on
/// the first `n_test` sites of `held_out`.
DetectorTraining train_detector(const std::vector<CorpusDoc>& train, const std::vector<CorpusDoc>& held_out,
                                const Lexicon& lexicon, std::size_t n_seed = 50, std::size_t n_test = 50,
                                const SelfTrainOptions& options = {}, SeedPick pick = SeedPick::Diverse);

/// Default planner trade-off for the shipped corpus.
inline constexpr double kPlannerC = 100.0;

SsvmResult train_planner(const std::vector<CorpusDoc>& train, const std::vector<std::string>& task_types,
                         const SsvmOptions& options);

}  // namespace exeplan
