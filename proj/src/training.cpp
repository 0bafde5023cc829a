#include "exeplan/training.hpp"

namespace exeplan {

CorpusConfig held_out_config(const CorpusConfig& train, std::size_t n_docs) {
  CorpusConfig cfg = train;
  cfg.n_docs = n_docs;
  cfg.seed = train.seed ^ 0x9e3779b97f4a7c15ULL;
  return cfg;
}

DetectorTraining train_detector(const std::vector<CorpusDoc>& train, const std::vector<CorpusDoc>& held_out,
                                const Lexicon& lexicon, std::size_t n_seed, std::size_t n_test,
                                const SelfTrainOptions& options, SeedPick pick) {
  DetectorTraining out;
  out.split = split_sites(train, held_out, lexicon, n_seed, n_test, pick);
  out.result = self_train(out.split.seed, out.split.unlabeled, out.split.test, options);
  return out;
}

SsvmResult train_planner(const std::vector<CorpusDoc>& train, const std::vector<std::string>& task_types,
                         const SsvmOptions& options) {
  return train_ssvm(plan_examples(train, task_types), task_types, options);
}

}  // namespace exeplan
