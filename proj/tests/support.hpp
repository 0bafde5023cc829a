#pragma once

#include <filesystem>
#include <string>

#include "exeplan/assets.hpp"
#include "exeplan/pipeline.hpp"
#include "exeplan/training.hpp"

namespace exeplan::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(EXEPLAN_TEST_DATA_DIR) / name;
}

inline const Lexicon& shipped_lexicon() {
  static const Lexicon lexicon = Lexicon::load(data_path("lexicon.tsv"));
  return lexicon;
}

inline const MesKB& shipped_kb() {
  static const MesKB kb = MesKB::load(data_path("mes_kb.json"));
  return kb;
}

inline WorldState shipped_world() { return load_world(data_path("world.json")); }

/// The models checked into the data directory.
inline const Models& shipped_models() {
  static const Models models = [] {
    ModelPaths paths;
    paths.lexicon = data_path("lexicon.tsv");
    paths.detector = data_path("detector.json");
    paths.planner = data_path("planner.json");
    paths.kb = data_path("mes_kb.json");
    return load_models(paths);
  }();
  return models;
}

/// Default corpus pair, generated once per process.
struct DefaultCorpora {
  std::vector<CorpusDoc> train;
  std::vector<CorpusDoc> held_out;
};

inline const DefaultCorpora& default_corpora() {
  static const DefaultCorpora corpora = [] {
    DefaultCorpora c;
    CorpusConfig config;
    c.train = generate_corpus(config, shipped_lexicon());
    c.held_out = generate_corpus(held_out_config(config), shipped_lexicon());
    return c;
  }();
  return corpora;
}

}  // namespace exeplan::testing
