#include "exeplan/assets.hpp"

#include <cstdlib>

namespace exeplan {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("EXEPLAN_DATA_DIR"); env && *env) return env;
  return EXEPLAN_BUILTIN_DATA_DIR;
}

std::filesystem::path default_lexicon_path() { return data_dir() / "lexicon.tsv"; }
std::filesystem::path default_kb_path() { return data_dir() / "mes_kb.json"; }
std::filesystem::path default_world_path() { return data_dir() / "world.json"; }
std::filesystem::path default_detector_path() { return data_dir() / "detector.json"; }
std::filesystem::path default_planner_path() { return data_dir() / "planner.json"; }

Models load_models(const ModelPaths& paths) {
  Models m;
  m.lexicon = Lexicon::load(paths.lexicon);
  m.detector = load_classifier(paths.detector);
  m.planner = load_model(paths.planner);
  m.kb = MesKB::load(paths.kb);
  return m;
}

}  // namespace exeplan
