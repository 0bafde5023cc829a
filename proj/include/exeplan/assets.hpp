#pragma once

#include <filesystem>

#include "exeplan/pipeline.hpp"

namespace exeplan {

/// Directory holding the shipped lexicon, knowledge base, world and models.
/// EXEPLAN_DATA_DIR overrides the location chosen at build time.
std::filesystem::path data_dir();

std::filesystem::path default_lexicon_path();
std::filesystem::path default_kb_path();
std::filesystem::path default_world_path();
std::filesystem::path default_detector_path();
std::filesystem::path default_planner_path();

struct ModelPaths {
  std::filesystem::path lexicon = default_lexicon_path();
  std::filesystem::path detector = default_detector_path();
  std::filesystem::path planner = default_planner_path();
  std::filesystem::path kb = default_kb_path();
};

Models load_models(const ModelPaths& paths = {});

}  // namespace exeplan
