#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace exeplan {

enum class PosTag { VB, NN, DT, JJ, IN, RB, PRP, CD, OTHER };

std::string_view pos_name(PosTag tag);
std::optional<PosTag> pos_from_name(std::string_view name);

struct LexiconEntry {
  std::string lemma;
  PosTag pos = PosTag::NN;
  std::vector<std::string> variants;
};

/// Domain lexicon: surface variants normalized to a head lemma and tag.
///
/// Every entry is a task-related word. Verb entries form the trigger
/// class: a token whose lemma is a lexicon verb opens a candidate site
/// for entity detection, whatever its tag in context.
///
/// File format, one entry per line:
///   head_lemma <TAB> pos <TAB> variant1,variant2,...
/// Blank lines and lines starting with '#' are ignored.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconEntry> entries);

  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);

  struct Match {
    std::string lemma;
    PosTag pos;
  };
  std::optional<Match> lookup(std::string_view lowercase_surface) const;

  bool contains_lemma(std::string_view lemma) const;
  bool is_trigger(std::string_view lemma) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  std::string serialize() const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_variant_;
  std::unordered_map<std::string, std::size_t> by_lemma_;
};

}  // namespace exeplan
