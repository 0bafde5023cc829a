#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "exeplan/frontend.hpp"
#include "exeplan/sparse.hpp"

namespace exeplan {

inline constexpr std::string_view kNone = "NONE";

struct Site {
  std::size_t sentence = 0;
  std::size_t token = 0;

  auto operator<=>(const Site&) const = default;
};

/// Task-centered features of one keyword occurrence.
///
/// Scalar fields hold one lemma/tag (or kNone); list fields are bags.
/// An empty scalar string counts as "not populated" and is not encoded.
struct FeatureVector {
  std::string w;          // keyword surface, lowercased
  std::string pos;        // keyword tag
  std::vector<std::string> wd;    // relations touching the keyword
  std::vector<std::string> posd;  // tag-typed relations of the sentence
  std::string kw;         // normalized task keyword
  std::string pre_subg;
  std::string next_subg;
  std::string pre_n;
  std::string next_n;
  std::string pre_w;
  std::string next_w;
  std::vector<std::string> kwd;   // keyword+dependent lemma pairs
  std::vector<std::string> pos_kwd;  // tag pattern of each kwd entry
  std::vector<std::string> nnd;   // relations between task-related nouns
  std::vector<std::string> context;  // task-related lemmas in the sentence

  bool operator==(const FeatureVector&) const = default;
};

/// Field names as they appear in the feature index.
inline constexpr std::array<std::string_view, 15> kFeatureFields = {
    "w",    "pos",  "wd",    "posd",  "KW",   "preSubg", "nextSubg", "preN",
    "nextN", "preW", "nextW", "KWD",  "posD", "NND",     "context"};

/// Calls fn(field, value) for every populated atomic value, in field order.
void for_each_feature(const FeatureVector& fv,
                      const std::function<void(std::string_view, std::string_view)>& fn);

/// Append-only map from (field, value) to column.
class FeatureIndex {
 public:
  std::size_t dimension() const { return columns_.size(); }

  std::optional<std::uint32_t> find(std::string_view field, std::string_view value) const;
  std::uint32_t add(std::string_view field, std::string_view value);

  const std::vector<std::pair<std::string, std::string>>& columns() const { return columns_; }

  bool operator==(const FeatureIndex& other) const { return columns_ == other.columns_; }

 private:
  static std::string key(std::string_view field, std::string_view value);

  std::vector<std::pair<std::string, std::string>> columns_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
};

enum class Growth { Frozen, Grow };

/// Candidate keyword occurrences (lexicon trigger lemmas), in document order.
std::vector<Site> candidate_sites(const ParsedDocument& doc, const Lexicon& lexicon);

FeatureVector extract_features(const ParsedDocument& doc, Site site, const Lexicon& lexicon);

/// Same as above with the document's candidate sites precomputed.
FeatureVector extract_features(const ParsedDocument& doc, Site site, const Lexicon& lexicon,
                               const std::vector<Site>& sites);

/// One-hot encoding. Unseen values are appended to the index when growing
/// and dropped otherwise. All nonzero entries equal 1.
SparseVector vectorize(const FeatureVector& fv, FeatureIndex& index, Growth growth);
SparseVector vectorize(const FeatureVector& fv, const FeatureIndex& index);

}  // namespace exeplan
