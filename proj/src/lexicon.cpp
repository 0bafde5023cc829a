#include "exeplan/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "exeplan/error.hpp"
#include "text_util.hpp"

namespace exeplan {

namespace {

constexpr std::array<std::string_view, 9> kPosNames = {"VB", "NN", "DT",  "JJ",   "IN",
                                                       "RB", "PRP", "CD", "OTHER"};

}  // namespace

std::string_view pos_name(PosTag tag) { return kPosNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> pos_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPosNames.size(); ++i) {
    if (kPosNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!by_lemma_.emplace(e.lemma, i).second) {
      throw SchemaError("lexicon: duplicate head lemma '" + e.lemma + "'");
    }
    // The head form always maps to itself.
    by_variant_.emplace(e.lemma, i);
    for (const auto& v : e.variants) {
      auto [it, inserted] = by_variant_.emplace(v, i);
      if (!inserted && it->second != i) {
        throw SchemaError("lexicon: variant '" + v + "' listed under both '" +
                          entries_[it->second].lemma + "' and '" + e.lemma + "'");
      }
    }
  }
}

Lexicon Lexicon::parse(std::istream& in) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto columns = detail::split(line, '\t');
    if (columns.size() != 3) {
      throw SchemaError("lexicon row " + std::to_string(row) + ": expected 3 tab-separated columns, got " +
                        std::to_string(columns.size()));
    }
    LexiconEntry entry;
    entry.lemma = detail::to_lower(detail::trim(columns[0]));
    if (entry.lemma.empty()) {
      throw SchemaError("lexicon row " + std::to_string(row) + " column 1: empty head lemma");
    }
    auto pos = pos_from_name(detail::trim(columns[1]));
    if (!pos) {
      throw SchemaError("lexicon row " + std::to_string(row) + " column 2: unknown tag '" +
                        std::string(detail::trim(columns[1])) + "'");
    }
    entry.pos = *pos;
    for (auto& v : detail::split(columns[2], ',')) {
      auto variant = detail::to_lower(detail::trim(v));
      if (!variant.empty()) entry.variants.push_back(std::move(variant));
    }
    entries.push_back(std::move(entry));
  }
  return Lexicon(std::move(entries));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("lexicon: cannot open " + path.string());
  return parse(in);
}

std::optional<Lexicon::Match> Lexicon::lookup(std::string_view lowercase_surface) const {
  auto it = by_variant_.find(std::string(lowercase_surface));
  if (it == by_variant_.end()) return std::nullopt;
  const auto& e = entries_[it->second];
  return Match{e.lemma, e.pos};
}

bool Lexicon::contains_lemma(std::string_view lemma) const {
  return by_lemma_.count(std::string(lemma)) > 0;
}

bool Lexicon::is_trigger(std::string_view lemma) const {
  auto it = by_lemma_.find(std::string(lemma));
  return it != by_lemma_.end() && entries_[it->second].pos == PosTag::VB;
}

std::string Lexicon::serialize() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    out << e.lemma << '\t' << pos_name(e.pos) << '\t';
    for (std::size_t i = 0; i < e.variants.size(); ++i) {
      if (i) out << ',';
      out << e.variants[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace exeplan
