#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "exeplan/lexicon.hpp"

namespace exeplan {

struct Token {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::OTHER;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

enum class Relation { Root, Dobj, Nmod, Amod, Case, Det };

std::string_view relation_name(Relation r);

/// Head index of a root edge.
inline constexpr std::size_t kVirtualRoot = std::numeric_limits<std::size_t>::max();

struct DependencyEdge {
  Relation relation;
  std::size_t head;
  std::size_t dependent;

  bool operator==(const DependencyEdge&) const = default;
};

struct Sentence {
  std::string raw;
  std::vector<Token> tokens;
  std::vector<DependencyEdge> edges;
  bool has_verb = false;

  bool operator==(const Sentence&) const = default;
};

struct ParsedDocument {
  std::vector<Sentence> sentences;

  bool operator==(const ParsedDocument&) const = default;
};

/// Split on '.', '!' or '?' followed by whitespace or end of text.
/// The terminator stays with its sentence; text after the last terminator
/// forms a final sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Tokenize one sentence, drop punctuation, normalize keywords via the
/// lexicon and assign tags. Words outside the lexicon fall back to a small
/// closed-class table, then suffix rules, then NN.
std::vector<Token> tokenize_and_tag(std::string_view raw, const Lexicon& lexicon);

/// Rule-based dependency edges over a tagged sentence.
/// Throws NoVerb when the sentence contains no VB token.
std::vector<DependencyEdge> parse_dependencies(const std::vector<Token>& tokens);

/// split_sentences + tokenize_and_tag + parse_dependencies. Sentences
/// without a verb are kept with no edges and has_verb = false.
ParsedDocument parse_document(std::string_view text, const Lexicon& lexicon);

}  // namespace exeplan
