#include "exeplan/frontend.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <unordered_map>

#include "exeplan/error.hpp"
#include "text_util.hpp"

namespace exeplan {

namespace {

struct ClosedWord {
  std::string_view lemma;
  PosTag pos;
};

// Function words and general verbs that are not task keywords. The lexicon
// takes precedence over this table.
const std::unordered_map<std::string_view, ClosedWord>& closed_class() {
  static const auto* table = [] {
    auto* t = new std::unordered_map<std::string_view, ClosedWord>;
    auto add = [t](PosTag pos, std::initializer_list<std::string_view> words) {
      for (auto w : words) t->emplace(w, ClosedWord{w, pos});
    };
    auto add_forms = [t](std::string_view lemma, PosTag pos, std::initializer_list<std::string_view> forms) {
      t->emplace(lemma, ClosedWord{lemma, pos});
      for (auto f : forms) t->emplace(f, ClosedWord{lemma, pos});
    };
    add(PosTag::DT, {"the", "a", "an", "this", "that", "these", "those", "your", "my", "our", "its",
                     "their", "his", "her", "each", "every", "some", "any", "another", "no"});
    add(PosTag::IN, {"at", "in", "on", "with", "by", "from", "of", "for", "into", "onto", "to", "near",
                     "under", "over", "after", "before", "around", "inside", "through", "about", "off",
                     "across", "beside", "behind", "until"});
    add(PosTag::PRP, {"i", "you", "it", "we", "he", "she", "they", "me", "him", "them", "us"});
    add(PosTag::RB, {"then", "first", "next", "finally", "please", "now", "later", "also", "carefully",
                     "slowly", "precisely", "firmly", "gently", "afterwards", "already", "again", "not",
                     "just", "there", "here", "too", "really", "very", "secondly", "lastly", "quickly",
                     "thoroughly", "well", "once", "soon", "properly", "away", "up"});
    add(PosTag::CD, {"one", "two", "three", "four", "five"});
    add(PosTag::OTHER, {"eh", "oh", "hmm", "ok", "okay", "and", "or", "but", "so", "yes", "thanks",
                        "will", "can", "should", "must", "would", "could", "may", "might", "shall",
                        "hey", "um", "uh", "if", "when", "while", "because"});
    add_forms("be", PosTag::VB, {"is", "are", "was", "were", "am", "been", "being"});
    add_forms("need", PosTag::VB, {"needs", "needed", "needing"});
    add_forms("wait", PosTag::VB, {"waits", "waited", "waiting"});
    add_forms("keep", PosTag::VB, {"keeps", "kept", "keeping"});
    add_forms("have", PosTag::VB, {"has", "had", "having"});
    add_forms("do", PosTag::VB, {"does", "did", "doing", "done"});
    add_forms("use", PosTag::VB, {"uses", "used", "using"});
    add_forms("make", PosTag::VB, {"makes", "made", "making"});
    add_forms("take", PosTag::VB, {"takes", "took", "taken", "taking"});
    add_forms("put", PosTag::VB, {"puts", "putting"});
    add_forms("go", PosTag::VB, {"goes", "went", "gone", "going"});
    add_forms("get", PosTag::VB, {"gets", "got", "getting"});
    add_forms("let", PosTag::VB, {"lets", "letting"});
    add_forms("want", PosTag::VB, {"wants", "wanted", "wanting"});
    add_forms("see", PosTag::VB, {"sees", "saw", "seen"});
    add_forms("start", PosTag::VB, {"starts", "started", "starting"});
    add_forms("finish", PosTag::VB, {"finishes", "finished", "finishing"});
    add_forms("check", PosTag::VB, {"checks", "checked", "checking"});
    add_forms("forget", PosTag::VB, {"forgets", "forgot", "forgotten"});
    add_forms("miss", PosTag::VB, {"misses", "missed"});
    add_forms("give", PosTag::VB, {"gives", "gave", "given"});
    add_forms("leave", PosTag::VB, {"leaves", "left", "leaving"});
    add_forms("look", PosTag::VB, {"looks", "looked", "looking"});
    add_forms("try", PosTag::VB, {"tries", "tried", "trying"});
    add_forms("hold", PosTag::VB, {"holds", "held", "holding"});
    add_forms("bring", PosTag::VB, {"brings", "brought", "bringing"});
    add_forms("think", PosTag::VB, {"thinks", "thought"});
    add_forms("thank", PosTag::VB, {"thanks"});
    add_forms("lie", PosTag::VB, {"lies", "lying"});
    add_forms("stay", PosTag::VB, {"stays", "stayed"});
    add_forms("move", PosTag::VB, {"moves", "moved", "moving"});
    return t;
  }();
  return *table;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '\'';
}

bool is_known_verb(std::string_view stem, const Lexicon& lexicon) {
  if (stem.empty()) return false;
  if (auto m = lexicon.lookup(stem); m && m->pos == PosTag::VB) return true;
  auto it = closed_class().find(stem);
  return it != closed_class().end() && it->second.pos == PosTag::VB;
}

bool verb_stem_with_suffix(std::string_view word, std::string_view suffix, const Lexicon& lexicon) {
  if (!detail::ends_with(word, suffix) || word.size() <= suffix.size() + 1) return false;
  std::string stem(word.substr(0, word.size() - suffix.size()));
  if (is_known_verb(stem, lexicon)) return true;
  if (suffix == "ing") {
    if (is_known_verb(stem + "e", lexicon)) return true;
    if (stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
        is_known_verb(stem.substr(0, stem.size() - 1), lexicon))
      return true;
  }
  return false;
}

Token tag_word(std::string surface, std::size_t index, const Lexicon& lexicon) {
  Token tok;
  tok.index = index;
  std::string lower = detail::to_lower(surface);
  tok.surface = std::move(surface);
  if (auto m = lexicon.lookup(lower)) {
    tok.lemma = m->lemma;
    tok.pos = m->pos;
    return tok;
  }
  if (auto it = closed_class().find(lower); it != closed_class().end()) {
    tok.lemma = std::string(it->second.lemma);
    tok.pos = it->second.pos;
    return tok;
  }
  tok.lemma = lower;
  if (std::all_of(lower.begin(), lower.end(), [](unsigned char c) { return std::isdigit(c); })) {
    tok.pos = PosTag::CD;
  } else if (verb_stem_with_suffix(lower, "ing", lexicon) || verb_stem_with_suffix(lower, "es", lexicon) ||
             verb_stem_with_suffix(lower, "s", lexicon)) {
    tok.pos = PosTag::VB;
  } else if (detail::ends_with(lower, "ed") && lower.size() > 4) {
    // participle used as a modifier ("the created hole")
    tok.pos = PosTag::JJ;
  } else {
    tok.pos = PosTag::NN;
  }
  return tok;
}

std::optional<std::size_t> noun_after(const std::vector<Token>& tokens, std::size_t from) {
  for (std::size_t k = from; k < tokens.size(); ++k) {
    auto p = tokens[k].pos;
    if (p == PosTag::NN) return k;
    if (p != PosTag::DT && p != PosTag::JJ && p != PosTag::CD) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string_view relation_name(Relation r) {
  static constexpr std::array<std::string_view, 6> kNames = {"root", "dobj", "nmod", "amod", "case", "det"};
  return kNames[static_cast<std::size_t>(r)];
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto piece = detail::trim(text.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool boundary = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (boundary) flush(i + 1);
  }
  flush(text.size());
  return out;
}

std::vector<Token> tokenize_and_tag(std::string_view raw, const Lexicon& lexicon) {
  std::vector<std::string> words;
  // break_before[i]: a comma or similar mark sits between word i-1 and word i
  std::vector<bool> break_before;
  bool pending_break = false;
  std::string current;
  auto push = [&] {
    // strip hyphens/apostrophes that are not word-internal
    std::size_t b = 0, e = current.size();
    while (b < e && (current[b] == '-' || current[b] == '\'')) ++b;
    while (e > b && (current[e - 1] == '-' || current[e - 1] == '\'')) --e;
    if (e > b) {
      words.push_back(current.substr(b, e - b));
      break_before.push_back(pending_break);
      pending_break = false;
    }
    current.clear();
  };
  for (char c : raw) {
    if (is_word_char(c)) {
      current.push_back(c);
    } else {
      push();
      if (c == ',' || c == ';' || c == ':') pending_break = true;
    }
  }
  push();

  std::vector<Token> tokens;
  tokens.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) tokens.push_back(tag_word(std::move(words[i]), i, lexicon));

  // A verb-form keyword right after a determiner or adjective is used as a
  // noun ("the drill is missing"), unless punctuation separates them
  // ("after that, remove the chips").
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].pos == PosTag::VB && !break_before[i] &&
        (tokens[i - 1].pos == PosTag::DT || tokens[i - 1].pos == PosTag::JJ)) {
      tokens[i].pos = PosTag::NN;
    }
  }
  return tokens;
}

std::vector<DependencyEdge> parse_dependencies(const std::vector<Token>& tokens) {
  std::optional<std::size_t> root;
  for (const auto& t : tokens) {
    if (t.pos == PosTag::VB) {
      root = t.index;
      break;
    }
  }
  if (!root) throw NoVerb("sentence has no verb");

  std::vector<DependencyEdge> edges;
  edges.push_back({Relation::Root, kVirtualRoot, *root});

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto p = tokens[i].pos;
    if (p != PosTag::DT && p != PosTag::JJ) continue;
    if (auto noun = noun_after(tokens, i + 1)) {
      edges.push_back({p == PosTag::DT ? Relation::Det : Relation::Amod, *noun, i});
    }
  }

  std::vector<bool> attached(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].pos != PosTag::IN) continue;
    auto noun = noun_after(tokens, i + 1);
    if (!noun) continue;
    edges.push_back({Relation::Case, *noun, i});
    std::size_t head = *root;
    for (std::size_t k = i; k-- > 0;) {
      if (tokens[k].pos == PosTag::NN) {
        head = k;
        break;
      }
    }
    edges.push_back({Relation::Nmod, head, *noun});
    attached[*noun] = true;
  }

  for (std::size_t v = 0; v < tokens.size(); ++v) {
    if (tokens[v].pos != PosTag::VB) continue;
    for (std::size_t k = v + 1; k < tokens.size() && tokens[k].pos != PosTag::VB; ++k) {
      if (tokens[k].pos == PosTag::NN && !attached[k]) {
        edges.push_back({Relation::Dobj, v, k});
        attached[k] = true;
        break;
      }
    }
  }
  return edges;
}

ParsedDocument parse_document(std::string_view text, const Lexicon& lexicon) {
  ParsedDocument doc;
  for (auto& raw : split_sentences(text)) {
    Sentence s;
    s.tokens = tokenize_and_tag(raw, lexicon);
    s.raw = std::move(raw);
    try {
      s.edges = parse_dependencies(s.tokens);
      s.has_verb = true;
    } catch (const NoVerb&) {
      s.has_verb = false;
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

}  // namespace exeplan
