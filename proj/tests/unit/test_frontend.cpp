#include <doctest.h>

#include <algorithm>

#include "exeplan/error.hpp"
#include "exeplan/frontend.hpp"
#include "support.hpp"

using namespace exeplan;

namespace {

std::vector<std::string> relation_multiset(const std::vector<DependencyEdge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges) out.emplace_back(relation_name(e.relation));
  std::sort(out.begin(), out.end());
  return out;
}

bool has_edge(const Sentence& s, Relation r, std::string_view head, std::string_view dep) {
  return std::any_of(s.edges.begin(), s.edges.end(), [&](const DependencyEdge& e) {
    const bool head_ok = head == "ROOT" ? e.head == kVirtualRoot
                                        : e.head != kVirtualRoot && s.tokens[e.head].lemma == head;
    return e.relation == r && head_ok && s.tokens[e.dependent].lemma == dep;
  });
}

}  // namespace

TEST_SUITE("frontend") {

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("Drill a hole. Then clean the dust with a brush.") ==
        std::vector<std::string>{"Drill a hole.", "Then clean the dust with a brush."});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("install a screw") == std::vector<std::string>{"install a screw"});
  CHECK(split_sentences("Stop! Is it done? yes") == std::vector<std::string>{"Stop!", "Is it done?", "yes"});
  // a dot inside a token is not a boundary
  CHECK(split_sentences("use tool v1.2 now.").size() == 1);
}

TEST_CASE("tagging of the drill and clean example") {
  const auto& lex = testing::shipped_lexicon();
  auto toks = tokenize_and_tag("Drill a hole.", lex);
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].lemma == "drill");
  CHECK(toks[0].pos == PosTag::VB);
  CHECK(toks[1].pos == PosTag::DT);
  CHECK(toks[2].lemma == "hole");
  CHECK(toks[2].pos == PosTag::NN);
  CHECK(tokenize_and_tag("drilling", lex)[0].lemma == "drill");
  auto unknown = tokenize_and_tag("zorp", lex);
  CHECK(unknown[0].lemma == "zorp");
  CHECK(unknown[0].pos == PosTag::NN);
}

TEST_CASE("every lexicon variant maps to its head lemma") {
  const auto& lex = testing::shipped_lexicon();
  for (const auto& entry : lex.entries()) {
    for (const auto& v : entry.variants) {
      auto toks = tokenize_and_tag(v, lex);
      REQUIRE(toks.size() == 1);
      CHECK_MESSAGE(toks[0].lemma == entry.lemma, v);
    }
    CHECK(tokenize_and_tag(entry.lemma, lex)[0].lemma == entry.lemma);
  }
}

TEST_CASE("a keyword after a determiner reads as a noun unless punctuation intervenes") {
  const auto& lex = testing::shipped_lexicon();
  auto noun = tokenize_and_tag("Eh, the drill is missing.", lex);
  CHECK(noun[2].lemma == "drill");
  CHECK(noun[2].pos == PosTag::NN);
  auto verb = tokenize_and_tag("After that, remove the chips.", lex);
  CHECK(verb[2].lemma == "remove");
  CHECK(verb[2].pos == PosTag::VB);
}

TEST_CASE("golden parse of the two-sentence drill and clean example") {
  const auto& lex = testing::shipped_lexicon();
  auto doc = parse_document("Drill a hole. Then clean the dust with a brush.", lex);
  REQUIRE(doc.sentences.size() == 2);
  const auto& first = doc.sentences[0];
  const auto& second = doc.sentences[1];

  CHECK(relation_multiset(first.edges) == std::vector<std::string>{"det", "dobj", "root"});
  CHECK(relation_multiset(second.edges) ==
        std::vector<std::string>{"case", "det", "det", "dobj", "nmod", "root"});

  CHECK(first.edges.size() == 3);
  CHECK(has_edge(first, Relation::Root, "ROOT", "drill"));
  CHECK(has_edge(first, Relation::Dobj, "drill", "hole"));
  CHECK(has_edge(first, Relation::Det, "hole", "a"));

  CHECK(has_edge(second, Relation::Root, "ROOT", "clean"));
  CHECK(has_edge(second, Relation::Dobj, "clean", "dust"));
  CHECK(has_edge(second, Relation::Case, "brush", "with"));
  CHECK(has_edge(second, Relation::Det, "dust", "the"));
  CHECK(has_edge(second, Relation::Det, "brush", "a"));
  CHECK(has_edge(second, Relation::Nmod, "dust", "brush"));
}

TEST_CASE("nmod falls back to the root verb without a preceding noun") {
  const auto& lex = testing::shipped_lexicon();
  auto doc = parse_document("At the center drill a hole.", lex);
  const auto& s = doc.sentences.at(0);
  CHECK(has_edge(s, Relation::Nmod, "drill", "center"));
  CHECK(has_edge(s, Relation::Dobj, "drill", "hole"));
}

TEST_CASE("a sentence without a verb has no edges") {
  const auto& lex = testing::shipped_lexicon();
  CHECK_THROWS_AS(parse_dependencies(tokenize_and_tag("the brush", lex)), NoVerb);
  auto doc = parse_document("The board is ready now. Drill a hole.", lex);
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[1].has_verb);
  CHECK(doc.sentences[1].edges.size() == 3);
}

TEST_CASE("parsing the re-joined sentences is idempotent") {
  const auto& lex = testing::shipped_lexicon();
  for (const auto& doc : testing::default_corpora().held_out) {
    auto parsed = parse_document(doc.text, lex);
    std::string joined;
    for (const auto& s : parsed.sentences) joined += (joined.empty() ? "" : " ") + s.raw;
    CHECK(parse_document(joined, lex) == parsed);
  }
}

}  // TEST_SUITE
