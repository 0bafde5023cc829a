#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "exeplan/error.hpp"
#include "exeplan/features.hpp"
#include "exeplan/metrics.hpp"
#include "support.hpp"

using namespace exeplan;
using namespace exeplan::testing;

namespace {

std::vector<CorpusDoc> small_corpus(std::size_t n, std::uint64_t seed, double omission = 0.5, double distractor = 0.3) {
  CorpusConfig c;
  c.n_docs = n;
  c.seed = seed;
  c.omission_rate = omission;
  c.distractor_rate = distractor;
  return generate_corpus(c, shipped_lexicon());
}

std::vector<DocDetection> gold_detections(const std::vector<CorpusDoc>& corpus) {
  std::vector<DocDetection> out;
  for (const auto& d : corpus) out.push_back({d.mentions, d.transitions});
  return out;
}

struct Naive {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Pairwise recount: a predicted mention is right when some gold mention
// has the same site and label; transitions are matched one by one.
std::map<std::string, Naive> naive_counts(const std::vector<CorpusDoc>& corpus,
                                          const std::vector<DocDetection>& predicted) {
  std::map<std::string, Naive> out;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& g : corpus[d].mentions) {
      bool found = false;
      for (const auto& p : predicted[d].mentions) found = found || (p.site == g.site && p.formula == g.formula);
      auto& c = out[std::string(formula_name(g.formula))];
      (found ? c.tp : c.fn) += 1;
    }
    for (const auto& p : predicted[d].mentions) {
      bool found = false;
      for (const auto& g : corpus[d].mentions) found = found || (p.site == g.site && p.formula == g.formula);
      if (!found) out[std::string(formula_name(p.formula))].fp += 1;
    }
    std::vector<Formula> pool = predicted[d].transitions;
    for (auto g : corpus[d].transitions) {
      auto it = std::find(pool.begin(), pool.end(), g);
      if (it != pool.end()) {
        out[std::string(formula_name(g))].tp += 1;
        pool.erase(it);
      } else {
        out[std::string(formula_name(g))].fn += 1;
      }
    }
    for (auto p : pool) out[std::string(formula_name(p))].fp += 1;
  }
  return out;
}

}  // namespace

TEST_SUITE("corpus_metrics") {

TEST_CASE("generation is deterministic and sized") {
  const auto a = small_corpus(100, 9);
  const auto b = small_corpus(100, 9);
  CHECK(a.size() == 100);
  CHECK(serialize_corpus(a) == serialize_corpus(b));
  CHECK(serialize_corpus(a) != serialize_corpus(small_corpus(100, 10)));
  CHECK(small_corpus(0, 1).empty());
}

TEST_CASE("corpus JSONL round-trips byte for byte") {
  const auto corpus = small_corpus(80, 4);
  const std::string text = serialize_corpus(corpus);
  const auto back = parse_corpus(text);
  CHECK(back == corpus);
  CHECK(serialize_corpus(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "exeplan_corpus_roundtrip.jsonl";
  save_corpus(corpus, path);
  CHECK(load_corpus(path) == corpus);
  std::filesystem::remove(path);
}

TEST_CASE("malformed corpus lines are schema errors") {
  CHECK_THROWS_AS(parse_doc("{}"), SchemaError);
  CHECK_THROWS_AS(parse_doc("[1,2]"), SchemaError);
  auto line = serialize_doc(small_corpus(1, 2).front());
  const auto pos = line.find("\"version\"");
  REQUIRE(pos != std::string::npos);
  line.replace(pos, 9, "\"verzion\"");
  CHECK_THROWS_AS(parse_doc(line), SchemaError);
}

TEST_CASE("generator soundness") {
  const auto corpus = small_corpus(300, 12);
  const auto& lex = shipped_lexicon();
  for (const auto& doc : corpus) {
    CAPTURE(doc.text);
    const auto parsed = parse_document(doc.text, lex);
    const auto sites = candidate_sites(parsed, lex);
    for (const auto& m : doc.mentions) {
      REQUIRE(m.site.sentence < parsed.sentences.size());
      REQUIRE(m.site.token < parsed.sentences[m.site.sentence].tokens.size());
      const auto& tok = parsed.sentences[m.site.sentence].tokens[m.site.token];
      CHECK(lex.is_trigger(tok.lemma));
      CHECK(std::find(sites.begin(), sites.end(), m.site) != sites.end());
    }
    for (const auto& s : doc.distractors) CHECK(std::find(sites.begin(), sites.end(), s) != sites.end());
    CHECK(doc.mentions.size() + doc.distractors.size() == sites.size());

    REQUIRE(doc.transitions.size() + 1 == std::max<std::size_t>(doc.mentions.size(), 1));
    for (std::size_t i = 1; i < doc.mentions.size(); ++i) {
      CHECK(transition_between(doc.mentions[i - 1].formula, doc.mentions[i].formula) == doc.transitions[i - 1]);
    }
    CHECK(std::is_sorted(doc.mentions.begin(), doc.mentions.end(),
                         [](const GoldMention& a, const GoldMention& b) { return a.site < b.site; }));
    // the same sub-goals, possibly reordered, make up the plan
    std::multiset<Formula> said, planned;
    for (const auto& m : doc.mentions) said.insert(m.formula);
    for (const auto& s : doc.steps) planned.insert(s.formula);
    CHECK(said == planned);
    CHECK((doc.task_type == "clean" || doc.task_type == "drill" || doc.task_type == "install"));
  }
}

TEST_CASE("no distractors means every site is a sub-goal") {
  const auto corpus = small_corpus(200, 5, 0.5, 0.0);
  for (const auto& doc : corpus) {
    CHECK(doc.distractors.empty());
    for (const auto& g : gold_sites(doc)) CHECK(g.label != kOtherClass);
  }
}

TEST_CASE("omission mask") {
  const auto none = small_corpus(100, 6, 0.0);
  for (const auto& doc : none) {
    for (const auto& s : doc.steps) {
      CHECK(s.loc_said);
      CHECK(s.tool_said);
      CHECK(s.req_said);
    }
  }
  const auto heavy = small_corpus(100, 6, 0.5);
  std::size_t omitted = 0;
  for (const auto& doc : heavy) {
    for (const auto& s : doc.steps) omitted += !s.loc_said + !s.tool_said + !s.req_said;
  }
  CHECK(omitted > 0);
}

TEST_CASE("detector split sizes") {
  const auto& c = default_corpora();
  const auto all = labeled_sites(c.train, shipped_lexicon());
  for (auto pick : {SeedPick::Diverse, SeedPick::First}) {
    const auto split = split_sites(c.train, c.held_out, shipped_lexicon(), 50, 50, pick);
    CHECK(split.seed.size() == 50);
    CHECK(split.test.size() == 50);
    CHECK(split.seed.size() + split.unlabeled.size() == all.size());
    CHECK(split.unlabeled_labels.size() == split.unlabeled.size());
  }
  const auto first = split_sites(c.train, c.held_out, shipped_lexicon(), 50, 50, SeedPick::First);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(first.seed[i].features == all[i].features);
    CHECK(first.seed[i].label == all[i].label);
  }
  // the default corpus is about 1000 task sentences with around 1100 sites
  CHECK(all.size() > 900);
}

TEST_CASE("precision and recall from counts") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const std::size_t tp = rng() % 20, fp = rng() % 20, fn = rng() % 20;
    const auto p = make_prf(tp, fp, fn);
    CHECK(p.precision_undefined == (tp + fp == 0));
    CHECK(p.recall_undefined == (tp + fn == 0));
    CHECK(p.precision == (tp + fp ? double(tp) / double(tp + fp) : 0.0));
    CHECK(p.recall == (tp + fn ? double(tp) / double(tp + fn) : 0.0));
    CHECK(p.precision >= 0.0);
    CHECK(p.precision <= 1.0);
  }
}

TEST_CASE("a perfect detector scores 1 everywhere") {
  const auto corpus = small_corpus(150, 3);
  const auto r = score_detections(corpus, gold_detections(corpus));
  CHECK(r.average_precision == 1.0);
  CHECK(r.average_recall == 1.0);
  for (const auto& m : r.per_label) {
    if (m.prf.tp + m.prf.fn == 0) continue;
    CHECK(m.prf.precision == 1.0);
    CHECK(m.prf.recall == 1.0);
  }
}

TEST_CASE("an all-Other detector has zero recall and flagged precision") {
  const auto corpus = small_corpus(150, 3);
  const auto r = score_detections(corpus, std::vector<DocDetection>(corpus.size()));
  CHECK(r.average_recall == 0.0);
  CHECK(r.average_precision == 0.0);
  for (const auto& name : {"CleanSpot", "DrillHole", "InstallScrew"}) {
    const auto* m = r.find(name);
    REQUIRE(m != nullptr);
    CHECK(m->prf.recall == 0.0);
    CHECK(m->prf.precision == 0.0);
    CHECK(m->prf.precision_undefined);
    CHECK_FALSE(m->prf.recall_undefined);
  }
  CHECK_THROWS_AS(score_detections(corpus, {}), std::invalid_argument);
}

TEST_CASE("detection counts match a naive recount") {
  const auto corpus = small_corpus(200, 8);
  std::mt19937_64 rng(99);
  auto predicted = gold_detections(corpus);
  for (auto& p : predicted) {
    for (auto& m : p.mentions) {
      if (rng() % 5 == 0) m.formula = kBasicFormulas[rng() % 3];
      if (rng() % 7 == 0) m.site.token += 1;
    }
    if (!p.mentions.empty() && rng() % 6 == 0) p.mentions.pop_back();
    if (rng() % 5 == 0) p.transitions.push_back(kAllFormulas[3 + rng() % 6]);
    if (!p.transitions.empty() && rng() % 5 == 0) p.transitions.erase(p.transitions.begin());
  }
  const auto r = score_detections(corpus, predicted);
  const auto naive = naive_counts(corpus, predicted);
  double sum_p = 0.0, sum_r = 0.0;
  std::size_t labels = 0;
  for (const auto& [name, c] : naive) {
    const auto* m = r.find(name);
    REQUIRE(m != nullptr);
    CHECK(m->prf.tp == c.tp);
    CHECK(m->prf.fp == c.fp);
    CHECK(m->prf.fn == c.fn);
    if (c.tp + c.fp + c.fn == 0) continue;
    sum_p += c.tp + c.fp ? double(c.tp) / double(c.tp + c.fp) : 0.0;
    sum_r += c.tp + c.fn ? double(c.tp) / double(c.tp + c.fn) : 0.0;
    ++labels;
  }
  CHECK(r.average_precision == doctest::Approx(sum_p / double(labels)));
  CHECK(r.average_recall == doctest::Approx(sum_r / double(labels)));
}

TEST_CASE("zero omissions: MES mapping is exact in both modes") {
  const auto corpus = small_corpus(100, 21, 0.0);
  for (auto mode : {CompileMode::Literal, CompileMode::Exeplan}) {
    PlanEvalOptions o;
    o.mode = mode;
    const auto r = eval_plans(shipped_models(), corpus, o);
    REQUIRE(r.mes_mapping.has_value());
    CHECK(r.mes_mapping->recall == 1.0);
    CHECK(r.mes_mapping->precision == 1.0);
  }
}

TEST_CASE("mode dominance on many corpora") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const auto corpus = small_corpus(60, seed, seed % 2 ? 0.5 : 0.2);
    PlanEvalOptions lit;
    lit.mode = CompileMode::Literal;
    const auto l = eval_plans(shipped_models(), corpus, lit);
    const auto e = eval_plans(shipped_models(), corpus, {});
    CAPTURE(seed);
    CHECK(*e.executable_proportion >= *l.executable_proportion);
    CHECK(*l.executable_proportion <= 1.0);
    CHECK(e.documents == corpus.size());
  }
}

TEST_CASE("shipped models on the held-out corpus") {
  const auto& held = default_corpora().held_out;
  const auto dis = eval_disambiguation(shipped_models().detector, shipped_lexicon(), held);
  CHECK(dis.average_precision >= 0.95);
  CHECK(dis.average_recall >= 0.95);

  PlanEvalOptions lit;
  lit.mode = CompileMode::Literal;
  const auto l = eval_plans(shipped_models(), held, lit);
  const auto e = eval_plans(shipped_models(), held, {});
  CHECK(e.average_precision > l.average_precision);
  CHECK(e.average_recall > l.average_recall);
  CHECK(*l.executable_proportion <= 0.20);
  CHECK(*e.executable_proportion >= 0.90);
}

TEST_CASE("report JSON carries denominators") {
  const auto corpus = small_corpus(20, 3);
  const auto j = report_json(score_detections(corpus, gold_detections(corpus)));
  CHECK(j.find("\"tp\"") != std::string::npos);
  CHECK(j.find("\"precision_undefined\"") != std::string::npos);
  CHECK(j.find("\"documents\": 20") != std::string::npos);
}

}  // TEST_SUITE
