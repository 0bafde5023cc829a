// Command-line front end: corpus generation, training, compilation,
// evaluation and an interactive session.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exeplan/assets.hpp"
#include "exeplan/corpus.hpp"
#include "exeplan/error.hpp"
#include "exeplan/metrics.hpp"
#include "exeplan/pipeline.hpp"
#include "exeplan/session.hpp"
#include "exeplan/training.hpp"

namespace {

using namespace exeplan;

constexpr int kOk = 0;
constexpr int kCompileFailure = 1;
constexpr int kUsage = 2;

struct Common {
  std::string lexicon = default_lexicon_path().string();
  std::string model = default_detector_path().string();
  std::string planner = default_planner_path().string();
  std::string kb = default_kb_path().string();
  std::string world = default_world_path().string();
  double threshold = kDefaultThreshold;
  std::string mode = "exeplan";
  std::uint64_t seed = 1;
  bool json = false;
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_stdin() {
  std::stringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

Models load(const Common& c) { return load_models({c.lexicon, c.model, c.planner, c.kb}); }

CompileMode parse_mode(const std::string& name) {
  auto m = mode_from_name(name);
  if (!m) throw CLI::ValidationError("--mode", "expected literal or exeplan");
  return *m;
}

std::vector<CorpusDoc> corpus_or_generate(const std::string& path, const CorpusConfig& cfg, const Lexicon& lexicon) {
  if (!path.empty()) return load_corpus(path);
  return generate_corpus(cfg, lexicon);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile natural-language task instructions into executable plans"};
  app.require_subcommand(1);
  Common common;

  auto add_models = [&common](CLI::App* sub) {
    sub->add_option("--lexicon", common.lexicon, "Lexicon TSV");
    sub->add_option("--model", common.model, "Detector model JSON");
    sub->add_option("--planner", common.planner, "Planner (MLN weights) JSON");
    sub->add_option("--kb", common.kb, "MES knowledge base JSON");
  };

  // gen-corpus
  CorpusConfig corpus_cfg;
  std::string corpus_out;
  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic instruction corpus as JSON Lines");
  gen->add_option("--n-docs", corpus_cfg.n_docs, "Number of documents");
  gen->add_option("--seed", corpus_cfg.seed, "Generator seed");
  gen->add_option("--distractor-rate", corpus_cfg.distractor_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--omission-rate", corpus_cfg.omission_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--reorder-rate", corpus_cfg.reorder_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--lexicon", common.lexicon, "Lexicon TSV");
  gen->add_option("--out", corpus_out, "Output file (default: standard output)");

  // train-detector
  std::string train_corpus, held_out_corpus, model_out;
  std::size_t n_seed = 50, n_test = 50;
  SelfTrainOptions st_options;
  std::string order = "corpus";
  std::string seed_pick = "diverse";
  auto* tdet = app.add_subcommand("train-detector", "Self-train the sub-goal detector");
  tdet->add_option("--corpus", train_corpus, "Training corpus JSONL (default: generated)");
  tdet->add_option("--held-out", held_out_corpus, "Held-out corpus JSONL (default: generated)");
  tdet->add_option("--seed", corpus_cfg.seed, "Seed of the generated corpora");
  tdet->add_option("--seed-size", n_seed, "Number of seed-labeled sites");
  tdet->add_option("--test-size", n_test, "Number of held-out test sites");
  tdet->add_option("--c", st_options.svm.c, "SVM trade-off C")->check(CLI::PositiveNumber);
  tdet->add_option("--order", order, "Self-labeling order")->check(CLI::IsMember({"corpus", "confidence"}));
  tdet->add_option("--seed-pick", seed_pick, "How the seed sites are chosen")
      ->check(CLI::IsMember({"diverse", "first"}));
  tdet->add_option("--lexicon", common.lexicon, "Lexicon TSV");
  tdet->add_option("--out", model_out, "Output model file (default: standard output)");

  // train-planner
  SsvmOptions ssvm_options;
  ssvm_options.c = kPlannerC;
  std::string planner_out;
  auto* tplan = app.add_subcommand("train-planner", "Learn MLN weights with the cutting-plane structural SVM");
  tplan->add_option("--corpus", train_corpus, "Training corpus JSONL (default: generated)");
  tplan->add_option("--seed", corpus_cfg.seed, "Seed of the generated corpus");
  tplan->add_option("--c", ssvm_options.c, "Trade-off C")->check(CLI::PositiveNumber);
  tplan->add_option("--epsilon", ssvm_options.epsilon, "Violation tolerance")->check(CLI::PositiveNumber);
  tplan->add_option("--lexicon", common.lexicon, "Lexicon TSV");
  tplan->add_option("--out", planner_out, "Output model file (default: standard output)");

  // compile
  std::optional<std::string> text;
  auto* comp = app.add_subcommand("compile", "Compile one instruction into a plan document");
  comp->add_option("--text", text, "Instruction text (default: standard input)");
  add_models(comp);
  comp->add_option("--world", common.world, "World state JSON");
  comp->add_option("--threshold", common.threshold, "Executability threshold")->check(CLI::NonNegativeNumber);
  comp->add_option("--mode", common.mode, "literal or exeplan")->check(CLI::IsMember({"literal", "exeplan"}));
  comp->add_flag("--json", common.json, "Report failures as JSON on standard output");

  // eval
  std::string eval_corpus, eval_task = "all";
  auto* ev = app.add_subcommand("eval", "Score detection and planning on a corpus");
  ev->add_option("--corpus", eval_corpus, "Corpus JSONL (default: generated held-out corpus)");
  ev->add_option("--seed", corpus_cfg.seed, "Seed of the generated corpus");
  std::size_t eval_docs = 200;
  ev->add_option("--n-docs", eval_docs, "Size of the generated corpus");
  ev->add_option("--omission-rate", corpus_cfg.omission_rate)->check(CLI::Range(0.0, 1.0));
  ev->add_option("--task", eval_task, "disambiguation, plans or all")
      ->check(CLI::IsMember({"disambiguation", "plans", "all"}));
  add_models(ev);
  ev->add_option("--world", common.world, "Compile every document against this world instead of its own");
  ev->add_option("--threshold", common.threshold, "Executability threshold")->check(CLI::NonNegativeNumber);
  ev->add_option("--mode", common.mode, "literal or exeplan")->check(CLI::IsMember({"literal", "exeplan"}));
  bool world_given = false;

  // repl
  auto* repl = app.add_subcommand("repl", "Instruct turn by turn against a live world state");
  add_models(repl);
  repl->add_option("--world", common.world, "Initial world state JSON");
  repl->add_option("--threshold", common.threshold, "Executability threshold")->check(CLI::NonNegativeNumber);
  repl->add_option("--mode", common.mode, "literal or exeplan")->check(CLI::IsMember({"literal", "exeplan"}));
  repl->add_flag("--json", common.json, "Print plans as JSON documents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  world_given = ev->count("--world") > 0;

  try {
    if (*gen) {
      const Lexicon lexicon = Lexicon::load(common.lexicon);
      write_output(corpus_out, serialize_corpus(generate_corpus(corpus_cfg, lexicon)));
      return kOk;
    }
    if (*tdet) {
      const Lexicon lexicon = Lexicon::load(common.lexicon);
      const auto train = corpus_or_generate(train_corpus, corpus_cfg, lexicon);
      const auto held = corpus_or_generate(held_out_corpus, held_out_config(corpus_cfg), lexicon);
      st_options.order = order == "confidence" ? SelfTrainOrder::Confidence : SelfTrainOrder::Corpus;
      const auto pick = seed_pick == "first" ? SeedPick::First : SeedPick::Diverse;
      const auto trained = train_detector(train, held, lexicon, n_seed, n_test, st_options, pick);
      std::cerr << "seed " << trained.split.seed.size() << "  unlabeled " << trained.split.unlabeled.size()
                << "  |T| " << trained.result.training.samples.size() << "  test precision "
                << trained.result.precision << " (" << trained.result.test_correct << "/"
                << trained.result.test_total << ")\n";
      write_output(model_out, serialize_classifier(trained.result.classifier));
      return kOk;
    }
    if (*tplan) {
      const Lexicon lexicon = Lexicon::load(common.lexicon);
      const auto train = corpus_or_generate(train_corpus, corpus_cfg, lexicon);
      const MlnModel defaults;
      const auto trained = train_planner(train, defaults.task_types, ssvm_options);
      std::cerr << "iterations " << trained.iterations << "  xi " << trained.xi << "  final violation "
                << trained.final_violation << '\n';
      write_output(planner_out, serialize_model(trained.model));
      return kOk;
    }
    if (*comp) {
      const Models models = load(common);
      const WorldState world = load_world(common.world);
      const std::string instruction = text ? *text : read_stdin();
      const auto result = compile(instruction, models, world, {common.threshold, parse_mode(common.mode)});
      if (result.ok()) {
        std::cout << export_plan(result.plan());
        return kOk;
      }
      const auto& f = result.failure();
      if (common.json) {
        nlohmann::json j;
        j["stage"] = std::string(stage_name(f.stage));
        j["details"] = f.details;
        j["message"] = f.message;
        std::cout << j.dump(2) << '\n';
      } else {
        std::cerr << render_failure(f);
      }
      return kCompileFailure;
    }
    if (*ev) {
      const Models models = load(common);
      const auto corpus = corpus_or_generate(eval_corpus, held_out_config(corpus_cfg, eval_docs), models.lexicon);
      nlohmann::json out;
      out["mode"] = common.mode;
      if (eval_task != "plans") {
        out["disambiguation"] = nlohmann::json::parse(report_json(eval_disambiguation(models.detector, models.lexicon, corpus)));
      }
      if (eval_task != "disambiguation") {
        PlanEvalOptions options;
        options.mode = parse_mode(common.mode);
        options.threshold = common.threshold;
        if (world_given) options.world = load_world(common.world);
        out["plans"] = nlohmann::json::parse(report_json(eval_plans(models, corpus, options)));
      }
      std::cout << out.dump(2) << '\n';
      return kOk;
    }
    if (*repl) {
      SessionState state;
      state.models = std::make_shared<const Models>(load(common));
      state.world = load_world(common.world);
      state.options = {common.threshold, parse_mode(common.mode)};
      state.json = common.json;
      const bool interactive = isatty(STDIN_FILENO);
      std::string line;
      while (true) {
        if (interactive) std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        std::cout << repl_turn(state, line) << std::flush;
      }
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const exeplan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
