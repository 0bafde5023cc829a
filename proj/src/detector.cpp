#include "exeplan/detector.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "exeplan/error.hpp"

namespace exeplan {

namespace {

using json = nlohmann::json;

constexpr int kModelVersion = 1;

std::size_t max_column(const SparseVector& x) { return x.empty() ? 0 : x.back().first + 1; }

// Shared loop body; `encode` turns the i-th unlabeled item into a vector.
template <typename Encode>
SelfTrainResult run_self_training(const TrainingSet& seed, Encode encode, std::size_t dimension,
                                  const SelfTrainOptions& options, const std::vector<std::size_t>& order,
                                  const std::function<std::size_t()>& current_dim) {
  if (seed.samples.empty()) throw std::invalid_argument("self-training needs a non-empty seed set");
  OneVsRestTrainer trainer(seed.classes, options.svm);
  for (const auto& s : seed.samples) trainer.add(s.x, s.label);
  trainer.fit();

  SelfTrainResult result;
  result.training = seed;
  for (std::size_t k : order) {
    SparseVector x = encode(k);
    const std::size_t dim = std::max(current_dim(), dimension);
    const Classifier h = trainer.snapshot(dim).classifier;
    const std::size_t label = classify(h, x).label;
    result.training.samples.push_back({x, label, Provenance::SelfLabeled});
    trainer.add(std::move(x), label);
    trainer.fit();
  }
  result.classifier = trainer.snapshot(std::max(current_dim(), dimension)).classifier;
  return result;
}

void score_precision(SelfTrainResult& result, const TrainingSet& test) {
  result.test_total = test.samples.size();
  result.test_correct = 0;
  for (const auto& s : test.samples) {
    if (classify(result.classifier, s.x).label == s.label) ++result.test_correct;
  }
  result.precision = result.test_total == 0
                         ? 0.0
                         : static_cast<double>(result.test_correct) / static_cast<double>(result.test_total);
}

std::vector<std::size_t> confidence_order(const Classifier& h0, const std::vector<SparseVector>& xs) {
  std::vector<double> margin(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto scores = classify(h0, xs[i]).scores;
    margin[i] = *std::max_element(scores.begin(), scores.end());
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return margin[a] > margin[b]; });
  return order;
}

}  // namespace

SelfTrainResult self_train(const TrainingSet& seed, const std::vector<SparseVector>& unlabeled,
                           const TrainingSet& test, const SelfTrainOptions& options) {
  std::size_t dimension = 0;
  for (const auto& s : seed.samples) dimension = std::max(dimension, max_column(s.x));
  for (const auto& x : unlabeled) dimension = std::max(dimension, max_column(x));

  std::vector<std::size_t> order(unlabeled.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.order == SelfTrainOrder::Confidence && !unlabeled.empty()) {
    order = confidence_order(train_svm(seed, options.svm).classifier, unlabeled);
  }
  auto result = run_self_training(
      seed, [&](std::size_t k) { return unlabeled[k]; }, dimension, options, order, [] { return std::size_t{0}; });
  score_precision(result, test);
  return result;
}

SelfTrainResult self_train(const std::vector<LabeledSite>& seed, const std::vector<FeatureVector>& unlabeled,
                           const std::vector<LabeledSite>& test, const SelfTrainOptions& options) {
  FeatureIndex index;
  TrainingSet seed_set{kDetectorClasses, {}};
  for (const auto& s : seed) seed_set.samples.push_back({vectorize(s.features, index, Growth::Grow), s.label});

  std::vector<std::size_t> order(unlabeled.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.order == SelfTrainOrder::Confidence && !unlabeled.empty()) {
    const Classifier h0 = train_svm(seed_set, options.svm).classifier;
    std::vector<SparseVector> frozen;
    frozen.reserve(unlabeled.size());
    for (const auto& fv : unlabeled) frozen.push_back(vectorize(fv, index));
    order = confidence_order(h0, frozen);
  }

  auto result = run_self_training(
      seed_set, [&](std::size_t k) { return vectorize(unlabeled[k], index, Growth::Grow); }, index.dimension(),
      options, order, [&] { return index.dimension(); });
  result.classifier.index = index;

  TrainingSet test_set{kDetectorClasses, {}};
  for (const auto& s : test) test_set.samples.push_back({vectorize(s.features, index), s.label});
  score_precision(result, test_set);
  return result;
}

Detection detect(const ParsedDocument& doc, const Classifier& h, const Lexicon& lexicon) {
  Detection out;
  const auto sites = candidate_sites(doc, lexicon);
  for (const auto& site : sites) {
    const auto x = vectorize(extract_features(doc, site, lexicon, sites), h.index);
    const auto c = classify(h, x);
    const auto& name = h.classes.at(c.label);
    auto formula = formula_from_name(name);
    if (!formula || !is_basic(*formula)) continue;
    out.mentions.push_back({site, *formula, c.scores[c.label]});
  }
  for (std::size_t i = 1; i < out.mentions.size(); ++i) {
    if (auto t = transition_between(out.mentions[i - 1].label, out.mentions[i].label)) out.transitions.push_back(*t);
  }
  return out;
}

std::string serialize_classifier(const Classifier& h) {
  json doc;
  doc["version"] = kModelVersion;
  doc["classes"] = h.classes;
  doc["C"] = h.c;
  json columns = json::array();
  for (const auto& [field, value] : h.index.columns()) columns.push_back({field, value});
  doc["feature_index"] = std::move(columns);
  json per_class = json::array();
  for (std::size_t c = 0; c < h.per_class.size(); ++c) {
    json weights = json::array();
    const auto& w = h.per_class[c].weights;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0.0) weights.push_back({j, w[j]});
    }
    per_class.push_back({{"class", h.classes[c]}, {"bias", h.per_class[c].bias}, {"weights", std::move(weights)}});
  }
  doc["per_class"] = std::move(per_class);
  doc["dimension"] = h.dimension();
  return doc.dump(1) + "\n";
}

Classifier parse_classifier(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kModelVersion) throw SchemaError("model: unsupported version");
    Classifier h;
    h.classes = doc.at("classes").get<std::vector<std::string>>();
    h.c = doc.at("C").get<double>();
    for (const auto& col : doc.at("feature_index")) {
      h.index.add(col.at(0).get<std::string>(), col.at(1).get<std::string>());
    }
    const auto dimension = doc.at("dimension").get<std::size_t>();
    const auto& per_class = doc.at("per_class");
    if (per_class.size() != h.classes.size()) throw SchemaError("model: per_class size differs from classes");
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      const auto& entry = per_class[c];
      if (entry.at("class").get<std::string>() != h.classes[c]) throw SchemaError("model: per_class order mismatch");
      ClassWeights cw;
      cw.bias = entry.at("bias").get<double>();
      cw.weights.assign(dimension, 0.0);
      for (const auto& pair : entry.at("weights")) {
        const auto j = pair.at(0).get<std::size_t>();
        if (j >= dimension) throw SchemaError("model: weight column out of range");
        cw.weights[j] = pair.at(1).get<double>();
      }
      h.per_class.push_back(std::move(cw));
    }
    return h;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
}

void save_classifier(const Classifier& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_classifier(h);
}

Classifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("model: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_classifier(buf.str());
}

}  // namespace exeplan
