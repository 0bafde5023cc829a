#include "exeplan/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "exeplan/frontend.hpp"

namespace exeplan {

Prf make_prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf p{tp, fp, fn};
  if (tp + fp == 0) p.precision_undefined = true;
  else p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn == 0) p.recall_undefined = true;
  else p.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return p;
}

const LabelMetric* MetricReport::find(std::string_view label) const {
  for (const auto& m : per_label) {
    if (m.label == label) return &m;
  }
  return nullptr;
}

namespace {

using json = nlohmann::json;

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

void finish(MetricReport& report, const std::vector<std::string>& order, const std::map<std::string, Counts>& counts) {
  double p = 0.0, r = 0.0;
  std::size_t n = 0;
  for (const auto& label : order) {
    auto it = counts.find(label);
    if (it == counts.end()) continue;
    const auto& c = it->second;
    if (c.tp + c.fp + c.fn == 0) continue;
    report.per_label.push_back({label, make_prf(c.tp, c.fp, c.fn)});
    p += report.per_label.back().prf.precision;
    r += report.per_label.back().prf.recall;
    ++n;
  }
  if (n > 0) {
    report.average_precision = p / static_cast<double>(n);
    report.average_recall = r / static_cast<double>(n);
  }
}

json prf_json(const Prf& p) {
  return {{"tp", p.tp},
          {"fp", p.fp},
          {"fn", p.fn},
          {"precision", p.precision},
          {"recall", p.recall},
          {"precision_undefined", p.precision_undefined},
          {"recall_undefined", p.recall_undefined}};
}

using MesItem = std::tuple<Formula, std::string, std::string>;

std::multiset<MesItem> instructed_items(const CorpusDoc& doc) {
  std::multiset<MesItem> out;
  for (const auto& s : doc.steps) {
    if (s.loc_said) out.insert({s.formula, "loc", s.loc});
    if (s.tool_said) out.insert({s.formula, "tool", s.tool});
    if (s.req_said) {
      for (const auto& r : s.req) out.insert({s.formula, "req", r});
    }
  }
  return out;
}

std::multiset<MesItem> extracted_items(const std::vector<PlanStep>& steps) {
  std::multiset<MesItem> out;
  for (const auto& s : steps) {
    if (s.mes.loc) out.insert({s.formula, "loc", *s.mes.loc});
    if (s.mes.tool) out.insert({s.formula, "tool", *s.mes.tool});
    if (s.mes.req) {
      for (const auto& r : *s.mes.req) out.insert({s.formula, "req", r});
    }
  }
  return out;
}

template <typename T>
std::size_t overlap(const std::multiset<T>& a, const std::multiset<T>& b) {
  std::vector<T> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.size();
}

}  // namespace

std::string report_json(const MetricReport& report) {
  json j;
  j["per_label"] = json::object();
  for (const auto& m : report.per_label) j["per_label"][m.label] = prf_json(m.prf);
  j["average_precision"] = report.average_precision;
  j["average_recall"] = report.average_recall;
  j["documents"] = report.documents;
  if (report.mes_mapping) j["mes_mapping"] = prf_json(*report.mes_mapping);
  if (report.executable_proportion) {
    j["executable"] = report.executable;
    j["executable_proportion"] = *report.executable_proportion;
  }
  return j.dump(2) + "\n";
}

MetricReport score_detections(const std::vector<CorpusDoc>& corpus, const std::vector<DocDetection>& predicted) {
  if (predicted.size() != corpus.size()) throw std::invalid_argument("one detection per document expected");
  std::map<std::string, Counts> counts;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus[d];
    const auto& pred = predicted[d];
    std::set<std::pair<Site, Formula>> gold_m, pred_m;
    for (const auto& m : doc.mentions) gold_m.insert({m.site, m.formula});
    for (const auto& m : pred.mentions) pred_m.insert({m.site, m.formula});
    for (const auto& g : gold_m) {
      auto& c = counts[std::string(formula_name(g.second))];
      if (pred_m.count(g)) ++c.tp;
      else ++c.fn;
    }
    for (const auto& p : pred_m) {
      if (!gold_m.count(p)) ++counts[std::string(formula_name(p.second))].fp;
    }
    std::multiset<Formula> gold_t(doc.transitions.begin(), doc.transitions.end());
    std::multiset<Formula> pred_t(pred.transitions.begin(), pred.transitions.end());
    for (auto f : kAllFormulas) {
      if (is_basic(f)) continue;
      const std::size_t g = gold_t.count(f), p = pred_t.count(f), both = std::min(g, p);
      auto& c = counts[std::string(formula_name(f))];
      c.tp += both;
      c.fn += g - both;
      c.fp += p - both;
    }
  }
  MetricReport report;
  report.documents = corpus.size();
  std::vector<std::string> order;
  for (auto f : kAllFormulas) order.emplace_back(formula_name(f));
  finish(report, order, counts);
  return report;
}

MetricReport eval_disambiguation(const Classifier& detector, const Lexicon& lexicon,
                                 const std::vector<CorpusDoc>& corpus) {
  std::vector<DocDetection> predicted;
  predicted.reserve(corpus.size());
  for (const auto& doc : corpus) {
    const Detection det = detect(parse_document(doc.text, lexicon), detector, lexicon);
    DocDetection out;
    for (const auto& m : det.mentions) out.mentions.push_back({m.site, m.label});
    out.transitions = det.transitions;
    predicted.push_back(std::move(out));
  }
  return score_detections(corpus, predicted);
}

MetricReport eval_plans(const Models& models, const std::vector<CorpusDoc>& corpus, const PlanEvalOptions& options) {
  std::map<std::string, Counts> counts;
  std::size_t mes_tp = 0, mes_fp = 0, mes_fn = 0;
  MetricReport report;
  report.documents = corpus.size();
  const CompileOptions compile_options{options.threshold, options.mode};
  for (const auto& doc : corpus) {
    const CompileResult result =
        compile(doc.text, models, options.world ? *options.world : doc.world, compile_options);
    if (result.ok()) ++report.executable;

    if (result.task_type && *result.task_type == doc.task_type) {
      ++counts[doc.task_type].tp;
    } else {
      ++counts[doc.task_type].fn;
      if (result.task_type) ++counts[*result.task_type].fp;
    }

    const auto gold = instructed_items(doc);
    const auto got = extracted_items(result.extracted);
    const std::size_t both = overlap(gold, got);
    mes_tp += both;
    mes_fn += gold.size() - both;
    mes_fp += got.size() - both;
  }
  finish(report, models.planner.task_types, counts);
  report.mes_mapping = make_prf(mes_tp, mes_fp, mes_fn);
  report.executable_proportion =
      corpus.empty() ? 0.0 : static_cast<double>(report.executable) / static_cast<double>(corpus.size());
  return report;
}

}  // namespace exeplan
