#include "exeplan/features.hpp"

#include <algorithm>
#include <set>

#include "text_util.hpp"

namespace exeplan {

namespace {

std::string lemma_or_none(const Sentence& s, std::ptrdiff_t i) {
  if (i < 0 || static_cast<std::size_t>(i) >= s.tokens.size()) return std::string(kNone);
  return s.tokens[static_cast<std::size_t>(i)].lemma;
}

std::string edge_pattern(const Sentence& s, const DependencyEdge& e) {
  std::string out(relation_name(e.relation));
  out += '(';
  if (e.head != kVirtualRoot) {
    out += pos_name(s.tokens[e.head].pos);
    out += '+';
  }
  out += pos_name(s.tokens[e.dependent].pos);
  out += ')';
  return out;
}

void push_unique(std::vector<std::string>& v, std::string value) {
  if (std::find(v.begin(), v.end(), value) == v.end()) v.push_back(std::move(value));
}

}  // namespace

void for_each_feature(const FeatureVector& fv,
                      const std::function<void(std::string_view, std::string_view)>& fn) {
  auto scalar = [&](std::string_view field, const std::string& v) {
    if (!v.empty()) fn(field, v);
  };
  auto bag = [&](std::string_view field, const std::vector<std::string>& vs) {
    for (const auto& v : vs) {
      if (!v.empty()) fn(field, v);
    }
  };
  scalar("w", fv.w);
  scalar("pos", fv.pos);
  bag("wd", fv.wd);
  bag("posd", fv.posd);
  scalar("KW", fv.kw);
  scalar("preSubg", fv.pre_subg);
  scalar("nextSubg", fv.next_subg);
  scalar("preN", fv.pre_n);
  scalar("nextN", fv.next_n);
  scalar("preW", fv.pre_w);
  scalar("nextW", fv.next_w);
  bag("KWD", fv.kwd);
  bag("posD", fv.pos_kwd);
  bag("NND", fv.nnd);
  bag("context", fv.context);
}

std::string FeatureIndex::key(std::string_view field, std::string_view value) {
  std::string k(field);
  k += '\x1f';
  k += value;
  return k;
}

std::optional<std::uint32_t> FeatureIndex::find(std::string_view field, std::string_view value) const {
  auto it = lookup_.find(key(field, value));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FeatureIndex::add(std::string_view field, std::string_view value) {
  auto [it, inserted] = lookup_.emplace(key(field, value), static_cast<std::uint32_t>(columns_.size()));
  if (inserted) columns_.emplace_back(std::string(field), std::string(value));
  return it->second;
}

std::vector<Site> candidate_sites(const ParsedDocument& doc, const Lexicon& lexicon) {
  std::vector<Site> sites;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const auto& t : doc.sentences[s].tokens) {
      if (lexicon.is_trigger(t.lemma)) sites.push_back({s, t.index});
    }
  }
  return sites;
}

FeatureVector extract_features(const ParsedDocument& doc, Site site, const Lexicon& lexicon) {
  return extract_features(doc, site, lexicon, candidate_sites(doc, lexicon));
}

FeatureVector extract_features(const ParsedDocument& doc, Site site, const Lexicon& lexicon,
                               const std::vector<Site>& sites) {
  const Sentence& s = doc.sentences.at(site.sentence);
  const Token& key = s.tokens.at(site.token);
  const auto k = static_cast<std::ptrdiff_t>(site.token);

  FeatureVector fv;
  fv.w = detail::to_lower(key.surface);
  fv.pos = std::string(pos_name(key.pos));
  fv.kw = key.lemma;

  for (const auto& e : s.edges) {
    fv.posd.push_back(edge_pattern(s, e));
    if (e.dependent == site.token) {
      fv.wd.push_back("dep:" + std::string(relation_name(e.relation)));
    }
    if (e.head == site.token) {
      fv.wd.push_back("head:" + std::string(relation_name(e.relation)));
      fv.kwd.push_back(key.lemma + "+" + s.tokens[e.dependent].lemma);
      fv.pos_kwd.push_back(edge_pattern(s, e));
    }
    if (e.head != kVirtualRoot && s.tokens[e.head].pos == PosTag::NN &&
        s.tokens[e.dependent].pos == PosTag::NN && lexicon.contains_lemma(s.tokens[e.head].lemma) &&
        lexicon.contains_lemma(s.tokens[e.dependent].lemma)) {
      fv.nnd.push_back(std::string(relation_name(e.relation)) + ":" + s.tokens[e.head].lemma + "+" +
                       s.tokens[e.dependent].lemma);
    }
  }

  auto pos_in_sites = std::find(sites.begin(), sites.end(), site);
  fv.pre_subg = fv.next_subg = std::string(kNone);
  if (pos_in_sites != sites.end()) {
    if (pos_in_sites != sites.begin()) {
      auto prev = *(pos_in_sites - 1);
      fv.pre_subg = doc.sentences[prev.sentence].tokens[prev.token].lemma;
    }
    if (pos_in_sites + 1 != sites.end()) {
      auto next = *(pos_in_sites + 1);
      fv.next_subg = doc.sentences[next.sentence].tokens[next.token].lemma;
    }
  }

  fv.pre_n = fv.next_n = std::string(kNone);
  for (auto i = k - 1; i >= 0; --i) {
    if (s.tokens[static_cast<std::size_t>(i)].pos == PosTag::NN) {
      fv.pre_n = s.tokens[static_cast<std::size_t>(i)].lemma;
      break;
    }
  }
  for (auto i = static_cast<std::size_t>(k) + 1; i < s.tokens.size(); ++i) {
    if (s.tokens[i].pos == PosTag::NN) {
      fv.next_n = s.tokens[i].lemma;
      break;
    }
  }
  fv.pre_w = lemma_or_none(s, k - 1);
  fv.next_w = lemma_or_none(s, k + 1);

  for (const auto& t : s.tokens) {
    if (t.index != site.token && lexicon.contains_lemma(t.lemma)) push_unique(fv.context, t.lemma);
  }
  return fv;
}

SparseVector vectorize(const FeatureVector& fv, FeatureIndex& index, Growth growth) {
  if (growth == Growth::Frozen) return vectorize(fv, static_cast<const FeatureIndex&>(index));
  std::set<std::uint32_t> cols;
  for_each_feature(fv, [&](std::string_view field, std::string_view value) { cols.insert(index.add(field, value)); });
  SparseVector out;
  out.reserve(cols.size());
  for (auto c : cols) out.emplace_back(c, 1.0);
  return out;
}

SparseVector vectorize(const FeatureVector& fv, const FeatureIndex& index) {
  std::set<std::uint32_t> cols;
  for_each_feature(fv, [&](std::string_view field, std::string_view value) {
    if (auto c = index.find(field, value)) cols.insert(*c);
  });
  SparseVector out;
  out.reserve(cols.size());
  for (auto c : cols) out.emplace_back(c, 1.0);
  return out;
}

}  // namespace exeplan
