// Copyright 2026 The offlex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "offlex/vectorize.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "offlex/error.h"
#include "strings.h"

namespace offlex {

std::string_view RepresentationName(Representation rep) {
  switch (rep) {
    case Representation::kPosS: return "POS+S";
    case Representation::kBow: return "BOW";
    case Representation::kMol: return "MOL";
    case Representation::kBm: return "B+M";
  }
  return "";
}

Representation ParseRepresentation(std::string_view name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::toupper(c)));
  if (n == "POS+S" || n == "POSS" || n == "POS_S") return Representation::kPosS;
  if (n == "BOW") return Representation::kBow;
  if (n == "MOL") return Representation::kMol;
  if (n == "B+M" || n == "BM" || n == "B_M") return Representation::kBm;
  throw Error(ErrorCode::kUsage, "unknown representation '" +
                                     std::string(name) +
                                     "' (valid: POS+S, BOW, MOL, B+M)");
}

Vocabulary::Vocabulary(VocabularySource source, std::vector<std::string> names)
    : source_(source), names_(std::move(names)) {
  ids_.reserve(names_.size());
  for (size_t i = 0; i < names_.size(); ++i) {
    if (!ids_.emplace(names_[i], static_cast<FeatureId>(i)).second) {
      throw Error(ErrorCode::kVocabularyMismatch,
                  "feature name '" + names_[i] + "' appears twice");
    }
  }
}

std::optional<FeatureId> Vocabulary::Id(const std::string &name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double FeatureVector::Get(FeatureId id) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), id,
      [](const FeatureEntry &e, FeatureId v) { return e.id < v; });
  return it != entries.end() && it->id == id ? it->weight : 0.0;
}

FeatureVector MakeFeatureVector(std::string doc_id,
                                std::vector<FeatureEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const FeatureEntry &a, const FeatureEntry &b) { return a.id < b.id; });
  FeatureVector v{std::move(doc_id), {}};
  for (const FeatureEntry &e : entries) {
    if (!v.entries.empty() && v.entries.back().id == e.id) {
      v.entries.back().weight += e.weight;
    } else {
      v.entries.push_back(e);
    }
  }
  std::erase_if(v.entries, [](const FeatureEntry &e) { return e.weight == 0.0; });
  return v;
}

WeightingParams WeightingParams::ForTask(Task task) {
  WeightingParams params;
  params.task = task;
  return params;
}

double WeightingParams::MolContextWeight(ContextLabel context) const {
  return context == ContextLabel::kIndependent ? mol_independent : mol_dependent;
}

double WeightingParams::HateWeight(bool marker) const {
  return marker ? hate_marker : hate_non_marker;
}

double WeightingParams::MolFactor(const MolEntry &entry) const {
  double factor = MolContextWeight(entry.context);
  if (task == Task::kHateSpeech) factor *= HateWeight(entry.hate_marker);
  return factor;
}

double WeightingParams::BmContextWeight(ContextLabel context) const {
  return context == ContextLabel::kIndependent ? bm_independent : bm_dependent;
}

std::string TagFeatureName(std::string_view tag) {
  return "tag=" + std::string(tag);
}

Vocabulary BuildPosVocabulary(std::span<const std::string> tagset) {
  std::vector<std::string> names;
  names.reserve(tagset.size() + 2);
  for (const std::string &tag : tagset) names.push_back(TagFeatureName(tag));
  names.emplace_back(kPositiveFeature);
  names.emplace_back(kNegativeFeature);
  return Vocabulary(VocabularySource::kPosAndSentiment, std::move(names));
}

Vocabulary BuildVocabulary(std::span<const TokenizedDocument> train,
                           VocabularySource source, const MolLexicon *mol) {
  if (train.empty()) {
    throw Error(ErrorCode::kEmptyCorpus,
                "cannot build a vocabulary without training documents");
  }
  switch (source) {
    case VocabularySource::kCorpusTokens: {
      std::set<std::string> tokens;
      for (const TokenizedDocument &doc : train) {
        tokens.insert(doc.tokens.begin(), doc.tokens.end());
      }
      return Vocabulary(source, {tokens.begin(), tokens.end()});
    }
    case VocabularySource::kMolTerms: {
      if (mol == nullptr) {
        throw Error(ErrorCode::kMissingLexicon,
                    "a MOL lexicon is required for lexicon-term features");
      }
      std::vector<std::string> names;
      names.reserve(mol->size());
      for (const MolEntry &e : mol->entries()) names.push_back(e.Text());
      return Vocabulary(source, std::move(names));
    }
    case VocabularySource::kPosAndSentiment: {
      std::set<std::string> tags;
      for (const TokenizedDocument &doc : train) {
        if (!doc.pos_tags) {
          throw Error(ErrorCode::kMissingPosAnnotations,
                      "document '" + doc.id + "' has no POS annotations");
        }
        tags.insert(doc.pos_tags->begin(), doc.pos_tags->end());
      }
      std::vector<std::string> tagset(tags.begin(), tags.end());
      return BuildPosVocabulary(tagset);
    }
  }
  return {};
}

FeatureVector VectorizeBow(const TokenizedDocument &doc,
                           const Vocabulary &vocab) {
  std::vector<FeatureEntry> entries;
  entries.reserve(doc.tokens.size());
  for (const std::string &tok : doc.tokens) {
    if (auto id = vocab.Id(tok)) entries.push_back({*id, 1.0});
  }
  return MakeFeatureVector(doc.id, std::move(entries));
}

FeatureVector VectorizeMol(const TokenizedDocument &doc,
                           const MolLexicon &mol,
                           const WeightingParams &params) {
  std::vector<FeatureEntry> entries;
  for (const MolMatch &m : MatchExpressions(doc.tokens, mol)) {
    entries.push_back({static_cast<FeatureId>(m.entry),
                       m.count * params.MolFactor(mol[m.entry])});
  }
  return MakeFeatureVector(doc.id, std::move(entries));
}

BmWeighter::BmWeighter(const Vocabulary &vocab, const MolLexicon &mol,
                       const WeightingParams &params)
    : vocab_(&vocab), factors_(vocab.size(), params.bm_non_lexicon) {
  for (const MolEntry &entry : mol.entries()) {
    const double w = params.BmContextWeight(entry.context);
    for (const std::string &tok : entry.expression) {
      if (auto id = vocab.Id(tok)) factors_[*id] = std::max(factors_[*id], w);
    }
  }
}

FeatureVector BmWeighter::Apply(const TokenizedDocument &doc) const {
  FeatureVector v = VectorizeBow(doc, *vocab_);
  for (FeatureEntry &e : v.entries) e.weight *= factors_[e.id];
  return v;
}

FeatureVector VectorizeBm(const TokenizedDocument &doc,
                          const Vocabulary &vocab, const MolLexicon &mol,
                          const WeightingParams &params) {
  return BmWeighter(vocab, mol, params).Apply(doc);
}

FeatureVector VectorizePosS(const TokenizedDocument &doc,
                            const Vocabulary &vocab,
                            const PolarityLexicon *sentiment,
                            const EmotionLexicon *emotion) {
  if (!doc.pos_tags) {
    throw Error(ErrorCode::kMissingPosAnnotations,
                "document '" + doc.id + "' has no POS annotations");
  }
  std::vector<FeatureEntry> entries;
  for (const std::string &tag : *doc.pos_tags) {
    if (auto id = vocab.Id(TagFeatureName(tag))) entries.push_back({*id, 1.0});
  }
  PolarityCounts counts = CountPolarity(doc.tokens, sentiment, emotion);
  if (auto id = vocab.Id(std::string(kPositiveFeature))) {
    entries.push_back({*id, static_cast<double>(counts.positive)});
  }
  if (auto id = vocab.Id(std::string(kNegativeFeature))) {
    entries.push_back({*id, static_cast<double>(counts.negative)});
  }
  return MakeFeatureVector(doc.id, std::move(entries));
}

void WriteSparse(std::span<const FeatureVector> vectors, std::ostream &out) {
  for (const FeatureVector &v : vectors) {
    out << v.doc_id;
    for (const FeatureEntry &e : v.entries) {
      out << ' ' << e.id << ':' << internal::FormatDouble(e.weight);
    }
    out << '\n';
  }
}

}  // namespace offlex
