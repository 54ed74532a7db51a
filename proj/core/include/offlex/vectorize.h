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

#ifndef OFFLEX_VECTORIZE_H_
#define OFFLEX_VECTORIZE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/lexicon.h"
#include "offlex/textprep.h"

namespace offlex {

using FeatureId = int32_t;

enum class VocabularySource { kCorpusTokens, kMolTerms, kPosAndSentiment };

// The four document representations.
enum class Representation { kPosS, kBow, kMol, kBm };

std::string_view RepresentationName(Representation rep);  // "POS+S", ...
Representation ParseRepresentation(std::string_view name);

// Bijective mapping between contiguous feature ids and feature names.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws VocabularyMismatch on repeated names.
  Vocabulary(VocabularySource source, std::vector<std::string> names);

  VocabularySource source() const { return source_; }
  size_t size() const { return names_.size(); }
  const std::string &Name(FeatureId id) const { return names_[id]; }
  const std::vector<std::string> &names() const { return names_; }
  std::optional<FeatureId> Id(const std::string &name) const;

  bool operator==(const Vocabulary &other) const {
    return source_ == other.source_ && names_ == other.names_;
  }

 private:
  VocabularySource source_ = VocabularySource::kCorpusTokens;
  std::vector<std::string> names_;
  std::unordered_map<std::string, FeatureId> ids_;
};

struct FeatureEntry {
  FeatureId id = 0;
  double weight = 0.0;

  bool operator==(const FeatureEntry &) const = default;
};

// Sparse non-negative vector. Entries are sorted by id and never zero.
struct FeatureVector {
  std::string doc_id;
  std::vector<FeatureEntry> entries;

  double Get(FeatureId id) const;
  bool operator==(const FeatureVector &) const = default;
};

// Builds a vector from (id, weight) pairs in any order; sums duplicates and
// drops zeros.
FeatureVector MakeFeatureVector(std::string doc_id,
                                std::vector<FeatureEntry> entries);

// Multipliers of the contextual lexicon weighting.
//
// MOL representation:   weight = freq * weightC            (offensive task)
//                       weight = freq * weightC * weightH  (hate task)
//   with weightC = 1 (context-dependent) or 2 (context-independent), and
//   weightH = 2 for hate-target markers, 1 otherwise.
// B+M representation:   weight = freq * weightC
//   with weightC = 2 (context-dependent) or 3 (context-independent), and
//   factor 1 for terms outside the lexicon.
struct WeightingParams {
  Task task = Task::kOffensive;
  double mol_dependent = 1.0;
  double mol_independent = 2.0;
  double hate_marker = 2.0;
  double hate_non_marker = 1.0;
  double bm_dependent = 2.0;
  double bm_independent = 3.0;
  double bm_non_lexicon = 1.0;

  static WeightingParams ForTask(Task task);

  double MolContextWeight(ContextLabel context) const;
  double HateWeight(bool hate_marker) const;
  // weightC * weightH for the MOL representation under `task`.
  double MolFactor(const MolEntry &entry) const;
  double BmContextWeight(ContextLabel context) const;
};

// CorpusTokens: distinct training tokens in lexicographic order.
// MolTerms: one feature per lexicon entry, in lexicon order.
// PosAndSentiment: the POS tags seen in training plus two polarity counts.
// Only `train` is read, so nothing from held-out documents enters the ids.
Vocabulary BuildVocabulary(std::span<const TokenizedDocument> train,
                           VocabularySource source,
                           const MolLexicon *mol = nullptr);

// PosAndSentiment vocabulary over a fixed tagset: tagset.size() + 2 features.
Vocabulary BuildPosVocabulary(std::span<const std::string> tagset);

// Feature names used by the PosAndSentiment vocabulary.
std::string TagFeatureName(std::string_view tag);
inline constexpr std::string_view kPositiveFeature = "sentiment=positive";
inline constexpr std::string_view kNegativeFeature = "sentiment=negative";

// Raw term frequency over the vocabulary; out-of-vocabulary tokens ignored.
FeatureVector VectorizeBow(const TokenizedDocument &doc,
                           const Vocabulary &vocab);

// Lexicon match counts scaled by MolFactor. Feature id = lexicon entry index.
FeatureVector VectorizeMol(const TokenizedDocument &doc,
                           const MolLexicon &mol,
                           const WeightingParams &params);

// Per-feature B+M multipliers for one vocabulary. A vocabulary term that is
// a lexicon expression, or a token of a multi-word expression, takes that
// entry's weightC; a term covered by several entries takes the largest.
class BmWeighter {
 public:
  BmWeighter(const Vocabulary &vocab, const MolLexicon &mol,
             const WeightingParams &params);

  double Factor(FeatureId id) const { return factors_[id]; }
  const std::vector<double> &factors() const { return factors_; }
  FeatureVector Apply(const TokenizedDocument &doc) const;

 private:
  const Vocabulary *vocab_;
  std::vector<double> factors_;
};

FeatureVector VectorizeBm(const TokenizedDocument &doc,
                          const Vocabulary &vocab, const MolLexicon &mol,
                          const WeightingParams &params);

// POS tag counts plus positive/negative word counts. Throws
// MissingPosAnnotations when the document has no tags.
FeatureVector VectorizePosS(const TokenizedDocument &doc,
                            const Vocabulary &vocab,
                            const PolarityLexicon *sentiment,
                            const EmotionLexicon *emotion);

// `doc_id feature_id:weight ...`, one document per line.
void WriteSparse(std::span<const FeatureVector> vectors, std::ostream &out);

}  // namespace offlex

#endif  // OFFLEX_VECTORIZE_H_
