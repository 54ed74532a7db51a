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

#ifndef OFFLEX_SYNTHETIC_H_
#define OFFLEX_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/lexicon.h"

namespace offlex {

// Generator for labeled comment corpora with a planted lexicon signal.
// Words are pronounceable pseudo-words. Offensive comments usually carry a
// lexicon expression (context-independent ones occur almost only there);
// clean comments occasionally carry a context-dependent one. Everything
// else is drawn from a Zipf-distributed neutral vocabulary shared by both
// classes. Hate comments are offensive comments that carry a hate-marker
// expression.
struct SyntheticOptions {
  size_t documents = 1400;
  double offensive_rate = 0.5;
  double hate_rate = 0.3;  // fraction of offensive comments
  size_t neutral_words = 2000;
  double zipf_exponent = 0.8;
  size_t dependent_terms = 40;
  size_t independent_terms = 40;
  size_t hate_markers = 12;   // taken from the independent terms
  size_t multiword_terms = 6; // two-word expressions among the terms
  double lexicon_rate_offensive = 0.8;
  double lexicon_rate_clean = 0.1;
  size_t min_length = 12;
  size_t max_length = 24;
  double noise_rate = 0.1;  // urls, mentions, emoticons, hashtags
  size_t sentiment_words = 150;
  size_t emotion_words = 60;
  uint64_t seed = 0;
};

struct SyntheticData {
  std::vector<Document> documents;
  std::vector<MolEntry> lexicon;
  std::vector<std::pair<std::string, Polarity>> sentiment;
  std::vector<std::pair<std::string, Emotion>> emotion;
};

SyntheticData GenerateSynthetic(const SyntheticOptions &options);

// Writes corpus.csv (id,text,offensive,hate,pos), mol.tsv, sentiment.tsv
// and emotion.tsv into `dir`.
void WriteSynthetic(const SyntheticData &data, const std::filesystem::path &dir);

}  // namespace offlex

#endif  // OFFLEX_SYNTHETIC_H_
