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

#ifndef OFFLEX_TEXTPREP_H_
#define OFFLEX_TEXTPREP_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "offlex/corpus.h"

namespace offlex {

enum class Step {
  kStripNoise,
  kLowercase,
  kTokenize,
  kRemoveStopwords,
  kLemmatize,
  kStripAccents,
};

std::string_view StepName(Step step);
Step ParseStep(std::string_view name);

// Ordered preparation steps plus the word lists they use. Steps before
// Tokenize act on the whole text; steps after it act on each token.
struct PipelineConfig {
  std::vector<Step> steps;
  std::unordered_set<std::string> stopwords;
  // Lowercased surface form -> lemma. Missing keys map to themselves.
  std::unordered_map<std::string, std::string> lemma_table;

  // StripNoise, Lowercase, Tokenize, RemoveStopwords, Lemmatize,
  // StripAccents with the bundled Portuguese stopword list.
  static PipelineConfig Default();

  // Throws ConfigInvalid unless steps is non-empty, Tokenize appears exactly
  // once, and RemoveStopwords / Lemmatize come after it.
  void Validate() const;
};

struct TokenizedDocument {
  std::string id;
  std::vector<std::string> tokens;
  // POS tags carried over from the input annotations, in order.
  std::optional<std::vector<std::string>> pos_tags;

  bool operator==(const TokenizedDocument &) const = default;
};

// Counters of what noise removal dropped, for preparation logs.
struct NoiseStats {
  size_t urls = 0;
  size_t mentions = 0;
  size_t hashtags = 0;
  size_t emoji = 0;
  size_t emoticons = 0;
  size_t special_chars = 0;

  NoiseStats &operator+=(const NoiseStats &other);
};

// Removes URLs (scheme-prefixed and bare www. forms), @-mentions, hashtag
// markers (the word is kept), emoji code points, whitespace-delimited ASCII
// emoticons from EmoticonList(), and every character that is not a letter,
// digit, combining mark, apostrophe or hyphen. Whitespace runs collapse to a
// single space and the result is trimmed.
std::string StripNoise(std::string_view text, NoiseStats *stats = nullptr);

// Canonical decomposition with all combining marks dropped: "ção" -> "cao".
std::string StripAccents(std::string_view text);

// Full Unicode lowercasing (root locale).
std::string Lowercase(std::string_view text);

// Splits on Unicode whitespace and trims leading/trailing punctuation from
// each token. Tokens left empty are dropped.
std::vector<std::string> Tokenize(std::string_view text);

// Applies the configured steps to one text and returns its tokens.
std::vector<std::string> NormalizeText(std::string_view text,
                                       const PipelineConfig &config,
                                       NoiseStats *stats = nullptr);

TokenizedDocument RunPipeline(const Document &doc,
                              const PipelineConfig &config,
                              NoiseStats *stats = nullptr);

std::vector<TokenizedDocument> RunPipeline(std::span<const Document> docs,
                                           const PipelineConfig &config,
                                           NoiseStats *stats = nullptr);

// Bundled lists. The same content ships as data/stopwords_pt.txt and
// data/emoticons.txt.
const std::vector<std::string> &DefaultStopwords();
const std::vector<std::string> &EmoticonList();

// One word per line, UTF-8; blank lines and lines starting with '#' are
// skipped. Words are lowercased.
std::unordered_set<std::string> LoadStopwords(const std::filesystem::path &path);

// TSV `surface<TAB>lemma`; surfaces are lowercased.
std::unordered_map<std::string, std::string> LoadLemmaTable(
    const std::filesystem::path &path);

}  // namespace offlex

#endif  // OFFLEX_TEXTPREP_H_
