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

#ifndef OFFLEX_LEXICON_H_
#define OFFLEX_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "offlex/textprep.h"

namespace offlex {

// Whether an offensive expression is offensive in any usage (independent)
// or only in some contexts (dependent).
enum class ContextLabel { kDependent, kIndependent };

std::string_view ContextLabelName(ContextLabel label);  // "dependent" / ...

struct MolEntry {
  std::vector<std::string> expression;  // normalized tokens, at least one
  ContextLabel context = ContextLabel::kDependent;
  bool hate_marker = false;

  // Tokens joined by single spaces.
  std::string Text() const;

  bool operator==(const MolEntry &) const = default;
};

// Contextual offensive lexicon indexed for longest-match lookup.
class MolLexicon {
 public:
  MolLexicon() = default;
  // Throws DuplicateEntry when two entries share an expression.
  explicit MolLexicon(std::vector<MolEntry> entries);

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<MolEntry> &entries() const { return entries_; }
  const MolEntry &operator[](size_t i) const { return entries_[i]; }

  // Index of the entry with exactly this expression.
  std::optional<size_t> Find(std::span<const std::string> expression) const;

  // Longest entry whose expression starts at tokens[pos]; returns its index.
  std::optional<size_t> LongestMatchAt(std::span<const std::string> tokens,
                                       size_t pos) const;

  // Source lines that normalized to no tokens and were left out.
  const std::vector<std::string> &skipped() const { return skipped_; }
  void set_skipped(std::vector<std::string> skipped) {
    skipped_ = std::move(skipped);
  }

 private:
  std::vector<MolEntry> entries_;
  // First token -> entry indices, longest expression first.
  std::unordered_map<std::string, std::vector<size_t>> index_;
  std::vector<std::string> skipped_;
};

// Reads `expression<TAB>context<TAB>hate_marker` rows. context is
// "dependent" or "independent" (a "context-" prefix is accepted), the marker
// is 0 or 1. An optional header row starting with "expression" and '#'
// comment lines are skipped. Expressions are normalized with `pipeline` so
// they match documents prepared the same way.
MolLexicon LoadMol(const std::filesystem::path &path,
                   const PipelineConfig &pipeline);

struct MolMatch {
  size_t entry = 0;
  int count = 0;

  bool operator==(const MolMatch &) const = default;
};

// Greedy left-to-right scan: at each position the longest matching
// expression is consumed and the scan resumes after it. Results are ordered
// by entry index.
std::vector<MolMatch> MatchExpressions(std::span<const std::string> tokens,
                                       const MolLexicon &lexicon);

enum class Polarity { kPositive, kNegative, kNeutral };
enum class Emotion { kAnger, kLove, kHate, kDisgust, kSuspicious, kFear };

std::string_view EmotionName(Emotion emotion);

// Love counts as positive, every other emotion as negative.
Polarity EmotionPolarity(Emotion emotion);

class PolarityLexicon {
 public:
  // Throws DuplicateEntry on a repeated word.
  void Add(std::string word, Polarity polarity);
  std::optional<Polarity> Lookup(const std::string &word) const;
  size_t size() const { return words_.size(); }
  const std::unordered_map<std::string, Polarity> &words() const { return words_; }

 private:
  std::unordered_map<std::string, Polarity> words_;
};

class EmotionLexicon {
 public:
  void Add(std::string word, Emotion emotion);
  std::optional<Emotion> Lookup(const std::string &word) const;
  size_t size() const { return words_.size(); }
  const std::unordered_map<std::string, Emotion> &words() const { return words_; }

 private:
  std::unordered_map<std::string, Emotion> words_;
};

// `word<TAB>polarity` with polarity in {pos, neg, neu}.
PolarityLexicon LoadPolarity(const std::filesystem::path &path,
                             const PipelineConfig &pipeline);

// `word<TAB>emotion` with emotion in {anger, love, hate, disgust,
// suspicious, fear}.
EmotionLexicon LoadEmotion(const std::filesystem::path &path,
                           const PipelineConfig &pipeline);

struct PolarityCounts {
  int positive = 0;
  int negative = 0;

  bool operator==(const PolarityCounts &) const = default;
};

// Counts positive and negative tokens. Each lexicon contributes on its own,
// so a token present in both the sentiment and the emotion lexicon is
// counted twice. Either lexicon may be null.
PolarityCounts CountPolarity(std::span<const std::string> tokens,
                             const PolarityLexicon *sentiment,
                             const EmotionLexicon *emotion);

}  // namespace offlex

#endif  // OFFLEX_LEXICON_H_
