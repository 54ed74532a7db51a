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

#include "offlex/lexicon.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <utility>

#include "offlex/error.h"
#include "strings.h"

namespace offlex {

std::string_view ContextLabelName(ContextLabel label) {
  return label == ContextLabel::kIndependent ? "independent" : "dependent";
}

std::string MolEntry::Text() const { return internal::Join(expression, " "); }

MolLexicon::MolLexicon(std::vector<MolEntry> entries)
    : entries_(std::move(entries)) {
  std::map<std::vector<std::string>, size_t> seen;
  std::vector<std::string> problems;
  for (size_t i = 0; i < entries_.size(); ++i) {
    const MolEntry &e = entries_[i];
    if (e.expression.empty()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "lexicon entry " + std::to_string(i) + " has no tokens");
    }
    auto [it, inserted] = seen.emplace(e.expression, i);
    if (!inserted) {
      problems.push_back("entry " + std::to_string(i) + " '" + e.Text() +
                         "' duplicates entry " + std::to_string(it->second));
    }
    index_[e.expression.front()].push_back(i);
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kDuplicateEntry, "duplicate lexicon expressions",
                std::move(problems));
  }
  for (auto &[first, candidates] : index_) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](size_t a, size_t b) {
                       return entries_[a].expression.size() >
                              entries_[b].expression.size();
                     });
  }
}

std::optional<size_t> MolLexicon::Find(
    std::span<const std::string> expression) const {
  if (expression.empty()) return std::nullopt;
  auto it = index_.find(expression.front());
  if (it == index_.end()) return std::nullopt;
  for (size_t i : it->second) {
    const auto &expr = entries_[i].expression;
    if (std::equal(expr.begin(), expr.end(), expression.begin(),
                   expression.end())) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<size_t> MolLexicon::LongestMatchAt(
    std::span<const std::string> tokens, size_t pos) const {
  if (pos >= tokens.size()) return std::nullopt;
  auto it = index_.find(tokens[pos]);
  if (it == index_.end()) return std::nullopt;
  const size_t remaining = tokens.size() - pos;
  for (size_t i : it->second) {
    const auto &expr = entries_[i].expression;
    if (expr.size() > remaining) continue;
    if (std::equal(expr.begin(), expr.end(), tokens.begin() + pos)) return i;
  }
  return std::nullopt;
}

std::vector<MolMatch> MatchExpressions(std::span<const std::string> tokens,
                                       const MolLexicon &lexicon) {
  std::map<size_t, int> counts;
  size_t pos = 0;
  while (pos < tokens.size()) {
    std::optional<size_t> hit = lexicon.LongestMatchAt(tokens, pos);
    if (hit) {
      ++counts[*hit];
      pos += lexicon[*hit].expression.size();
    } else {
      ++pos;
    }
  }
  std::vector<MolMatch> out;
  out.reserve(counts.size());
  for (const auto &[entry, count] : counts) out.push_back({entry, count});
  return out;
}

namespace {

struct TsvLine {
  size_t line = 0;
  std::vector<std::string> fields;
};

// Non-blank, non-comment lines split on tabs, trimmed.
std::vector<TsvLine> ReadTsv(const std::filesystem::path &path,
                             std::string_view what) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound,
                "cannot open " + std::string(what) + " " + path.string());
  }
  std::vector<TsvLine> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (internal::Trim(line).empty() || line.front() == '#') continue;
    TsvLine row{line_no, {}};
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      row.fields.emplace_back(internal::Trim(
          std::string_view(line).substr(start, tab == std::string::npos
                                                   ? std::string::npos
                                                   : tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string Where(size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

MolLexicon LoadMol(const std::filesystem::path &path,
                   const PipelineConfig &pipeline) {
  std::vector<TsvLine> rows = ReadTsv(path, "MOL lexicon");
  std::vector<MolEntry> entries;
  std::vector<size_t> entry_lines;
  std::vector<std::string> problems;
  std::vector<std::string> skipped;
  ErrorCode code = ErrorCode::kMalformedRecord;
  for (const TsvLine &row : rows) {
    if (entries.empty() && problems.empty() && !row.fields.empty() &&
        Lowercase(row.fields[0]) == "expression") {
      continue;  // header
    }
    if (row.fields.size() != 3) {
      problems.push_back(Where(row.line) +
                         "expected expression<TAB>context<TAB>hate_marker");
      continue;
    }
    std::string context = Lowercase(row.fields[1]);
    if (context.starts_with("context-")) context.erase(0, 8);
    MolEntry entry;
    if (context == "dependent") {
      entry.context = ContextLabel::kDependent;
    } else if (context == "independent") {
      entry.context = ContextLabel::kIndependent;
    } else {
      problems.push_back(Where(row.line) + "unknown context label '" +
                         row.fields[1] + "'");
      code = ErrorCode::kUnknownContextLabel;
      continue;
    }
    if (row.fields[2] == "1") {
      entry.hate_marker = true;
    } else if (row.fields[2] != "0") {
      problems.push_back(Where(row.line) + "hate marker '" + row.fields[2] +
                         "' not in {0,1}");
      continue;
    }
    entry.expression = NormalizeText(row.fields[0], pipeline);
    if (entry.expression.empty()) {
      skipped.push_back(Where(row.line) + "'" + row.fields[0] +
                        "' normalizes to no tokens");
      continue;
    }
    entries.push_back(std::move(entry));
    entry_lines.push_back(row.line);
  }
  if (!problems.empty()) {
    throw Error(code, "invalid MOL lexicon " + path.string(),
                std::move(problems));
  }
  std::map<std::vector<std::string>, size_t> first_line;
  for (size_t i = 0; i < entries.size(); ++i) {
    auto [it, inserted] = first_line.emplace(entries[i].expression, entry_lines[i]);
    if (!inserted) {
      problems.push_back(Where(entry_lines[i]) + "'" + entries[i].Text() +
                         "' duplicates line " + std::to_string(it->second));
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kDuplicateEntry,
                "duplicate expressions in " + path.string(),
                std::move(problems));
  }
  MolLexicon lexicon(std::move(entries));
  lexicon.set_skipped(std::move(skipped));
  return lexicon;
}

std::string_view EmotionName(Emotion emotion) {
  switch (emotion) {
    case Emotion::kAnger: return "anger";
    case Emotion::kLove: return "love";
    case Emotion::kHate: return "hate";
    case Emotion::kDisgust: return "disgust";
    case Emotion::kSuspicious: return "suspicious";
    case Emotion::kFear: return "fear";
  }
  return "";
}

Polarity EmotionPolarity(Emotion emotion) {
  return emotion == Emotion::kLove ? Polarity::kPositive : Polarity::kNegative;
}

void PolarityLexicon::Add(std::string word, Polarity polarity) {
  if (!words_.emplace(word, polarity).second) {
    throw Error(ErrorCode::kDuplicateEntry,
                "word '" + word + "' listed twice in sentiment lexicon");
  }
}

std::optional<Polarity> PolarityLexicon::Lookup(const std::string &word) const {
  auto it = words_.find(word);
  if (it == words_.end()) return std::nullopt;
  return it->second;
}

void EmotionLexicon::Add(std::string word, Emotion emotion) {
  if (word.empty()) {
    throw Error(ErrorCode::kMalformedRecord, "empty emotion word");
  }
  if (!words_.emplace(word, emotion).second) {
    throw Error(ErrorCode::kDuplicateEntry,
                "word '" + word + "' listed twice in emotion lexicon");
  }
}

std::optional<Emotion> EmotionLexicon::Lookup(const std::string &word) const {
  auto it = words_.find(word);
  if (it == words_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Normalizes a single-word lexicon entry; nullopt if it is not one token.
std::optional<std::string> NormalizeWord(const std::string &raw,
                                         const PipelineConfig &pipeline) {
  std::vector<std::string> tokens = NormalizeText(raw, pipeline);
  if (tokens.size() != 1) return std::nullopt;
  return std::move(tokens.front());
}

template <typename Lexicon, typename Parse>
Lexicon LoadWordLexicon(const std::filesystem::path &path,
                        const PipelineConfig &pipeline, std::string_view what,
                        ErrorCode unknown_code, Parse parse) {
  Lexicon lexicon;
  std::vector<std::string> problems;
  ErrorCode code = ErrorCode::kMalformedRecord;
  std::unordered_map<std::string, size_t> first_line;
  for (const TsvLine &row : ReadTsv(path, what)) {
    if (row.fields.size() != 2) {
      problems.push_back(Where(row.line) + "expected word<TAB>label");
      continue;
    }
    auto label = parse(Lowercase(row.fields[1]));
    if (!label) {
      problems.push_back(Where(row.line) + "unknown label '" + row.fields[1] +
                         "'");
      code = unknown_code;
      continue;
    }
    std::optional<std::string> word = NormalizeWord(row.fields[0], pipeline);
    if (!word) continue;  // stopword or multi-token surface
    auto [it, inserted] = first_line.emplace(*word, row.line);
    if (!inserted) {
      problems.push_back(Where(row.line) + "'" + *word + "' duplicates line " +
                         std::to_string(it->second));
      code = ErrorCode::kDuplicateEntry;
      continue;
    }
    lexicon.Add(std::move(*word), *label);
  }
  if (!problems.empty()) {
    throw Error(code, "invalid " + std::string(what) + " " + path.string(),
                std::move(problems));
  }
  return lexicon;
}

}  // namespace

PolarityLexicon LoadPolarity(const std::filesystem::path &path,
                             const PipelineConfig &pipeline) {
  return LoadWordLexicon<PolarityLexicon>(
      path, pipeline, "sentiment lexicon", ErrorCode::kUnknownPolarity,
      [](const std::string &v) -> std::optional<Polarity> {
        if (v == "pos" || v == "positive" || v == "1") return Polarity::kPositive;
        if (v == "neg" || v == "negative" || v == "-1") return Polarity::kNegative;
        if (v == "neu" || v == "neutral" || v == "0") return Polarity::kNeutral;
        return std::nullopt;
      });
}

EmotionLexicon LoadEmotion(const std::filesystem::path &path,
                           const PipelineConfig &pipeline) {
  return LoadWordLexicon<EmotionLexicon>(
      path, pipeline, "emotion lexicon", ErrorCode::kUnknownEmotion,
      [](const std::string &v) -> std::optional<Emotion> {
        for (Emotion e : {Emotion::kAnger, Emotion::kLove, Emotion::kHate,
                          Emotion::kDisgust, Emotion::kSuspicious,
                          Emotion::kFear}) {
          if (EmotionName(e) == v) return e;
        }
        return std::nullopt;
      });
}

PolarityCounts CountPolarity(std::span<const std::string> tokens,
                             const PolarityLexicon *sentiment,
                             const EmotionLexicon *emotion) {
  PolarityCounts counts;
  auto tally = [&](Polarity p) {
    if (p == Polarity::kPositive) ++counts.positive;
    if (p == Polarity::kNegative) ++counts.negative;
  };
  for (const std::string &tok : tokens) {
    if (sentiment) {
      if (auto p = sentiment->Lookup(tok)) tally(*p);
    }
    if (emotion) {
      if (auto e = emotion->Lookup(tok)) tally(EmotionPolarity(*e));
    }
  }
  return counts;
}

}  // namespace offlex
