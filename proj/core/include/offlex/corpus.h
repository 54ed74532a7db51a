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

#ifndef OFFLEX_CORPUS_H_
#define OFFLEX_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace offlex {

// The two binary problems: offensive vs. non-offensive comments, and hate
// speech vs. non-hate speech among offensive comments.
enum class Task { kOffensive, kHateSpeech };

std::string_view TaskName(Task task);  // "offensive" / "hate"
Task ParseTask(std::string_view name);

struct TaggedToken {
  std::string token;
  std::string tag;

  bool operator==(const TaggedToken &) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<std::vector<TaggedToken>> pos_tags;
  std::optional<int> offensive;
  std::optional<int> hate;

  // Label for the given task; the caller must know it is present.
  int Label(Task task) const { return task == Task::kOffensive ? *offensive : *hate; }

  bool operator==(const Document &) const = default;
};

struct ClassCounts {
  size_t negative = 0;
  size_t positive = 0;
};

// An immutable, validated set of documents labeled for one task.
class Corpus {
 public:
  // Validates: non-empty, unique ids, non-blank text, hate implies offensive,
  // non-empty POS annotations, and a label for `task` on every document.
  Corpus(std::vector<Document> documents, Task task);

  Task task() const { return task_; }
  size_t size() const { return documents_.size(); }
  const std::vector<Document> &documents() const { return documents_; }
  const Document &operator[](size_t i) const { return documents_[i]; }

  int Label(size_t i) const { return documents_[i].Label(task_); }
  std::vector<int> Labels() const;
  ClassCounts Counts() const;

  bool operator==(const Corpus &) const = default;

 private:
  std::vector<Document> documents_;
  Task task_;
};

enum class CorpusFormat { kCsv, kTsv, kJsonl };

CorpusFormat ParseCorpusFormat(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);

// Maps logical fields to column names (CSV/TSV header cells or JSONL keys).
// Empty strings mean "not present". Without an id column, documents are
// numbered by their 1-based data row.
struct CorpusSchema {
  std::string id;
  std::string text;
  std::string offensive;
  std::string hate;
  std::string pos;

  bool operator==(const CorpusSchema &) const = default;
};

// Parses `field:column` pairs, e.g. {"text:comment", "offensive:label"}.
// Valid fields are id, text, offensive, hate and pos.
CorpusSchema ParseSchema(std::span<const std::string> pairs);

struct LoadOptions {
  // Require at least one label column in the schema (off for prediction).
  bool require_labels = true;
  // Throw EmptyCorpus when the file holds no records.
  bool reject_empty = true;
};

// Reads every record of a corpus file. All malformed records are reported
// together, one line each, naming the 1-based data row and the file line.
std::vector<Document> LoadDocuments(const std::filesystem::path &path,
                                    CorpusFormat format,
                                    const CorpusSchema &schema,
                                    const LoadOptions &options = {});

// Writes documents back in the given format using the schema's column names.
void SaveDocuments(std::span<const Document> documents,
                   const std::filesystem::path &path, CorpusFormat format,
                   const CorpusSchema &schema);

// Restricts documents to those labeled for `task` and builds the corpus.
// For hate speech detection with `offensive_only`, only comments labeled
// offensive are kept, since the hate classifier runs on offensive comments.
Corpus MakeTaskCorpus(std::vector<Document> documents, Task task,
                      bool offensive_only = true);

Corpus LoadCorpus(const std::filesystem::path &path, CorpusFormat format,
                  const CorpusSchema &schema, Task task);

// Random undersampling of the majority class down to the minority count.
// The minority class is kept whole and document order is preserved.
Corpus Undersample(const Corpus &corpus, uint64_t seed = 0);

// Stratified assignment of documents to k folds.
class FoldPlan {
 public:
  FoldPlan(int k, uint64_t seed, std::vector<int> fold_of,
           std::vector<std::string> ids);

  int k() const { return k_; }
  uint64_t seed() const { return seed_; }

  // Fold index of the i-th corpus document.
  int FoldOfIndex(size_t i) const { return fold_of_[i]; }
  // Fold index by document id; throws IdMismatch for unknown ids.
  int FoldOf(const std::string &id) const;

  std::vector<size_t> TestIndices(int fold) const;
  std::vector<size_t> TrainIndices(int fold) const;
  size_t size() const { return fold_of_.size(); }

 private:
  int k_;
  uint64_t seed_;
  std::vector<int> fold_of_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> by_id_;
};

FoldPlan MakeFolds(const Corpus &corpus, int k, uint64_t seed = 0);

// Writes `doc_id,fold` rows with a header.
void WriteFoldPlanCsv(const FoldPlan &plan, const Corpus &corpus,
                      std::ostream &out);

}  // namespace offlex

#endif  // OFFLEX_CORPUS_H_
