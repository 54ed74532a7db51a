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

#include "offlex/corpus.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "offlex/csv.h"
#include "offlex/error.h"
#include "offlex/random.h"
#include "strings.h"

namespace offlex {

using internal::Trim;

std::string_view TaskName(Task task) {
  return task == Task::kOffensive ? "offensive" : "hate";
}

Task ParseTask(std::string_view name) {
  if (name == "offensive" || name == "1") return Task::kOffensive;
  if (name == "hate" || name == "2") return Task::kHateSpeech;
  throw Error(ErrorCode::kUsage, "unknown task '" + std::string(name) +
                                     "' (valid: offensive, hate)");
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "csv") return CorpusFormat::kCsv;
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw Error(ErrorCode::kUsage, "unknown corpus format '" +
                                     std::string(name) +
                                     "' (valid: csv, tsv, jsonl)");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kCsv: return "csv";
    case CorpusFormat::kTsv: return "tsv";
    case CorpusFormat::kJsonl: return "jsonl";
  }
  return "csv";
}

CorpusSchema ParseSchema(std::span<const std::string> pairs) {
  CorpusSchema schema;
  for (const std::string &pair : pairs) {
    size_t colon = pair.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size()) {
      throw Error(ErrorCode::kUsage,
                  "schema entry '" + pair + "' is not of the form field:column");
    }
    std::string field = pair.substr(0, colon);
    std::string column = pair.substr(colon + 1);
    if (field == "id") {
      schema.id = column;
    } else if (field == "text") {
      schema.text = column;
    } else if (field == "offensive") {
      schema.offensive = column;
    } else if (field == "hate") {
      schema.hate = column;
    } else if (field == "pos") {
      schema.pos = column;
    } else {
      throw Error(ErrorCode::kUsage,
                  "unknown schema field '" + field +
                      "' (valid: id, text, offensive, hate, pos)");
    }
  }
  return schema;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<Document> documents, Task task)
    : documents_(std::move(documents)), task_(task) {
  if (documents_.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus has no documents");
  }
  std::vector<std::string> problems;
  ErrorCode code = ErrorCode::kMalformedRecord;
  std::unordered_set<std::string> seen;
  for (const Document &doc : documents_) {
    if (!seen.insert(doc.id).second) {
      problems.push_back("duplicate id '" + doc.id + "'");
      code = ErrorCode::kDuplicateId;
    }
    if (Trim(doc.text).empty()) {
      problems.push_back("document '" + doc.id + "' has blank text");
    }
    if (doc.hate && *doc.hate == 1 && doc.offensive && *doc.offensive == 0) {
      problems.push_back("document '" + doc.id +
                         "' is hate speech but not offensive");
      code = ErrorCode::kLabelDomain;
    }
    if (doc.pos_tags && doc.pos_tags->empty()) {
      problems.push_back("document '" + doc.id + "' has empty POS annotations");
    }
    const std::optional<int> &label =
        task == Task::kOffensive ? doc.offensive : doc.hate;
    if (!label) {
      problems.push_back("document '" + doc.id + "' has no " +
                         std::string(TaskName(task)) + " label");
      code = ErrorCode::kSchemaMismatch;
    } else if (*label != 0 && *label != 1) {
      problems.push_back("document '" + doc.id + "' label outside {0,1}");
      code = ErrorCode::kLabelDomain;
    }
  }
  if (!problems.empty()) {
    throw Error(code, "invalid corpus", std::move(problems));
  }
}

std::vector<int> Corpus::Labels() const {
  std::vector<int> labels;
  labels.reserve(documents_.size());
  for (const Document &doc : documents_) labels.push_back(doc.Label(task_));
  return labels;
}

ClassCounts Corpus::Counts() const {
  ClassCounts counts;
  for (const Document &doc : documents_) {
    if (doc.Label(task_) == 1) {
      ++counts.positive;
    } else {
      ++counts.negative;
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

struct Problem {
  ErrorCode code;
  std::string message;
};

std::string RowPrefix(size_t row, size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) +
         "): ";
}

std::optional<int> ParseLabel(std::string_view raw, const std::string &field,
                              const std::string &prefix,
                              std::vector<Problem> *problems) {
  std::string_view v = Trim(raw);
  if (v.empty()) return std::nullopt;
  if (v == "0") return 0;
  if (v == "1") return 1;
  problems->push_back({ErrorCode::kLabelDomain,
                       prefix + field + " label '" + std::string(v) +
                           "' not in {0,1}"});
  return std::nullopt;
}

std::optional<std::vector<TaggedToken>> ParsePos(
    std::string_view raw, const std::string &prefix,
    std::vector<Problem> *problems) {
  std::vector<std::string> pairs = internal::SplitAsciiSpace(raw);
  if (pairs.empty()) return std::nullopt;
  std::vector<TaggedToken> tags;
  tags.reserve(pairs.size());
  for (const std::string &pair : pairs) {
    size_t slash = pair.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == pair.size()) {
      problems->push_back({ErrorCode::kMalformedRecord,
                           prefix + "POS pair '" + pair +
                               "' is not of the form token/TAG"});
      return std::nullopt;
    }
    tags.push_back({pair.substr(0, slash), pair.substr(slash + 1)});
  }
  return tags;
}

std::string FormatPos(const std::vector<TaggedToken> &tags) {
  std::string out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tags[i].token;
    out.push_back('/');
    out += tags[i].tag;
  }
  return out;
}

// Raw field values of one record, keyed by logical field.
struct RawRecord {
  std::optional<std::string> id, text, offensive, hate, pos;
};

void CheckSchema(const CorpusSchema &schema, const LoadOptions &options) {
  if (schema.text.empty()) {
    throw Error(ErrorCode::kSchemaMismatch, "schema does not name a text column");
  }
  if (options.require_labels && schema.offensive.empty() &&
      schema.hate.empty()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "schema names no label column (offensive or hate)");
  }
}

Document BuildDocument(const RawRecord &raw, const CorpusSchema &schema,
                       size_t row, size_t line,
                       std::vector<Problem> *problems) {
  const std::string prefix = RowPrefix(row, line);
  Document doc;
  doc.id = raw.id ? std::string(Trim(*raw.id)) : std::to_string(row);
  if (doc.id.empty()) {
    problems->push_back({ErrorCode::kMalformedRecord, prefix + "empty id"});
  }
  doc.text = raw.text.value_or("");
  if (Trim(doc.text).empty()) {
    problems->push_back({ErrorCode::kMalformedRecord, prefix + "blank text"});
  }
  if (raw.offensive) {
    doc.offensive = ParseLabel(*raw.offensive, schema.offensive, prefix, problems);
  }
  if (raw.hate) doc.hate = ParseLabel(*raw.hate, schema.hate, prefix, problems);
  if (doc.hate && *doc.hate == 1 && doc.offensive && *doc.offensive == 0) {
    problems->push_back({ErrorCode::kLabelDomain,
                         prefix + "hate speech comment not labeled offensive"});
  }
  if (raw.pos) doc.pos_tags = ParsePos(*raw.pos, prefix, problems);
  return doc;
}

std::vector<Document> LoadDelimited(std::istream &in, char delimiter,
                                    bool quoting, const CorpusSchema &schema,
                                    std::vector<Problem> *problems) {
  DelimitedReader reader(in, delimiter, quoting);
  DelimitedRecord header;
  if (!reader.Next(&header)) return {};
  if (!header.fields.empty() && header.fields[0].starts_with("\xEF\xBB\xBF")) {
    header.fields[0].erase(0, 3);
  }

  auto column = [&](const std::string &name) -> std::optional<size_t> {
    if (name.empty()) return std::nullopt;
    auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "column '" + name + "' not found in header");
    }
    return static_cast<size_t>(it - header.fields.begin());
  };
  std::optional<size_t> id_col = column(schema.id);
  std::optional<size_t> text_col = column(schema.text);
  std::optional<size_t> off_col = column(schema.offensive);
  std::optional<size_t> hate_col = column(schema.hate);
  std::optional<size_t> pos_col = column(schema.pos);

  std::vector<Document> docs;
  DelimitedRecord record;
  size_t row = 0;
  while (reader.Next(&record)) {
    if (record.fields.size() == 1 && Trim(record.fields[0]).empty()) continue;
    ++row;
    if (record.fields.size() != header.fields.size()) {
      problems->push_back(
          {ErrorCode::kMalformedRecord,
           RowPrefix(row, record.line) + "expected " +
               std::to_string(header.fields.size()) + " fields, found " +
               std::to_string(record.fields.size())});
      continue;
    }
    auto get = [&](std::optional<size_t> col) -> std::optional<std::string> {
      if (!col) return std::nullopt;
      return record.fields[*col];
    };
    RawRecord raw{get(id_col), get(text_col), get(off_col), get(hate_col),
                  get(pos_col)};
    docs.push_back(BuildDocument(raw, schema, row, record.line, problems));
  }
  return docs;
}

std::optional<std::string> JsonField(const nlohmann::json &obj,
                                     const std::string &key,
                                     const std::string &prefix,
                                     std::vector<Problem> *problems) {
  if (key.empty()) return std::nullopt;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_boolean()) return it->get<bool>() ? "1" : "0";
  problems->push_back({ErrorCode::kMalformedRecord,
                       prefix + "field '" + key + "' has unsupported type"});
  return std::nullopt;
}

std::vector<Document> LoadJsonl(std::istream &in, const CorpusSchema &schema,
                                std::vector<Problem> *problems) {
  std::vector<Document> docs;
  std::string line;
  size_t line_no = 0;
  size_t row = 0;
  bool text_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ++row;
    const std::string prefix = RowPrefix(row, line_no);
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      problems->push_back(
          {ErrorCode::kMalformedRecord, prefix + "not a JSON object"});
      continue;
    }
    if (obj.contains(schema.text)) text_seen = true;
    RawRecord raw{JsonField(obj, schema.id, prefix, problems),
                  JsonField(obj, schema.text, prefix, problems),
                  JsonField(obj, schema.offensive, prefix, problems),
                  JsonField(obj, schema.hate, prefix, problems),
                  JsonField(obj, schema.pos, prefix, problems)};
    docs.push_back(BuildDocument(raw, schema, row, line_no, problems));
  }
  if (row > 0 && !text_seen) {
    throw Error(ErrorCode::kSchemaMismatch,
                "key '" + schema.text + "' not present in any record");
  }
  return docs;
}

}  // namespace

std::vector<Document> LoadDocuments(const std::filesystem::path &path,
                                    CorpusFormat format,
                                    const CorpusSchema &schema,
                                    const LoadOptions &options) {
  CheckSchema(schema, options);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, "no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());

  std::vector<Problem> problems;
  std::vector<Document> docs;
  switch (format) {
    case CorpusFormat::kCsv:
      docs = LoadDelimited(in, ',', true, schema, &problems);
      break;
    case CorpusFormat::kTsv:
      docs = LoadDelimited(in, '\t', false, schema, &problems);
      break;
    case CorpusFormat::kJsonl:
      docs = LoadJsonl(in, schema, &problems);
      break;
  }

  if (!problems.empty()) {
    std::vector<std::string> details;
    for (const Problem &p : problems) details.push_back(p.message);
    throw Error(problems.front().code,
                std::to_string(problems.size()) + " malformed record(s) in " +
                    path.string(),
                std::move(details));
  }
  if (docs.empty() && options.reject_empty) {
    throw Error(ErrorCode::kEmptyCorpus, "no records in " + path.string());
  }
  std::unordered_set<std::string> ids;
  for (const Document &doc : docs) {
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate document id '" + doc.id +
                                               "' in " + path.string());
    }
  }
  return docs;
}

void SaveDocuments(std::span<const Document> documents,
                   const std::filesystem::path &path, CorpusFormat format,
                   const CorpusSchema &schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());

  auto label = [](const std::optional<int> &v) {
    return v ? std::to_string(*v) : std::string();
  };

  if (format == CorpusFormat::kJsonl) {
    for (const Document &doc : documents) {
      nlohmann::ordered_json obj;
      if (!schema.id.empty()) obj[schema.id] = doc.id;
      obj[schema.text] = doc.text;
      if (!schema.offensive.empty() && doc.offensive) {
        obj[schema.offensive] = *doc.offensive;
      }
      if (!schema.hate.empty() && doc.hate) obj[schema.hate] = *doc.hate;
      if (!schema.pos.empty() && doc.pos_tags) {
        obj[schema.pos] = FormatPos(*doc.pos_tags);
      }
      out << obj.dump() << '\n';
    }
    return;
  }

  std::vector<std::string> header;
  for (const std::string *col : {&schema.id, &schema.text, &schema.offensive,
                                 &schema.hate, &schema.pos}) {
    if (!col->empty()) header.push_back(*col);
  }
  std::vector<std::vector<std::string>> rows;
  for (const Document &doc : documents) {
    std::vector<std::string> row;
    if (!schema.id.empty()) row.push_back(doc.id);
    row.push_back(doc.text);
    if (!schema.offensive.empty()) row.push_back(label(doc.offensive));
    if (!schema.hate.empty()) row.push_back(label(doc.hate));
    if (!schema.pos.empty()) {
      row.push_back(doc.pos_tags ? FormatPos(*doc.pos_tags) : std::string());
    }
    rows.push_back(std::move(row));
  }

  if (format == CorpusFormat::kCsv) {
    WriteCsvRow(out, header);
    for (const auto &row : rows) WriteCsvRow(out, row);
    return;
  }
  auto write_tsv = [&](const std::vector<std::string> &fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].find_first_of("\t\n\r") != std::string::npos) {
        throw Error(ErrorCode::kIo,
                    "field contains a tab or newline and cannot be written "
                    "as TSV: " + fields[i]);
      }
      if (i > 0) out << '\t';
      out << fields[i];
    }
    out << '\n';
  };
  write_tsv(header);
  for (const auto &row : rows) write_tsv(row);
}

Corpus MakeTaskCorpus(std::vector<Document> documents, Task task,
                      bool offensive_only) {
  if (task == Task::kHateSpeech) {
    std::erase_if(documents, [&](const Document &doc) {
      if (!doc.hate) return true;
      return offensive_only && !(doc.offensive && *doc.offensive == 1);
    });
  } else {
    std::erase_if(documents,
                  [](const Document &doc) { return !doc.offensive; });
  }
  return Corpus(std::move(documents), task);
}

Corpus LoadCorpus(const std::filesystem::path &path, CorpusFormat format,
                  const CorpusSchema &schema, Task task) {
  return MakeTaskCorpus(LoadDocuments(path, format, schema), task);
}

// ---------------------------------------------------------------------------
// Undersampling and folds

Corpus Undersample(const Corpus &corpus, uint64_t seed) {
  if (corpus.task() != Task::kHateSpeech) {
    throw Error(ErrorCode::kWrongTask,
                "undersampling applies to the hate speech task only");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < corpus.size(); ++i) {
    by_class[corpus.Label(i)].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw Error(ErrorCode::kDegenerateClass,
                "cannot undersample: a class has no documents");
  }
  const int majority = by_class[1].size() > by_class[0].size() ? 1 : 0;
  const size_t target = by_class[1 - majority].size();

  std::vector<size_t> &pool = by_class[majority];
  Rng rng(seed);
  // Partial Fisher-Yates: the first `target` slots become a uniform sample.
  for (size_t i = 0; i < target; ++i) {
    size_t j = i + rng.UniformIndex(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<bool> keep(corpus.size(), false);
  for (size_t i : by_class[1 - majority]) keep[i] = true;
  for (size_t i = 0; i < target; ++i) keep[pool[i]] = true;

  std::vector<Document> docs;
  docs.reserve(2 * target);
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (keep[i]) docs.push_back(corpus[i]);
  }
  return Corpus(std::move(docs), corpus.task());
}

FoldPlan::FoldPlan(int k, uint64_t seed, std::vector<int> fold_of,
                   std::vector<std::string> ids)
    : k_(k), seed_(seed), fold_of_(std::move(fold_of)), ids_(std::move(ids)) {
  for (size_t i = 0; i < ids_.size(); ++i) by_id_.emplace(ids_[i], fold_of_[i]);
}

int FoldPlan::FoldOf(const std::string &id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::kIdMismatch, "document '" + id + "' not in fold plan");
  }
  return it->second;
}

std::vector<size_t> FoldPlan::TestIndices(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < fold_of_.size(); ++i) {
    if (fold_of_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<size_t> FoldPlan::TrainIndices(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < fold_of_.size(); ++i) {
    if (fold_of_[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan MakeFolds(const Corpus &corpus, int k, uint64_t seed) {
  if (k < 2) {
    throw Error(ErrorCode::kConfigInvalid, "fold count must be at least 2");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < corpus.size(); ++i) {
    by_class[corpus.Label(i)].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<size_t>(k)) {
      throw Error(ErrorCode::kTooFewExamples,
                  "class " + std::to_string(c) + " has " +
                      std::to_string(by_class[c].size()) +
                      " documents, fewer than k=" + std::to_string(k));
    }
  }
  Rng rng(seed);
  std::vector<int> fold_of(corpus.size(), -1);
  // Deal each shuffled class round-robin; the second class continues where
  // the first stopped so fold sizes also differ by at most one.
  size_t next = 0;
  for (int c = 0; c < 2; ++c) {
    rng.Shuffle(std::span<size_t>(by_class[c]));
    for (size_t i : by_class[c]) {
      fold_of[i] = static_cast<int>(next % k);
      ++next;
    }
  }
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Document &doc : corpus.documents()) ids.push_back(doc.id);
  return FoldPlan(k, seed, std::move(fold_of), std::move(ids));
}

void WriteFoldPlanCsv(const FoldPlan &plan, const Corpus &corpus,
                      std::ostream &out) {
  out << "doc_id,fold\n";
  for (size_t i = 0; i < corpus.size(); ++i) {
    out << CsvEscape(corpus[i].id) << ',' << plan.FoldOfIndex(i) << '\n';
  }
}

}  // namespace offlex
