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

#include "offlex/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "offlex/csv.h"
#include "offlex/error.h"
#include "offlex/lexicon.h"
#include "strings.h"

namespace offlex {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

void CheckKeys(const json &j, const std::string &where,
               std::initializer_list<const char *> allowed) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigInvalid, where + " must be an object");
  }
  for (const auto &item : j.items()) {
    bool ok = false;
    for (const char *a : allowed) ok = ok || item.key() == a;
    if (!ok) {
      throw Error(ErrorCode::kConfigInvalid,
                  "unknown key '" + item.key() + "' in " + where);
    }
  }
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T, typename F>
std::vector<T> ParseList(const json &j, const char *key, F parse) {
  std::vector<T> out;
  if (!j.is_array()) {
    throw Error(ErrorCode::kConfigInvalid, std::string(key) + " must be a list");
  }
  for (const json &item : j) out.push_back(parse(item.get<std::string>()));
  return out;
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

ExperimentConfig ParseConfig(const std::string &json_text,
                             const fs::path &base_dir) {
  ExperimentConfig c;
  try {
    const json j = json::parse(json_text, nullptr, true, true);
    CheckKeys(j, "config",
              {"corpus", "lexicons", "preprocessing", "tasks",
               "representations", "selectors", "classifiers", "folds", "seed",
               "jobs", "out", "undersample", "offensive_only", "save_models",
               "nb", "svm", "mlp", "infogain", "cfs", "baselines"});
    const json &corpus = j.at("corpus");
    CheckKeys(corpus, "corpus", {"path", "format", "schema"});
    c.corpus = Resolve(base_dir, corpus.at("path").get<std::string>());
    if (corpus.contains("format")) {
      c.format = ParseCorpusFormat(corpus["format"].get<std::string>());
    }
    if (corpus.contains("schema")) {
      const json &s = corpus["schema"];
      if (s.is_array()) {
        c.schema = ParseSchema(s.get<std::vector<std::string>>());
      } else {
        CheckKeys(s, "corpus.schema", {"id", "text", "offensive", "hate", "pos"});
        c.schema.id = s.value("id", "");
        c.schema.text = s.value("text", "");
        c.schema.offensive = s.value("offensive", "");
        c.schema.hate = s.value("hate", "");
        c.schema.pos = s.value("pos", "");
      }
    } else {
      c.schema = {"id", "text", "offensive", "hate", ""};
    }
    if (j.contains("lexicons")) {
      const json &l = j["lexicons"];
      CheckKeys(l, "lexicons", {"mol", "sentiment", "emotion", "stopwords", "lemmas"});
      auto opt = [&](const char *key, std::optional<fs::path> *dst) {
        if (l.contains(key) && !l[key].is_null()) {
          *dst = Resolve(base_dir, l[key].get<std::string>());
        }
      };
      opt("mol", &c.mol);
      opt("sentiment", &c.sentiment);
      opt("emotion", &c.emotion);
      opt("stopwords", &c.stopwords);
      opt("lemmas", &c.lemmas);
    }
    if (j.contains("preprocessing")) {
      c.steps = ParseList<Step>(j["preprocessing"], "preprocessing", ParseStep);
    }
    if (j.contains("tasks")) c.tasks = ParseList<Task>(j["tasks"], "tasks", ParseTask);
    if (j.contains("representations")) {
      c.representations = ParseList<Representation>(
          j["representations"], "representations", ParseRepresentation);
    }
    if (j.contains("selectors")) {
      c.selectors = ParseList<SelectionMethod>(j["selectors"], "selectors",
                                               ParseSelectionMethod);
    }
    if (j.contains("classifiers")) {
      c.classifiers = ParseList<ClassifierKind>(j["classifiers"], "classifiers",
                                                ParseClassifierKind);
    }
    c.folds = j.value("folds", c.folds);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("out")) c.out = Resolve(base_dir, j["out"].get<std::string>());
    c.undersample = j.value("undersample", c.undersample);
    c.offensive_only = j.value("offensive_only", c.offensive_only);
    c.save_models = j.value("save_models", c.save_models);
    if (j.contains("nb")) {
      CheckKeys(j["nb"], "nb", {"alpha"});
      c.nb.alpha = j["nb"].value("alpha", c.nb.alpha);
    }
    if (j.contains("svm")) {
      CheckKeys(j["svm"], "svm", {"lambda", "epochs"});
      c.svm.lambda = j["svm"].value("lambda", c.svm.lambda);
      c.svm.epochs = j["svm"].value("epochs", c.svm.epochs);
    }
    if (j.contains("mlp")) {
      const json &m = j["mlp"];
      CheckKeys(m, "mlp", {"hidden_units", "learning_rate", "epochs", "batch_size"});
      c.mlp.hidden_units = m.value("hidden_units", c.mlp.hidden_units);
      c.mlp.learning_rate = m.value("learning_rate", c.mlp.learning_rate);
      c.mlp.epochs = m.value("epochs", c.mlp.epochs);
      c.mlp.batch_size = m.value("batch_size", c.mlp.batch_size);
    }
    if (j.contains("infogain")) {
      CheckKeys(j["infogain"], "infogain", {"top_k"});
      const json &k = j["infogain"].value("top_k", json());
      if (!k.is_null()) c.infogain_top_k = k.get<size_t>();
    }
    if (j.contains("cfs")) {
      CheckKeys(j["cfs"], "cfs", {"max_stale", "max_open"});
      c.cfs.max_stale = j["cfs"].value("max_stale", c.cfs.max_stale);
      c.cfs.max_open = j["cfs"].value("max_open", c.cfs.max_open);
    }
    if (j.contains("baselines")) {
      for (const json &b : j["baselines"]) {
        CheckKeys(b, "baselines[]", {"name", "dataset", "task", "f1"});
        c.baselines.push_back({b.at("name").get<std::string>(),
                               b.value("dataset", ""),
                               ParseTask(b.at("task").get<std::string>()),
                               b.at("f1").get<double>()});
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig LoadConfig(const fs::path &path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, "config file not found: " + path.string());
  }
  return ParseConfig(ReadFile(path), path.parent_path());
}

Overrides OverridesFromEnvironment(
    const std::function<const char *(const char *)> &getenv) {
  Overrides o;
  auto num = [&](const char *name, auto *dst) {
    const char *v = getenv(name);
    if (!v || !*v) return;
    std::string_view s(v);
    typename std::remove_reference_t<decltype(**dst)> parsed{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), parsed);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kConfigInvalid,
                  std::string(name) + " is not a number: '" + v + "'");
    }
    *dst = parsed;
  };
  if (const char *v = getenv("OFFLEX_TASK"); v && *v) o.task = v;
  num("OFFLEX_SEED", &o.seed);
  num("OFFLEX_JOBS", &o.jobs);
  if (const char *v = getenv("OFFLEX_OUT"); v && *v) o.out = v;
  return o;
}

void ApplyOverrides(const Overrides &o, ExperimentConfig *c) {
  if (o.task) {
    if (*o.task == "all" || *o.task == "both") {
      c->tasks = {Task::kOffensive, Task::kHateSpeech};
    } else {
      c->tasks = {ParseTask(*o.task)};
    }
  }
  if (o.seed) c->seed = *o.seed;
  if (o.jobs) c->jobs = *o.jobs;
  if (o.out) c->out = *o.out;
}

void ValidateConfig(const ExperimentConfig &c) {
  std::vector<std::string> problems;
  auto need_file = [&](const fs::path &p, const std::string &what) {
    if (!fs::is_regular_file(p)) {
      problems.push_back(what + " not found: " + p.string());
    }
  };
  need_file(c.corpus, "corpus");
  if (c.mol) need_file(*c.mol, "MOL lexicon");
  if (c.sentiment) need_file(*c.sentiment, "sentiment lexicon");
  if (c.emotion) need_file(*c.emotion, "emotion lexicon");
  if (c.stopwords) need_file(*c.stopwords, "stopword list");
  if (c.lemmas) need_file(*c.lemmas, "lemma table");
  if (c.schema.text.empty()) problems.push_back("schema names no text column");
  if (c.tasks.empty()) problems.push_back("no tasks");
  if (c.representations.empty()) problems.push_back("no representations");
  if (c.selectors.empty()) problems.push_back("no selectors");
  if (c.classifiers.empty()) problems.push_back("no classifiers");
  if (c.folds < 2) problems.push_back("folds must be at least 2");
  if (c.jobs < 0) problems.push_back("jobs must be non-negative");
  for (Task t : c.tasks) {
    if (t == Task::kOffensive && c.schema.offensive.empty()) {
      problems.push_back("task 'offensive' needs an offensive label column");
    }
    if (t == Task::kHateSpeech && c.schema.hate.empty()) {
      problems.push_back("task 'hate' needs a hate label column");
    }
    if (t == Task::kHateSpeech && c.offensive_only && c.schema.offensive.empty()) {
      problems.push_back(
          "offensive_only needs an offensive label column for task 'hate'");
    }
  }
  for (Representation r : c.representations) {
    if ((r == Representation::kMol || r == Representation::kBm) && !c.mol) {
      problems.push_back(std::string(RepresentationName(r)) +
                         " needs lexicons.mol");
    }
    if (r == Representation::kPosS && c.schema.pos.empty()) {
      problems.push_back("POS+S needs a pos column in corpus.schema");
    }
  }
  if (!c.steps.empty()) {
    PipelineConfig p;
    p.steps = c.steps;
    try {
      p.Validate();
    } catch (const Error &e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "invalid configuration", problems);
  }
}

std::string RepresentationSlug(Representation rep) {
  switch (rep) {
    case Representation::kPosS: return "poss";
    case Representation::kBow: return "bow";
    case Representation::kMol: return "mol";
    case Representation::kBm: return "bm";
  }
  return "";
}

namespace {

// ---------------------------------------------------------------------------
// Shared loading

struct Inputs {
  PipelineConfig pipeline;
  std::vector<Document> documents;
  std::vector<TokenizedDocument> tokenized;
  NoiseStats noise;
  MolLexicon mol;
  PolarityLexicon sentiment;
  EmotionLexicon emotion;
  bool has_mol = false;

  Resources MakeResources() const {
    return {has_mol ? &mol : nullptr, sentiment.size() ? &sentiment : nullptr,
            emotion.size() ? &emotion : nullptr};
  }
};

PipelineConfig MakePipeline(const ExperimentConfig &c) {
  PipelineConfig p = PipelineConfig::Default();
  if (!c.steps.empty()) p.steps = c.steps;
  if (c.stopwords) p.stopwords = LoadStopwords(*c.stopwords);
  if (c.lemmas) p.lemma_table = LoadLemmaTable(*c.lemmas);
  p.Validate();
  return p;
}

Inputs LoadInputs(const ExperimentConfig &c) {
  Inputs in;
  in.pipeline = MakePipeline(c);
  if (c.mol) {
    in.mol = LoadMol(*c.mol, in.pipeline);
    in.has_mol = true;
  }
  if (c.sentiment) in.sentiment = LoadPolarity(*c.sentiment, in.pipeline);
  if (c.emotion) in.emotion = LoadEmotion(*c.emotion, in.pipeline);
  in.documents = LoadDocuments(c.corpus, c.format, c.schema);
  in.tokenized = RunPipeline(in.documents, in.pipeline, &in.noise);
  return in;
}

void MakeLayout(const fs::path &out) {
  for (const char *sub : {"prepared", "models", "reports", "logs"}) {
    fs::create_directories(out / sub);
  }
}

void WritePrepared(const ExperimentConfig &c, const Inputs &in) {
  std::ostringstream jsonl;
  for (size_t i = 0; i < in.tokenized.size(); ++i) {
    const TokenizedDocument &t = in.tokenized[i];
    const Document &d = in.documents[i];
    ordered_json j;
    j["id"] = t.id;
    j["tokens"] = t.tokens;
    if (t.pos_tags) j["pos_tags"] = *t.pos_tags;
    if (d.offensive) j["offensive"] = *d.offensive;
    if (d.hate) j["hate"] = *d.hate;
    jsonl << j.dump() << "\n";
  }
  WriteFile(c.out / "prepared" / "corpus.jsonl", jsonl.str());

  size_t tokens = 0;
  for (const TokenizedDocument &t : in.tokenized) tokens += t.tokens.size();
  std::ostringstream log;
  log << "corpus " << c.corpus.string() << "\n"
      << "documents " << in.documents.size() << "\n"
      << "tokens " << tokens << "\n"
      << "removed_urls " << in.noise.urls << "\n"
      << "removed_mentions " << in.noise.mentions << "\n"
      << "removed_hashtag_marks " << in.noise.hashtags << "\n"
      << "removed_emoji " << in.noise.emoji << "\n"
      << "removed_emoticons " << in.noise.emoticons << "\n"
      << "removed_special_chars " << in.noise.special_chars << "\n";
  if (in.has_mol) {
    log << "mol_entries " << in.mol.size() << "\n"
        << "mol_skipped " << in.mol.skipped().size() << "\n";
    for (const std::string &s : in.mol.skipped()) log << "  skipped: " << s << "\n";
  }
  WriteFile(c.out / "logs" / "prepare.log", log.str());
}

// ---------------------------------------------------------------------------
// Model bundles

json PipelineToJson(const PipelineConfig &p) {
  json j;
  std::vector<std::string> steps;
  for (Step s : p.steps) steps.emplace_back(StepName(s));
  j["steps"] = steps;
  std::vector<std::string> stop(p.stopwords.begin(), p.stopwords.end());
  std::sort(stop.begin(), stop.end());
  j["stopwords"] = stop;
  std::map<std::string, std::string> lemmas(p.lemma_table.begin(),
                                            p.lemma_table.end());
  j["lemmas"] = lemmas;
  return j;
}

PipelineConfig PipelineFromJson(const json &j) {
  PipelineConfig p;
  for (const json &s : j.at("steps")) p.steps.push_back(ParseStep(s.get<std::string>()));
  for (const json &s : j.at("stopwords")) p.stopwords.insert(s.get<std::string>());
  for (const auto &item : j.at("lemmas").items()) {
    p.lemma_table.emplace(item.key(), item.value().get<std::string>());
  }
  p.Validate();
  return p;
}

}  // namespace

std::string SerializeBundle(const ModelBundle &b) {
  json j;
  j["kind"] = "bundle";
  j["task"] = TaskName(b.task);
  j["representation"] = RepresentationName(b.representation);
  j["pipeline"] = PipelineToJson(b.pipeline);
  json mol = json::array();
  for (const MolEntry &e : b.mol.entries()) {
    mol.push_back({{"expression", e.expression},
                   {"context", ContextLabelName(e.context)},
                   {"hate_marker", e.hate_marker}});
  }
  j["mol"] = mol;
  std::map<std::string, int> sentiment, emotion;
  for (const auto &[w, p] : b.sentiment.words()) sentiment[w] = static_cast<int>(p);
  for (const auto &[w, e] : b.emotion.words()) emotion[w] = static_cast<int>(e);
  j["sentiment"] = sentiment;
  j["emotion"] = emotion;
  j["vocabulary_source"] = static_cast<int>(b.vocabulary.source());
  j["vocabulary"] = b.vocabulary.names();
  j["selection"] = {{"method", SelectionMethodName(b.selection.method)},
                    {"vocabulary_size", b.selection.vocabulary_size},
                    {"kept", b.selection.kept},
                    {"scores", b.selection.scores},
                    {"merit", b.selection.merit}};
  const std::string classifier = SerializeClassifier(b.classifier);
  j["classifier"] = json::parse(classifier.substr(classifier.find('\n') + 1));
  return std::string(kModelMagic) + " " + std::to_string(kModelFormatVersion) +
         "\n" + j.dump() + "\n";
}

ModelBundle DeserializeBundle(const std::string &text) {
  const size_t newline = text.find('\n');
  const std::string header = text.substr(0, newline);
  const std::string expected =
      std::string(kModelMagic) + " " + std::to_string(kModelFormatVersion);
  if (!header.starts_with(kModelMagic)) {
    throw Error(ErrorCode::kModelFormat, "not an offlex model file");
  }
  if (header != expected) {
    throw Error(ErrorCode::kModelVersionMismatch,
                "model header '" + header + "', this build reads '" + expected + "'");
  }
  ModelBundle b;
  try {
    const json j = json::parse(text.substr(newline + 1));
    if (j.value("kind", "") != "bundle") {
      throw Error(ErrorCode::kModelFormat, "model file holds no pipeline bundle");
    }
    b.task = ParseTask(j.at("task").get<std::string>());
    b.representation = ParseRepresentation(j.at("representation").get<std::string>());
    b.pipeline = PipelineFromJson(j.at("pipeline"));
    std::vector<MolEntry> entries;
    for (const json &e : j.at("mol")) {
      const std::string ctx = e.at("context").get<std::string>();
      entries.push_back({e.at("expression").get<std::vector<std::string>>(),
                         ctx == "independent" ? ContextLabel::kIndependent
                                              : ContextLabel::kDependent,
                         e.at("hate_marker").get<bool>()});
    }
    b.mol = MolLexicon(std::move(entries));
    for (const auto &item : j.at("sentiment").items()) {
      b.sentiment.Add(item.key(), static_cast<Polarity>(item.value().get<int>()));
    }
    for (const auto &item : j.at("emotion").items()) {
      b.emotion.Add(item.key(), static_cast<Emotion>(item.value().get<int>()));
    }
    b.vocabulary = Vocabulary(
        static_cast<VocabularySource>(j.at("vocabulary_source").get<int>()),
        j.at("vocabulary").get<std::vector<std::string>>());
    const json &s = j.at("selection");
    b.selection.method = ParseSelectionMethod(s.at("method").get<std::string>());
    b.selection.vocabulary_size = s.at("vocabulary_size").get<size_t>();
    b.selection.kept = s.at("kept").get<std::vector<FeatureId>>();
    b.selection.scores = s.at("scores").get<std::vector<double>>();
    b.selection.merit = s.at("merit").get<double>();
    b.classifier = DeserializeClassifier(expected + "\n" + j.at("classifier").dump());
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kModelFormat, std::string("bad model file: ") + e.what());
  }
  return b;
}

// ---------------------------------------------------------------------------
// Commands

int CmdPrepare(const ExperimentConfig &config, std::ostream &log) {
  ValidateConfig(config);
  Inputs in = LoadInputs(config);
  MakeLayout(config.out);
  WritePrepared(config, in);
  log << "prepared " << in.documents.size() << " documents into "
      << (config.out / "prepared").string() << "\n";
  return 0;
}

namespace {

struct TaskData {
  Task task;
  std::optional<Corpus> corpus;
  std::optional<FoldPlan> plan;
  std::vector<TokenizedDocument> docs;  // aligned with corpus
  std::string error;
};

struct CellOutcome {
  std::optional<EvalReport> report;
  std::string model;  // serialized bundle
  std::string error;
};

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)> &fn) {
  size_t workers = jobs > 0 ? static_cast<size_t>(jobs)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread &t : threads) t.join();
}

std::string CellName(const CellSpec &cell) {
  return std::string(TaskName(cell.task)) + "/" +
         std::string(RepresentationName(cell.representation)) + "/" +
         std::string(SelectionMethodName(cell.selector.method)) + "/" +
         cell.classifier.Name();
}

}  // namespace

int CmdRun(const ExperimentConfig &config, std::ostream &log) {
  ValidateConfig(config);
  Inputs in = LoadInputs(config);
  MakeLayout(config.out);
  WritePrepared(config, in);
  const Resources resources = in.MakeResources();

  std::unordered_map<std::string, size_t> index_of;
  for (size_t i = 0; i < in.tokenized.size(); ++i) index_of[in.tokenized[i].id] = i;

  std::vector<TaskData> tasks;
  for (Task t : config.tasks) {
    TaskData td{t, std::nullopt, std::nullopt, {}, ""};
    try {
      Corpus corpus = MakeTaskCorpus(in.documents, t, config.offensive_only);
      if (t == Task::kHateSpeech && config.undersample) {
        corpus = Undersample(corpus, config.seed);
      }
      FoldPlan plan = MakeFolds(corpus, config.folds, config.seed);
      for (const Document &d : corpus.documents()) {
        td.docs.push_back(in.tokenized[index_of.at(d.id)]);
      }
      std::ofstream folds(config.out / "reports" /
                          ("folds_" + std::string(TaskName(t)) + ".csv"));
      WriteFoldPlanCsv(plan, corpus, folds);
      td.corpus = std::move(corpus);
      td.plan = std::move(plan);
    } catch (const Error &e) {
      td.error = e.what();
    }
    tasks.push_back(std::move(td));
  }

  struct Job {
    size_t task;
    CellSpec cell;
  };
  std::vector<Job> jobs;
  for (size_t ti = 0; ti < tasks.size(); ++ti) {
    for (Representation rep : config.representations) {
      for (SelectionMethod sel : config.selectors) {
        for (ClassifierKind kind : config.classifiers) {
          CellSpec cell;
          cell.task = tasks[ti].task;
          cell.representation = rep;
          cell.selector = {sel, config.infogain_top_k, config.cfs};
          cell.classifier.kind = kind;
          cell.classifier.nb = config.nb;
          cell.classifier.svm = config.svm;
          cell.classifier.svm.seed = config.seed;
          cell.classifier.mlp = config.mlp;
          cell.classifier.mlp.seed = config.seed;
          jobs.push_back({ti, cell});
        }
      }
    }
  }

  std::vector<CellOutcome> outcomes(jobs.size());
  ParallelFor(jobs.size(), config.jobs, [&](size_t i) {
    const Job &job = jobs[i];
    const TaskData &td = tasks[job.task];
    CellOutcome &out = outcomes[i];
    if (!td.error.empty()) {
      out.error = td.error;
      return;
    }
    try {
      out.report = CrossValidate(*td.corpus, *td.plan, td.docs, job.cell, resources);
      if (config.save_models) {
        const std::vector<int> labels = td.corpus->Labels();
        FoldResult full = RunFold(td.docs, labels, {}, job.cell, resources);
        ModelBundle bundle;
        bundle.task = job.cell.task;
        bundle.representation = job.cell.representation;
        bundle.pipeline = in.pipeline;
        if (job.cell.representation == Representation::kMol ||
            job.cell.representation == Representation::kBm) {
          bundle.mol = in.mol;
        }
        if (job.cell.representation == Representation::kPosS) {
          bundle.sentiment = in.sentiment;
          bundle.emotion = in.emotion;
        }
        bundle.vocabulary = full.pipeline.vocabulary();
        bundle.selection = full.pipeline.selection();
        bundle.classifier = std::move(full.model);
        out.model = SerializeBundle(bundle);
      }
    } catch (const std::exception &e) {
      out.report.reset();
      out.error = e.what();
    }
  });

  std::vector<EvalReport> reports;
  std::ostringstream run_log;
  int failures = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    const std::string name = CellName(jobs[i].cell);
    if (!outcomes[i].error.empty()) {
      ++failures;
      run_log << "FAILED " << name << ": " << outcomes[i].error << "\n";
      log << "cell " << name << " failed: " << outcomes[i].error << "\n";
      continue;
    }
    const EvalReport &r = *outcomes[i].report;
    run_log << "ok " << name << " avg_f1 " << internal::FormatFixed(r.metrics.avg.f1, 4)
            << "\n";
    reports.push_back(r);
    if (config.save_models) {
      const std::string file =
          std::string(TaskName(jobs[i].cell.task)) + "_" +
          RepresentationSlug(jobs[i].cell.representation) + "_" +
          std::string(SelectionMethodName(jobs[i].cell.selector.method)) + "_" +
          jobs[i].cell.classifier.Name() + ".model";
      WriteFile(config.out / "models" / file, outcomes[i].model);
    }
  }

  {
    std::ofstream csv(config.out / "reports" / "results.csv", std::ios::binary);
    WriteReportCsv(reports, csv);
    std::ofstream txt(config.out / "reports" / "results.txt", std::ios::binary);
    RenderReportText(reports, config.baselines, txt);
  }

  std::vector<CellSummary> baseline, selected;
  for (const EvalReport &r : reports) {
    (r.selector == SelectionMethod::kNone ? baseline : selected).push_back(r.Summary());
  }
  if (!baseline.empty() && !selected.empty()) {
    try {
      GainLossReport gl = BuildGainLossReport(baseline, selected);
      std::ofstream csv(config.out / "reports" / "gain_loss.csv", std::ios::binary);
      WriteGainLossCsv(gl, csv);
      std::ofstream txt(config.out / "reports" / "gain_loss.txt", std::ios::binary);
      RenderGainLossText(gl, txt);
    } catch (const Error &e) {
      run_log << "gain/loss report skipped: " << e.what() << "\n";
    }
  }
  WriteFile(config.out / "logs" / "run.log", run_log.str());
  log << reports.size() << " of " << jobs.size() << " cells completed; reports in "
      << (config.out / "reports").string() << "\n";
  return failures == 0 ? 0 : 1;
}

int CmdPredict(const PredictOptions &options, std::ostream &log) {
  if (!fs::is_regular_file(options.model)) {
    throw Error(ErrorCode::kFileNotFound, "model not found: " + options.model.string());
  }
  if (!fs::is_regular_file(options.input)) {
    throw Error(ErrorCode::kFileNotFound, "input not found: " + options.input.string());
  }
  const ModelBundle bundle = DeserializeBundle(ReadFile(options.model));
  const bool uses_mol = bundle.representation == Representation::kMol ||
                        bundle.representation == Representation::kBm;
  const Resources resources{uses_mol ? &bundle.mol : nullptr,
                            bundle.sentiment.size() ? &bundle.sentiment : nullptr,
                            bundle.emotion.size() ? &bundle.emotion : nullptr};
  const FeaturePipeline pipeline(bundle.task, bundle.representation,
                                 bundle.vocabulary, bundle.selection, resources);

  LoadOptions load;
  load.require_labels = false;
  load.reject_empty = false;
  const std::vector<Document> docs =
      LoadDocuments(options.input, options.format, options.schema, load);

  if (!options.output.parent_path().empty()) {
    fs::create_directories(options.output.parent_path());
  }
  std::ofstream out(options.output, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + options.output.string());
  if (docs.empty()) {
    log << "no documents in " << options.input.string() << "\n";
    return 0;
  }
  out << "doc_id,class,score,explanation\n";
  for (const Document &doc : docs) {
    const TokenizedDocument t = RunPipeline(doc, bundle.pipeline);
    const Prediction p = Predict(bundle.classifier, pipeline.Transform(t));

    // Lexicon terms that fired, with the multiplier they received.
    std::vector<std::string> fired;
    std::set<std::string> seen;
    if (bundle.representation == Representation::kBm) {
      const std::vector<double> &factors = pipeline.bm_factors();
      for (const std::string &tok : t.tokens) {
        std::optional<FeatureId> id = pipeline.vocabulary().Id(tok);
        if (!id || factors[*id] == pipeline.weighting().bm_non_lexicon) continue;
        if (seen.insert(tok).second) {
          fired.push_back(tok + ":" + internal::FormatDouble(factors[*id]));
        }
      }
    } else if (bundle.representation == Representation::kMol) {
      for (const MolMatch &m : MatchExpressions(t.tokens, bundle.mol)) {
        const MolEntry &e = bundle.mol[m.entry];
        fired.push_back(e.Text() + ":" +
                        internal::FormatDouble(pipeline.weighting().MolFactor(e)));
      }
    }
    const std::vector<std::string> row = {p.doc_id, std::to_string(p.label),
                                          internal::FormatDouble(p.score),
                                          internal::Join(fired, ";")};
    WriteCsvRow(out, row);
  }
  log << "wrote " << docs.size() << " predictions to " << options.output.string()
      << "\n";
  return 0;
}

int CmdSelectReport(const ExperimentConfig &config, std::ostream &log) {
  ValidateConfig(config);
  Inputs in = LoadInputs(config);
  const Resources resources = in.MakeResources();
  std::unordered_map<std::string, size_t> index_of;
  for (size_t i = 0; i < in.tokenized.size(); ++i) index_of[in.tokenized[i].id] = i;

  struct Job {
    Corpus *corpus;
    std::vector<TokenizedDocument> *docs;
    Representation rep;
    SelectionMethod method;
  };
  std::vector<Corpus> corpora;
  std::vector<std::vector<TokenizedDocument>> task_docs;
  corpora.reserve(config.tasks.size());
  task_docs.reserve(config.tasks.size());
  for (Task t : config.tasks) {
    Corpus corpus = MakeTaskCorpus(in.documents, t, config.offensive_only);
    if (t == Task::kHateSpeech && config.undersample) {
      corpus = Undersample(corpus, config.seed);
    }
    std::vector<TokenizedDocument> docs;
    for (const Document &d : corpus.documents()) {
      docs.push_back(in.tokenized[index_of.at(d.id)]);
    }
    corpora.push_back(std::move(corpus));
    task_docs.push_back(std::move(docs));
  }
  std::vector<Job> jobs;
  for (size_t i = 0; i < corpora.size(); ++i) {
    for (Representation rep : config.representations) {
      for (SelectionMethod m : config.selectors) {
        if (m != SelectionMethod::kNone) jobs.push_back({&corpora[i], &task_docs[i], rep, m});
      }
    }
  }
  MakeLayout(config.out);
  std::vector<std::string> outputs(jobs.size()), errors(jobs.size());
  ParallelFor(jobs.size(), config.jobs, [&](size_t i) {
    const Job &job = jobs[i];
    try {
      const std::vector<int> labels = job.corpus->Labels();
      SelectorSpec spec{job.method, config.infogain_top_k, config.cfs};
      FeaturePipeline p = FeaturePipeline::Fit(*job.docs, labels, job.corpus->task(),
                                               job.rep, spec, resources);
      std::ostringstream csv;
      WriteSelectionCsv(p.selection(), p.vocabulary(), csv);
      outputs[i] = csv.str();
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  int failures = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    const std::string name = "selection_" + std::string(TaskName(jobs[i].corpus->task())) +
                             "_" + RepresentationSlug(jobs[i].rep) + "_" +
                             std::string(SelectionMethodName(jobs[i].method)) + ".csv";
    if (!errors[i].empty()) {
      ++failures;
      log << name << " failed: " << errors[i] << "\n";
      continue;
    }
    WriteFile(config.out / "reports" / name, outputs[i]);
  }

  const fs::path results = config.out / "reports" / "results.csv";
  if (fs::exists(results)) {
    std::ifstream in_csv(results, std::ios::binary);
    std::vector<CellSummary> baseline, selected;
    for (const ReportRow &row : ParseReportCsv(in_csv)) {
      if (row.fold != "pooled" || row.cls != "avg") continue;
      CellSummary s{ParseTask(row.task), ParseRepresentation(row.representation),
                    ParseSelectionMethod(row.selector), row.classifier, row.prf};
      (s.selector == SelectionMethod::kNone ? baseline : selected).push_back(s);
    }
    if (!baseline.empty() && !selected.empty()) {
      GainLossReport gl = BuildGainLossReport(baseline, selected);
      std::ofstream csv(config.out / "reports" / "gain_loss.csv", std::ios::binary);
      WriteGainLossCsv(gl, csv);
      std::ostringstream txt;
      RenderGainLossText(gl, txt);
      WriteFile(config.out / "reports" / "gain_loss.txt", txt.str());
      log << txt.str();
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace offlex
