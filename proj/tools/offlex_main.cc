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

// Command-line front end: prepare, run, predict, select-report.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "offlex/corpus.h"
#include "offlex/error.h"
#include "offlex/experiment.h"

namespace {

// Flags shared by the config-driven subcommands.
struct CommonFlags {
  std::string config;
  std::string task;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
};

void AddCommonFlags(CLI::App *cmd, CommonFlags *flags, bool config_required) {
  auto *config = cmd->add_option("--config", flags->config,
                                 "Experiment config (JSON)")
                     ->envname("OFFLEX_CONFIG");
  if (config_required) config->required();
  cmd->add_option("--task", flags->task, "offensive, hate or all");
  cmd->add_option("--seed", flags->seed, "Seed for folds, sampling and training");
  cmd->add_option("--jobs", flags->jobs, "Worker threads (0: all cores)");
  cmd->add_option("--out", flags->out, "Output directory");
}

offlex::ExperimentConfig ResolveConfig(const CommonFlags &flags) {
  offlex::ExperimentConfig config = offlex::LoadConfig(flags.config);
  offlex::ApplyOverrides(offlex::OverridesFromEnvironment(
                             [](const char *name) { return std::getenv(name); }),
                         &config);
  offlex::Overrides cli;
  if (!flags.task.empty()) cli.task = flags.task;
  cli.seed = flags.seed;
  cli.jobs = flags.jobs;
  if (!flags.out.empty()) cli.out = flags.out;
  offlex::ApplyOverrides(cli, &config);
  return config;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"offlex: offensive language and hate speech classification"};
  app.require_subcommand(1);

  CommonFlags prepare_flags, run_flags, select_flags, predict_flags;
  CLI::App *prepare = app.add_subcommand(
      "prepare", "Normalize and tokenize the corpus into prepared/");
  AddCommonFlags(prepare, &prepare_flags, true);

  CLI::App *run = app.add_subcommand(
      "run", "Cross-validate the experiment grid; write reports/ and models/");
  AddCommonFlags(run, &run_flags, true);

  CLI::App *select = app.add_subcommand(
      "select-report", "Feature selection scores and gain/loss tables");
  AddCommonFlags(select, &select_flags, true);

  CLI::App *predict = app.add_subcommand(
      "predict", "Classify documents with a saved model");
  AddCommonFlags(predict, &predict_flags, false);
  std::string model, input, output, format;
  std::vector<std::string> schema;
  predict->add_option("--model", model, "Model file written by 'run'")->required();
  predict->add_option("--input", input, "Documents to classify")->required();
  predict->add_option("--output", output,
                      "Predictions CSV (default: <out>/reports/predictions.csv)");
  predict->add_option("--format", format, "csv, tsv or jsonl");
  predict->add_option("--schema", schema,
                      "field:column pairs, e.g. id:id text:comment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (prepare->parsed()) {
      return offlex::CmdPrepare(ResolveConfig(prepare_flags), std::cerr);
    }
    if (run->parsed()) return offlex::CmdRun(ResolveConfig(run_flags), std::cerr);
    if (select->parsed()) {
      return offlex::CmdSelectReport(ResolveConfig(select_flags), std::cerr);
    }
    offlex::PredictOptions options;
    options.model = model;
    options.input = input;
    std::filesystem::path out_dir = "offlex-out";
    if (!predict_flags.config.empty()) {
      offlex::ExperimentConfig config = ResolveConfig(predict_flags);
      options.format = config.format;
      options.schema = config.schema;
      options.schema.offensive.clear();
      options.schema.hate.clear();
      out_dir = config.out;
    } else if (const char *env = std::getenv("OFFLEX_OUT"); env && *env) {
      out_dir = env;
    }
    if (!predict_flags.out.empty()) out_dir = predict_flags.out;
    if (!format.empty()) options.format = offlex::ParseCorpusFormat(format);
    if (!schema.empty()) options.schema = offlex::ParseSchema(schema);
    options.output = output.empty() ? out_dir / "reports" / "predictions.csv"
                                    : std::filesystem::path(output);
    return offlex::CmdPredict(options, std::cerr);
  } catch (const offlex::Error &e) {
    std::cerr << "offlex: " << e.what() << "\n";
    const bool usage = e.code() == offlex::ErrorCode::kUsage ||
                       e.code() == offlex::ErrorCode::kConfigInvalid;
    return usage ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "offlex: " << e.what() << "\n";
    return 1;
  }
}
