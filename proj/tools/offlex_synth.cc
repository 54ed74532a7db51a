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

// Writes a synthetic corpus and matching lexicons for demos and tests.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "offlex/error.h"
#include "offlex/synthetic.h"

int main(int argc, char **argv) {
  CLI::App app{"Generate a synthetic labeled corpus with lexicons"};
  offlex::SyntheticOptions options;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--documents", options.documents, "Number of comments");
  app.add_option("--seed", options.seed, "Generator seed");
  app.add_option("--neutral-words", options.neutral_words, "Neutral vocabulary size");
  app.add_option("--hate-rate", options.hate_rate,
                 "Fraction of offensive comments that are hate speech");
  CLI11_PARSE(app, argc, argv);
  try {
    offlex::WriteSynthetic(offlex::GenerateSynthetic(options), out);
  } catch (const offlex::Error &e) {
    std::cerr << "offlex_synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
