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


#ifndef OFFLEX_TESTS_SUPPORT_FIXTURES_H_
#define OFFLEX_TESTS_SUPPORT_FIXTURES_H_

#include <memory>
#include <vector>

#include "offlex/corpus.h"
#include "offlex/eval.h"
#include "offlex/lexicon.h"
#include "offlex/synthetic.h"
#include "offlex/textprep.h"
#include "test_util.h"

namespace offlex::testing {

// A generated corpus for one task with its lexicons and tokenized form.
// Lexicons live on the heap so `resources` survives moves.
struct SyntheticSetup {
  std::unique_ptr<Corpus> corpus;
  std::vector<TokenizedDocument> docs;
  std::unique_ptr<MolLexicon> mol;
  std::unique_ptr<PolarityLexicon> sentiment;
  std::unique_ptr<EmotionLexicon> emotion;
  Resources resources;
};

inline SyntheticSetup MakeSyntheticSetup(const SyntheticOptions &options,
                                         Task task, bool undersample = false) {
  SyntheticData data = GenerateSynthetic(options);
  SyntheticSetup s;
  Corpus c = MakeTaskCorpus(data.documents, task);
  if (undersample) c = Undersample(c, options.seed);
  s.corpus = std::make_unique<Corpus>(std::move(c));
  s.docs = RunPipeline(s.corpus->documents(), PlainPipeline());
  s.mol = std::make_unique<MolLexicon>(data.lexicon);
  s.sentiment = std::make_unique<PolarityLexicon>();
  for (auto &[w, p] : data.sentiment) s.sentiment->Add(w, p);
  s.emotion = std::make_unique<EmotionLexicon>();
  for (auto &[w, e] : data.emotion) s.emotion->Add(w, e);
  s.resources = {s.mol.get(), s.sentiment.get(), s.emotion.get()};
  return s;
}

}  // namespace offlex::testing

#endif  // OFFLEX_TESTS_SUPPORT_FIXTURES_H_
