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

#include "offlex/textprep.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "offlex/error.h"
#include "offlex/random.h"
#include "test_util.h"

namespace offlex {
namespace {

using testing::CodeOf;
using testing::Doc;

TEST(StripNoiseTest, RemovesMentionsUrlsEmojiAndPunctuation) {
  EXPECT_EQ(StripNoise("vai @user http://x.com 😀 embora!!!"), "vai embora");
}

TEST(StripNoiseTest, EmptyAndCleanText) {
  EXPECT_EQ(StripNoise(""), "");
  EXPECT_EQ(StripNoise("texto limpo"), "texto limpo");
}

TEST(StripNoiseTest, HashtagKeepsWordAndBareWww) {
  NoiseStats stats;
  EXPECT_EQ(StripNoise("#fora www.site.com.br agora :) ;-)", &stats), "fora agora");
  EXPECT_EQ(stats.hashtags, 1u);
  EXPECT_EQ(stats.urls, 1u);
  EXPECT_EQ(stats.emoticons, 2u);
}

TEST(StripNoiseTest, KeepsApostropheHyphenAndAccents) {
  EXPECT_EQ(StripNoise("d'água guarda-chuva ação"), "d'água guarda-chuva ação");
}

TEST(StripAccentsTest, Examples) {
  EXPECT_EQ(StripAccents("inútil"), "inutil");
  EXPECT_EQ(StripAccents("ladrão"), "ladrao");
  EXPECT_EQ(StripAccents("ção"), "cao");
  EXPECT_EQ(StripAccents("ÀÉÎÕÜ ç"), "AEIOU c");
}

std::string RandomText(Rng *rng) {
  static const std::vector<std::string> kPieces = {
      "a", "ã", "é", "ç", "Ç", " ", "  ", "@x", "#y", "http://u.v", "!", "?",
      "😀", "ü", "Ñ", "-", "'", "1", "ﬁ", "e\xCC\x81", ":)", "www.z.org", "\t"};
  std::string s;
  const size_t n = rng->UniformIndex(20);
  for (size_t i = 0; i < n; ++i) s += kPieces[rng->UniformIndex(kPieces.size())];
  return s;
}

TEST(StripAccentsTest, Idempotent) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::string s = RandomText(&rng);
    const std::string once = StripAccents(s);
    EXPECT_EQ(StripAccents(once), once) << s;
  }
}

TEST(StepsTest, EveryStepIdempotent) {
  // Each token-level step runs behind Tokenize, which is itself checked.
  std::vector<PipelineConfig> configs;
  for (Step step : {Step::kRemoveStopwords, Step::kLemmatize, Step::kStripAccents}) {
    PipelineConfig p = PipelineConfig::Default();
    p.steps = {Step::kTokenize, step};
    p.lemma_table = {{"uu", "u"}, {"cc", "c"}};
    configs.push_back(p);
  }
  PipelineConfig tokenize_only;
  tokenize_only.steps = {Step::kTokenize};
  configs.push_back(tokenize_only);

  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::string s = RandomText(&rng);
    EXPECT_EQ(StripNoise(StripNoise(s)), StripNoise(s)) << s;
    EXPECT_EQ(Lowercase(Lowercase(s)), Lowercase(s)) << s;
    for (const PipelineConfig &p : configs) {
      TokenizedDocument once = RunPipeline(Doc("x", s, 0), p);
      std::string joined;
      for (const std::string &t : once.tokens) joined += t + " ";
      if (joined.empty()) continue;
      EXPECT_EQ(RunPipeline(Doc("x", joined, 0), p).tokens, once.tokens)
          << StepName(p.steps.back()) << ": " << s;
    }
  }
}

TEST(PipelineTest, DefaultPipelineWithLemmas) {
  PipelineConfig p = PipelineConfig::Default();
  p.stopwords = {"os", "são"};
  p.lemma_table = {{"políticos", "político"}, {"inúteis", "inútil"}};
  TokenizedDocument t = RunPipeline(Doc("1", "Os políticos são inúteis", 1), p);
  EXPECT_EQ(t.tokens, (std::vector<std::string>{"politico", "inutil"}));
}

TEST(PipelineTest, TokenizeOnly) {
  PipelineConfig p;
  p.steps = {Step::kTokenize};
  EXPECT_EQ(RunPipeline(Doc("1", "a b", 0), p).tokens,
            (std::vector<std::string>{"a", "b"}));
}

TEST(PipelineTest, AllStopwordsGiveEmptyTokens) {
  PipelineConfig p = PipelineConfig::Default();
  EXPECT_TRUE(RunPipeline(Doc("1", "de que o a", 0), p).tokens.empty());
}

TEST(PipelineTest, OutputTokensCarryNoNoise) {
  PipelineConfig p = PipelineConfig::Default();
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    for (const std::string &t : RunPipeline(Doc("1", RandomText(&rng) + " x", 0), p).tokens) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(t.find_first_of(" \t@#!?:)"), std::string::npos) << t;
      EXPECT_EQ(t.find("://"), std::string::npos) << t;
    }
  }
}

TEST(PipelineTest, TokenOrderPreserved) {
  PipelineConfig p = testing::PlainPipeline();
  EXPECT_EQ(RunPipeline(Doc("1", "voltar para a jaula", 1), p).tokens,
            (std::vector<std::string>{"voltar", "para", "a", "jaula"}));
}

TEST(PipelineTest, PunctuationTrimmedAtTokenEdges) {
  EXPECT_EQ(Tokenize("\"olá,\" (mundo) -sim-"),
            (std::vector<std::string>{"olá", "mundo", "sim"}));
}

TEST(PipelineTest, ValidationErrors) {
  PipelineConfig empty;
  EXPECT_EQ(CodeOf([&] { empty.Validate(); }), ErrorCode::kConfigInvalid);
  PipelineConfig twice;
  twice.steps = {Step::kTokenize, Step::kTokenize};
  EXPECT_EQ(CodeOf([&] { twice.Validate(); }), ErrorCode::kConfigInvalid);
  PipelineConfig early;
  early.steps = {Step::kRemoveStopwords, Step::kTokenize};
  EXPECT_EQ(CodeOf([&] { RunPipeline(Doc("1", "x", 0), early); }),
            ErrorCode::kConfigInvalid);
}

TEST(PipelineTest, PosTagsCarriedOver) {
  Document d = Doc("1", "ele correu", 0);
  d.pos_tags = std::vector<TaggedToken>{{"ele", "PRON"}, {"correu", "VERB"}};
  TokenizedDocument t = RunPipeline(d, PipelineConfig::Default());
  ASSERT_TRUE(t.pos_tags);
  EXPECT_EQ(*t.pos_tags, (std::vector<std::string>{"PRON", "VERB"}));
}

TEST(DataFilesTest, ShippedListsMatchBuiltIns) {
  const std::filesystem::path data = std::filesystem::path(OFFLEX_SOURCE_DIR) / "data";
  std::unordered_set<std::string> stop = LoadStopwords(data / "stopwords_pt.txt");
  std::unordered_set<std::string> builtin(DefaultStopwords().begin(),
                                          DefaultStopwords().end());
  EXPECT_EQ(stop, builtin);

  std::vector<std::string> emoticons;
  std::istringstream in(testing::ReadText(data / "emoticons.txt"));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') emoticons.push_back(line);
  }
  EXPECT_EQ(emoticons, EmoticonList());
}

TEST(WordListsTest, LoadStopwordsAndLemmas) {
  testing::TempDir dir;
  testing::WriteText(dir / "s.txt", "# comment\nDE\n\nque\n");
  EXPECT_EQ(LoadStopwords(dir / "s.txt"), (std::unordered_set<std::string>{"de", "que"}));
  testing::WriteText(dir / "l.tsv", "Políticos\tpolítico\n");
  auto lemmas = LoadLemmaTable(dir / "l.tsv");
  EXPECT_EQ(lemmas.at("políticos"), "político");
  testing::WriteText(dir / "bad.tsv", "a\tb c\n");
  EXPECT_TRUE(CodeOf([&] { LoadLemmaTable(dir / "bad.tsv"); }).has_value());
}

}  // namespace
}  // namespace offlex
