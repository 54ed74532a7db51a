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

#include <gtest/gtest.h>

#include "offlex/error.h"
#include "offlex/random.h"
#include "test_util.h"

namespace offlex {
namespace {

using testing::CodeOf;
using testing::TempDir;
using testing::WriteText;

using Tokens = std::vector<std::string>;

MolLexicon Lex(std::vector<std::pair<Tokens, ContextLabel>> items) {
  std::vector<MolEntry> entries;
  for (auto &[e, c] : items) entries.push_back({e, c, false});
  return MolLexicon(std::move(entries));
}

TEST(LoadMolTest, SampleEntries) {
  TempDir dir;
  WriteText(dir / "mol.tsv",
            "expression\tcontext\thate_marker\n"
            "vadia\tcontext-independent\t1\n"
            "inútil\tcontext-dependent\t0\n"
            "Voltar para a jaula\tdependent\t0\n");
  MolLexicon mol = LoadMol(dir / "mol.tsv", testing::PlainPipeline());
  ASSERT_EQ(mol.size(), 3u);
  EXPECT_EQ(mol[0], (MolEntry{{"vadia"}, ContextLabel::kIndependent, true}));
  EXPECT_EQ(mol[1], (MolEntry{{"inutil"}, ContextLabel::kDependent, false}));
  EXPECT_EQ(mol[2].expression, (Tokens{"voltar", "para", "a", "jaula"}));
}

TEST(LoadMolTest, DuplicateAndUnknownLabel) {
  TempDir dir;
  WriteText(dir / "dup.tsv", "vadia\tindependent\t1\nVadia\tindependent\t1\n");
  try {
    LoadMol(dir / "dup.tsv", testing::PlainPipeline());
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateEntry);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  WriteText(dir / "bad.tsv", "vadia\tsometimes\t1\n");
  EXPECT_EQ(CodeOf([&] { LoadMol(dir / "bad.tsv", testing::PlainPipeline()); }),
            ErrorCode::kUnknownContextLabel);
}

TEST(MatchTest, Examples) {
  MolLexicon mol = Lex({{{"ladrao"}, ContextLabel::kDependent},
                        {{"vadia"}, ContextLabel::kIndependent},
                        {{"voltar", "para", "a", "jaula"}, ContextLabel::kDependent},
                        {{"voltar", "para"}, ContextLabel::kDependent}});
  EXPECT_EQ(MatchExpressions(Tokens{"ele", "e", "um", "ladrao"}, mol),
            (std::vector<MolMatch>{{0, 1}}));
  EXPECT_EQ(MatchExpressions(Tokens{"vadia", "vadia"}, mol),
            (std::vector<MolMatch>{{1, 2}}));
  EXPECT_EQ(MatchExpressions(Tokens{"voltar", "para", "a", "jaula"}, mol),
            (std::vector<MolMatch>{{2, 1}}));
  // Not contiguous: falls back to the shorter expression.
  EXPECT_EQ(MatchExpressions(Tokens{"voltar", "para", "a", "casa"}, mol),
            (std::vector<MolMatch>{{3, 1}}));
}

TEST(MatchTest, TotalBoundedAndStableUnderAppending) {
  MolLexicon mol = Lex({{{"a"}, ContextLabel::kDependent},
                        {{"a", "b"}, ContextLabel::kIndependent},
                        {{"b", "c", "d"}, ContextLabel::kDependent}});
  Rng rng(3);
  const Tokens alphabet = {"a", "b", "c", "d", "x"};
  for (int trial = 0; trial < 500; ++trial) {
    Tokens t;
    for (size_t i = rng.UniformIndex(12); i > 0; --i) {
      t.push_back(alphabet[rng.UniformIndex(alphabet.size())]);
    }
    auto matches = MatchExpressions(t, mol);
    int total = 0;
    for (const MolMatch &m : matches) total += m.count;
    EXPECT_LE(static_cast<size_t>(total), t.size());
    Tokens extended = t;
    extended.push_back("x");
    extended.push_back("zz");
    EXPECT_EQ(MatchExpressions(extended, mol), matches);
  }
}

TEST(PolarityTest, Counts) {
  PolarityLexicon s;
  s.Add("otimo", Polarity::kPositive);
  s.Add("pessimo", Polarity::kNegative);
  EXPECT_EQ(CountPolarity(Tokens{"otimo", "pessimo", "mesa"}, &s, nullptr),
            (PolarityCounts{1, 1}));
  EXPECT_EQ(CountPolarity(Tokens{}, &s, nullptr), (PolarityCounts{0, 0}));
  EmotionLexicon e;
  e.Add("pessimo", Emotion::kDisgust);
  e.Add("amor", Emotion::kLove);
  // Present in both lexicons: counted once per source.
  EXPECT_EQ(CountPolarity(Tokens{"pessimo", "amor"}, &s, &e), (PolarityCounts{1, 2}));
}

TEST(PolarityTest, LoadersRejectDuplicatesAndUnknownValues) {
  TempDir dir;
  WriteText(dir / "s.tsv", "Ótimo\tpos\nruim\tneg\nmesa\tneu\n");
  PolarityLexicon s = LoadPolarity(dir / "s.tsv", testing::PlainPipeline());
  EXPECT_EQ(s.Lookup("otimo"), Polarity::kPositive);
  EXPECT_EQ(s.Lookup("mesa"), Polarity::kNeutral);
  WriteText(dir / "dup.tsv", "bom\tpos\nbom\tneg\n");
  EXPECT_EQ(CodeOf([&] { LoadPolarity(dir / "dup.tsv", testing::PlainPipeline()); }),
            ErrorCode::kDuplicateEntry);
  WriteText(dir / "bad.tsv", "bom\tgreat\n");
  EXPECT_EQ(CodeOf([&] { LoadPolarity(dir / "bad.tsv", testing::PlainPipeline()); }),
            ErrorCode::kUnknownPolarity);
  WriteText(dir / "e.tsv", "raiva\tanger\namor\tlove\n");
  EmotionLexicon e = LoadEmotion(dir / "e.tsv", testing::PlainPipeline());
  EXPECT_EQ(e.Lookup("amor"), Emotion::kLove);
  WriteText(dir / "ebad.tsv", "raiva\tjoy\n");
  EXPECT_EQ(CodeOf([&] { LoadEmotion(dir / "ebad.tsv", testing::PlainPipeline()); }),
            ErrorCode::kUnknownEmotion);
  EXPECT_EQ(EmotionPolarity(Emotion::kLove), Polarity::kPositive);
  for (Emotion em : {Emotion::kAnger, Emotion::kHate, Emotion::kDisgust,
                     Emotion::kSuspicious, Emotion::kFear}) {
    EXPECT_EQ(EmotionPolarity(em), Polarity::kNegative);
  }
}

}  // namespace
}  // namespace offlex
