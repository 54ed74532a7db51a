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

#include "offlex/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "offlex/error.h"
#include "offlex/random.h"
#include "offlex/textprep.h"

namespace offlex {

namespace {

const char *const kTags[] = {"NOUN", "VERB", "ADJ", "ADV", "PROPN"};

class WordFactory {
 public:
  explicit WordFactory(Rng *rng) : rng_(rng) {
    for (const std::string &w : DefaultStopwords()) used_.insert(w);
  }

  std::string Make() {
    static const char kConsonants[] = "bcdfglmnprstvz";
    static const char kVowels[] = "aeiou";
    for (;;) {
      std::string w;
      const size_t syllables = 2 + rng_->UniformIndex(3);
      for (size_t s = 0; s < syllables; ++s) {
        w.push_back(kConsonants[rng_->UniformIndex(sizeof(kConsonants) - 1)]);
        w.push_back(kVowels[rng_->UniformIndex(sizeof(kVowels) - 1)]);
      }
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng *rng_;
  std::unordered_set<std::string> used_;
};

// Inverse-CDF sampler over ranks 0..n-1 with P(r) ~ 1/(r+1)^s.
class ZipfSampler {
 public:
  ZipfSampler(size_t n, double s) : cdf_(n) {
    double total = 0;
    for (size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), s);
      cdf_[r] = total;
    }
    for (double &c : cdf_) c /= total;
  }
  size_t Sample(Rng *rng) const {
    const double u = rng->Uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

const char *const kNoise[] = {"https://t.co/x1", "@perfil", ":)", "#tag", "kkk :(",
                              "www.exemplo.com", "@amiga", ";)"};

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticOptions &o) {
  if (o.documents == 0 || o.min_length == 0 || o.max_length < o.min_length ||
      o.hate_markers > o.independent_terms || o.dependent_terms == 0 ||
      o.independent_terms == 0 ||
      o.multiword_terms > o.dependent_terms + o.independent_terms) {
    throw Error(ErrorCode::kConfigInvalid, "inconsistent synthetic options");
  }
  Rng rng(o.seed);
  WordFactory words(&rng);
  SyntheticData data;

  std::vector<std::string> neutral(o.neutral_words);
  std::vector<std::string> neutral_tag(o.neutral_words);
  for (size_t i = 0; i < neutral.size(); ++i) {
    neutral[i] = words.Make();
    neutral_tag[i] = kTags[rng.UniformIndex(std::size(kTags))];
  }
  const size_t terms = o.dependent_terms + o.independent_terms;
  for (size_t i = 0; i < terms; ++i) {
    MolEntry e;
    e.expression.push_back(words.Make());
    // Spread the two-word expressions over both context labels.
    if (i % (terms / std::max<size_t>(o.multiword_terms, 1)) == 0 &&
        i / (terms / std::max<size_t>(o.multiword_terms, 1)) < o.multiword_terms) {
      e.expression.push_back(words.Make());
    }
    e.context = i < o.dependent_terms ? ContextLabel::kDependent
                                      : ContextLabel::kIndependent;
    e.hate_marker = i >= o.dependent_terms && i - o.dependent_terms < o.hate_markers;
    data.lexicon.push_back(std::move(e));
  }

  // Sentiment and emotion words come from the neutral vocabulary.
  std::vector<size_t> order(neutral.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(std::span<size_t>(order));
  size_t next = 0;
  for (size_t i = 0; i < o.sentiment_words && next < order.size(); ++i) {
    data.sentiment.emplace_back(neutral[order[next++]],
                                i % 2 ? Polarity::kNegative : Polarity::kPositive);
  }
  for (size_t i = 0; i < o.emotion_words && next < order.size(); ++i) {
    data.emotion.emplace_back(neutral[order[next++]],
                              static_cast<Emotion>(i % 6));
  }

  ZipfSampler zipf(neutral.size(), o.zipf_exponent);
  auto pick_term = [&](size_t begin, size_t end) {
    return begin + rng.UniformIndex(end - begin);
  };
  for (size_t d = 0; d < o.documents; ++d) {
    const bool offensive = rng.Uniform() < o.offensive_rate;
    const bool hate = offensive && rng.Uniform() < o.hate_rate;
    const size_t length =
        o.min_length + rng.UniformIndex(o.max_length - o.min_length + 1);
    std::vector<std::pair<std::string, std::string>> tokens;
    for (size_t i = 0; i < length; ++i) {
      const size_t r = zipf.Sample(&rng);
      tokens.emplace_back(neutral[r], neutral_tag[r]);
    }
    std::vector<size_t> planted;
    if (hate) {
      planted.push_back(pick_term(o.dependent_terms, o.dependent_terms + o.hate_markers));
    } else if (offensive) {
      if (rng.Uniform() < o.lexicon_rate_offensive) {
        // Non-hate offensive comments avoid the hate markers.
        const size_t non_marker = terms - o.hate_markers;
        size_t t = rng.UniformIndex(non_marker);
        if (t >= o.dependent_terms) t += o.hate_markers;
        planted.push_back(t);
      }
    } else if (rng.Uniform() < o.lexicon_rate_clean) {
      planted.push_back(pick_term(0, o.dependent_terms));
    }
    for (size_t t : planted) {
      const size_t at = rng.UniformIndex(tokens.size() + 1);
      std::vector<std::pair<std::string, std::string>> expr;
      for (const std::string &w : data.lexicon[t].expression) expr.emplace_back(w, "ADJ");
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), expr.begin(),
                    expr.end());
    }
    Document doc;
    doc.id = "s" + std::to_string(d + 1);
    std::vector<TaggedToken> tags;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) doc.text += ' ';
      doc.text += tokens[i].first;
      tags.push_back({tokens[i].first, tokens[i].second});
    }
    if (rng.Uniform() < o.noise_rate) {
      doc.text += ' ';
      doc.text += kNoise[rng.UniformIndex(std::size(kNoise))];
    }
    doc.pos_tags = std::move(tags);
    doc.offensive = offensive ? 1 : 0;
    doc.hate = hate ? 1 : 0;
    data.documents.push_back(std::move(doc));
  }
  return data;
}

void WriteSynthetic(const SyntheticData &data, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  SaveDocuments(data.documents, dir / "corpus.csv", CorpusFormat::kCsv,
                {"id", "text", "offensive", "hate", "pos"});
  std::ofstream mol(dir / "mol.tsv", std::ios::binary);
  mol << "expression\tcontext\thate_marker\n";
  for (const MolEntry &e : data.lexicon) {
    mol << e.Text() << '\t' << ContextLabelName(e.context) << '\t'
        << (e.hate_marker ? 1 : 0) << '\n';
  }
  std::ofstream sent(dir / "sentiment.tsv", std::ios::binary);
  for (const auto &[w, p] : data.sentiment) {
    sent << w << '\t' << (p == Polarity::kPositive ? "pos" : p == Polarity::kNegative ? "neg" : "neu")
         << '\n';
  }
  std::ofstream emo(dir / "emotion.tsv", std::ios::binary);
  for (const auto &[w, e] : data.emotion) emo << w << '\t' << EmotionName(e) << '\n';
  if (!mol || !sent || !emo) {
    throw Error(ErrorCode::kIo, "cannot write synthetic data to " + dir.string());
  }
}

}  // namespace offlex
