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
#include <fstream>
#include <utility>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "offlex/error.h"
#include "strings.h"

namespace offlex {

std::string_view StepName(Step step) {
  switch (step) {
    case Step::kStripNoise: return "strip_noise";
    case Step::kLowercase: return "lowercase";
    case Step::kTokenize: return "tokenize";
    case Step::kRemoveStopwords: return "remove_stopwords";
    case Step::kLemmatize: return "lemmatize";
    case Step::kStripAccents: return "strip_accents";
  }
  return "";
}

Step ParseStep(std::string_view name) {
  for (Step s : {Step::kStripNoise, Step::kLowercase, Step::kTokenize,
                 Step::kRemoveStopwords, Step::kLemmatize,
                 Step::kStripAccents}) {
    if (StepName(s) == name) return s;
  }
  throw Error(ErrorCode::kConfigInvalid,
              "unknown pipeline step '" + std::string(name) + "'");
}

PipelineConfig PipelineConfig::Default() {
  PipelineConfig config;
  config.steps = {Step::kStripNoise,      Step::kLowercase,
                  Step::kTokenize,        Step::kRemoveStopwords,
                  Step::kLemmatize,       Step::kStripAccents};
  config.stopwords.insert(DefaultStopwords().begin(), DefaultStopwords().end());
  return config;
}

void PipelineConfig::Validate() const {
  if (steps.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "pipeline has no steps");
  }
  auto tokenize = std::find(steps.begin(), steps.end(), Step::kTokenize);
  if (tokenize == steps.end() ||
      std::count(steps.begin(), steps.end(), Step::kTokenize) != 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "pipeline must contain tokenize exactly once");
  }
  for (auto it = steps.begin(); it != tokenize; ++it) {
    if (*it == Step::kRemoveStopwords || *it == Step::kLemmatize) {
      throw Error(ErrorCode::kConfigInvalid,
                  std::string(StepName(*it)) + " must come after tokenize");
    }
  }
}

NoiseStats &NoiseStats::operator+=(const NoiseStats &other) {
  urls += other.urls;
  mentions += other.mentions;
  hashtags += other.hashtags;
  emoji += other.emoji;
  emoticons += other.emoticons;
  special_chars += other.special_chars;
  return *this;
}

namespace {

std::u32string Decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  const auto *bytes = reinterpret_cast<const uint8_t *>(s.data());
  while (i < n) {
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    out.push_back(c < 0 ? 0xFFFD : static_cast<char32_t>(c));
  }
  return out;
}

void AppendUtf8(std::string *out, char32_t c) {
  char buf[4];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t *>(buf), len, 4, static_cast<UChar32>(c),
            error);
  if (!error) out->append(buf, len);
}

std::string Encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) AppendUtf8(&out, c);
  return out;
}

bool IsSpace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool IsEmoji(char32_t c) {
  const UChar32 u = static_cast<UChar32>(c);
  if (u < 0x80) return false;  // digits, '#' and '*' carry Emoji property
  return u_hasBinaryProperty(u, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(u, UCHAR_EMOJI_PRESENTATION) ||
         u_hasBinaryProperty(u, UCHAR_EMOJI_MODIFIER) ||
         u_hasBinaryProperty(u, UCHAR_REGIONAL_INDICATOR) ||
         u == 0x200D || u == 0xFE0E || u == 0xFE0F || u == 0x20E3;
}

bool IsMark(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

bool IsKeptChar(char32_t c) {
  const UChar32 u = static_cast<UChar32>(c);
  return u_hasBinaryProperty(u, UCHAR_ALPHABETIC) || u_isdigit(u) ||
         IsMark(c) || c == U'\'' || c == U'\u2019' || c == U'-' ||
         c == U'\u2010';
}

bool IsMentionChar(char32_t c) {
  const UChar32 u = static_cast<UChar32>(c);
  return u_hasBinaryProperty(u, UCHAR_ALPHABETIC) || u_isdigit(u) ||
         c == U'_' || c == U'.';
}

char32_t AsciiLower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + 32 : c;
}

// Offset of the first URL start in the chunk, or npos.
size_t FindUrl(std::u32string_view chunk) {
  static const std::u32string_view kPrefixes[] = {U"http://", U"https://",
                                                   U"ftp://", U"www."};
  for (size_t i = 0; i < chunk.size(); ++i) {
    if (i > 0 && IsKeptChar(chunk[i - 1]) && chunk[i - 1] != U'-') continue;
    for (std::u32string_view prefix : kPrefixes) {
      if (chunk.size() - i < prefix.size()) continue;
      bool match = true;
      for (size_t j = 0; j < prefix.size(); ++j) {
        if (AsciiLower(chunk[i + j]) != prefix[j]) {
          match = false;
          break;
        }
      }
      if (match) return i;
    }
  }
  return std::u32string_view::npos;
}

bool IsEmoticon(std::u32string_view chunk) {
  static const std::unordered_set<std::u32string> *kSet = [] {
    auto *set = new std::unordered_set<std::u32string>;
    for (const std::string &e : EmoticonList()) set->insert(Decode(e));
    return set;
  }();
  return kSet->contains(std::u32string(chunk));
}

// Cleans one whitespace-free chunk, appending the result (possibly with
// interior spaces where characters were dropped) to `out`.
void CleanChunk(std::u32string_view chunk, std::u32string *out,
                NoiseStats *stats) {
  if (IsEmoticon(chunk)) {
    ++stats->emoticons;
    return;
  }
  size_t url = FindUrl(chunk);
  if (url != std::u32string_view::npos) {
    ++stats->urls;
    chunk = chunk.substr(0, url);
  }
  bool in_emoji = false;
  for (size_t i = 0; i < chunk.size(); ++i) {
    char32_t c = chunk[i];
    if (c == U'@' && i + 1 < chunk.size() && IsMentionChar(chunk[i + 1])) {
      ++stats->mentions;
      ++i;
      while (i + 1 < chunk.size() && IsMentionChar(chunk[i + 1])) ++i;
      out->push_back(U' ');
      in_emoji = false;
      continue;
    }
    if (c == U'#' && i + 1 < chunk.size() && IsKeptChar(chunk[i + 1])) {
      ++stats->hashtags;
      in_emoji = false;
      continue;
    }
    if (IsEmoji(c)) {
      if (!in_emoji) ++stats->emoji;
      in_emoji = true;
      out->push_back(U' ');
      continue;
    }
    in_emoji = false;
    if (IsKeptChar(c)) {
      out->push_back(c);
    } else {
      ++stats->special_chars;
      out->push_back(U' ');
    }
  }
}

std::u32string CollapseSpaces(std::u32string_view s) {
  std::u32string out;
  bool pending = false;
  for (char32_t c : s) {
    if (IsSpace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

icu::UnicodeString ToIcu(std::string_view s) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string FromIcu(const icu::UnicodeString &s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

std::string StripNoise(std::string_view text, NoiseStats *stats) {
  NoiseStats local;
  if (stats == nullptr) stats = &local;
  std::u32string in = Decode(text);
  std::u32string out;
  size_t i = 0;
  while (i < in.size()) {
    if (IsSpace(in[i])) {
      out.push_back(U' ');
      ++i;
      continue;
    }
    size_t j = i;
    while (j < in.size() && !IsSpace(in[j])) ++j;
    CleanChunk(std::u32string_view(in).substr(i, j - i), &out, stats);
    i = j;
  }
  return Encode(CollapseSpaces(out));
}

std::string StripAccents(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfd = icu::Normalizer2::getNFDInstance(status);
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIo, "ICU normalizer unavailable");
  }
  icu::UnicodeString decomposed = nfd->normalize(ToIcu(text), status);
  icu::UnicodeString stripped;
  for (int32_t i = 0; i < decomposed.length();) {
    UChar32 c = decomposed.char32At(i);
    if (!IsMark(static_cast<char32_t>(c))) stripped.append(c);
    i += U16_LENGTH(c);
  }
  icu::UnicodeString composed = nfc->normalize(stripped, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIo, "ICU normalization failed");
  }
  return FromIcu(composed);
}

std::string Lowercase(std::string_view text) {
  icu::UnicodeString s = ToIcu(text);
  s.toLower(icu::Locale::getRoot());
  return FromIcu(s);
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::u32string in = Decode(text);
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < in.size()) {
    while (i < in.size() && IsSpace(in[i])) ++i;
    size_t j = i;
    while (j < in.size() && !IsSpace(in[j])) ++j;
    size_t b = i;
    size_t e = j;
    while (b < e && u_ispunct(static_cast<UChar32>(in[b]))) ++b;
    while (e > b && u_ispunct(static_cast<UChar32>(in[e - 1]))) --e;
    if (e > b) {
      tokens.push_back(Encode(std::u32string_view(in).substr(b, e - b)));
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> NormalizeText(std::string_view text,
                                       const PipelineConfig &config,
                                       NoiseStats *stats) {
  std::string whole(text);
  std::vector<std::string> tokens;
  bool tokenized = false;

  // Applies a string transform to the text, or to every token once split.
  auto transform = [&](auto &&fn) {
    if (!tokenized) {
      whole = fn(whole);
      return;
    }
    std::vector<std::string> next;
    next.reserve(tokens.size());
    for (const std::string &tok : tokens) {
      std::string t = fn(tok);
      // A token may split (noise removed from its middle) or vanish.
      for (std::string &piece : internal::SplitAsciiSpace(t)) {
        next.push_back(std::move(piece));
      }
    }
    tokens = std::move(next);
  };

  for (Step step : config.steps) {
    switch (step) {
      case Step::kStripNoise:
        transform([&](const std::string &s) { return StripNoise(s, stats); });
        break;
      case Step::kLowercase:
        transform([](const std::string &s) { return Lowercase(s); });
        break;
      case Step::kStripAccents:
        transform([](const std::string &s) { return StripAccents(s); });
        break;
      case Step::kTokenize:
        tokens = Tokenize(whole);
        tokenized = true;
        break;
      case Step::kRemoveStopwords:
        if (!tokenized) break;
        std::erase_if(tokens, [&](const std::string &tok) {
          return config.stopwords.contains(tok);
        });
        break;
      case Step::kLemmatize:
        if (!tokenized) break;
        for (std::string &tok : tokens) {
          auto it = config.lemma_table.find(tok);
          if (it != config.lemma_table.end()) tok = it->second;
        }
        std::erase_if(tokens, [](const std::string &t) { return t.empty(); });
        break;
    }
  }
  if (!tokenized) tokens = Tokenize(whole);
  return tokens;
}

TokenizedDocument RunPipeline(const Document &doc,
                              const PipelineConfig &config,
                              NoiseStats *stats) {
  config.Validate();
  TokenizedDocument out;
  out.id = doc.id;
  out.tokens = NormalizeText(doc.text, config, stats);
  if (doc.pos_tags) {
    std::vector<std::string> tags;
    tags.reserve(doc.pos_tags->size());
    for (const TaggedToken &t : *doc.pos_tags) tags.push_back(t.tag);
    out.pos_tags = std::move(tags);
  }
  return out;
}

std::vector<TokenizedDocument> RunPipeline(std::span<const Document> docs,
                                           const PipelineConfig &config,
                                           NoiseStats *stats) {
  config.Validate();
  std::vector<TokenizedDocument> out;
  out.reserve(docs.size());
  for (const Document &doc : docs) out.push_back(RunPipeline(doc, config, stats));
  return out;
}

const std::vector<std::string> &DefaultStopwords() {
  // Portuguese function words; data/stopwords_pt.txt holds the same list.
  static const std::vector<std::string> kWords = {
      "a", "à", "ao", "aos", "aquela", "aquelas", "aquele", "aqueles",
      "aquilo", "as", "às", "até", "com", "como", "da", "das", "de", "dela",
      "delas", "dele", "deles", "depois", "do", "dos", "e", "é", "ela",
      "elas", "ele", "eles", "em", "entre", "era", "eram", "éramos", "essa",
      "essas", "esse", "esses", "esta", "está", "estamos", "estão", "estar",
      "estas", "estava", "estavam", "estávamos", "este", "esteja",
      "estejam", "estejamos", "estes", "esteve", "estive", "estivemos",
      "estiver", "estivera", "estiveram", "estivéramos", "estiverem",
      "estivermos", "estivesse", "estivessem", "estivéssemos", "estou",
      "eu", "foi", "fomos", "for", "fora", "foram", "fôramos", "forem",
      "formos", "fosse", "fossem", "fôssemos", "fui", "há", "haja", "hajam",
      "hajamos", "hão", "havemos", "haver", "hei", "houve", "houvemos",
      "houver", "houvera", "houverá", "houveram", "houvéramos", "houverão",
      "houverei", "houverem", "houveremos", "houveria", "houveriam",
      "houveríamos", "houvermos", "houvesse", "houvessem", "houvéssemos",
      "isso", "isto", "já", "lhe", "lhes", "mais", "mas", "me", "mesmo",
      "meu", "meus", "minha", "minhas", "muito", "na", "não", "nas", "nem",
      "no", "nos", "nós", "nossa", "nossas", "nosso", "nossos", "num",
      "numa", "o", "os", "ou", "para", "pela", "pelas", "pelo", "pelos",
      "por", "qual", "quando", "que", "quem", "são", "se", "seja", "sejam",
      "sejamos", "sem", "ser", "será", "serão", "serei", "seremos", "seria",
      "seriam", "seríamos", "seu", "seus", "só", "somos", "sou", "sua",
      "suas", "também", "te", "tem", "têm", "temos", "tenha", "tenham",
      "tenhamos", "tenho", "ter", "terá", "terão", "terei", "teremos",
      "teria", "teriam", "teríamos", "teu", "teus", "teve", "tinha",
      "tinham", "tínhamos", "tive", "tivemos", "tiver", "tivera", "tiveram",
      "tivéramos", "tiverem", "tivermos", "tivesse", "tivessem",
      "tivéssemos", "tu", "tua", "tuas", "um", "uma", "você", "vocês", "vos",
  };
  return kWords;
}

const std::vector<std::string> &EmoticonList() {
  // v1; data/emoticons.txt holds the same list.
  static const std::vector<std::string> kEmoticons = {
      ":)",  ":-)", ":(",  ":-(", ":D",  ":-D", ";)",  ";-)", ":P",  ":-P",
      ":p",  ":-p", ":'(", ":/",  ":-/", ":|",  ":-|", ":O",  ":-O", ":o",
      ":*",  ":-*", "<3",  "</3", "xD",  "XD",  "xd",  "=)",  "=(",  "=D",
      "^^",  "^_^", "-_-", ":3",  ">:(", ":v",  "o/",  "\\o/", ";P",  ";p",
  };
  return kEmoticons;
}

std::unordered_set<std::string> LoadStopwords(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound,
                "cannot open stopword file " + path.string());
  }
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view w = internal::Trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(Lowercase(w));
  }
  return words;
}

std::unordered_map<std::string, std::string> LoadLemmaTable(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound,
                "cannot open lemma table " + path.string());
  }
  std::unordered_map<std::string, std::string> table;
  std::vector<std::string> problems;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) +
                         ": expected surface<TAB>lemma");
      continue;
    }
    std::string surface = Lowercase(internal::Trim(line.substr(0, tab)));
    std::string lemma(internal::Trim(line.substr(tab + 1)));
    if (surface.empty() || lemma.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": empty field");
      continue;
    }
    if (internal::SplitAsciiSpace(lemma).size() != 1) {
      problems.push_back("line " + std::to_string(line_no) +
                         ": lemma contains whitespace");
      continue;
    }
    table[surface] = lemma;
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kMalformedRecord,
                "malformed lemma table " + path.string(), std::move(problems));
  }
  return table;
}

}  // namespace offlex
