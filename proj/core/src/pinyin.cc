// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "openime/pinyin.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "openime/error.h"

namespace openime {

namespace {

bool IsSyllableText(std::string_view s) {
  if (s.empty() || s.size() > 6) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string Where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

std::string JoinSyllables(const SyllableSeq& syllables, char sep) {
  std::string out;
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    if (i) out.push_back(sep);
    out += syllables[i];
  }
  return out;
}

SyllableSeq SplitSyllables(std::string_view text, char sep) {
  SyllableSeq out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::size_t LetterCount(const SyllableSeq& syllables) {
  std::size_t n = 0;
  for (const auto& s : syllables) n += s.size();
  return n;
}

// --- SyllableInventory ---

SyllableInventory SyllableInventory::Load(const std::string& path) {
  auto in = OpenInput(path);
  return Parse(in, path);
}

SyllableInventory SyllableInventory::Parse(std::istream& in, const std::string& source) {
  SyllableInventory inv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = Trim(line);
    if (s.empty()) continue;
    if (!IsSyllableText(s)) {
      throw DataError(Where(source, lineno) + ": malformed syllable '" +
                      std::string(s) + "'");
    }
    inv.max_length_ = std::max(inv.max_length_, s.size());
    inv.syllables_.emplace(s);
  }
  return inv;
}

SyllableInventory SyllableInventory::FromList(const std::vector<std::string>& syllables) {
  std::stringstream ss;
  for (const auto& s : syllables) ss << s << '\n';
  return Parse(ss, "<list>");
}

bool SyllableInventory::Contains(std::string_view syllable) const {
  return syllables_.find(syllable) != syllables_.end();
}

SyllableSeq SyllableInventory::Segment(std::string_view letters) const {
  SyllableSeq out;
  std::size_t pos = 0;
  while (pos < letters.size()) {
    if (letters[pos] == '\'') {
      ++pos;
      continue;
    }
    std::size_t best = 0;
    const std::size_t limit = std::min(max_length_, letters.size() - pos);
    for (std::size_t len = limit; len >= 1; --len) {
      auto piece = letters.substr(pos, len);
      if (piece.find('\'') != std::string_view::npos) continue;
      if (Contains(piece)) {
        best = len;
        break;
      }
    }
    if (best == 0) {
      throw InputError("cannot segment pinyin at offset " + std::to_string(pos), pos);
    }
    out.emplace_back(letters.substr(pos, best));
    pos += best;
  }
  return out;
}

// --- CharPinyinDict ---

CharPinyinDict CharPinyinDict::Load(const std::string& path,
                                    const SyllableInventory* inventory) {
  auto in = OpenInput(path);
  return Parse(in, path, inventory);
}

CharPinyinDict CharPinyinDict::Parse(std::istream& in, const std::string& source,
                                     const SyllableInventory* inventory) {
  CharPinyinDict dict;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = Trim(line);
    if (s.empty()) continue;
    const auto tab = s.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(Where(source, lineno) + ": expected <character>\\t<syllables>");
    }
    std::u32string ch;
    try {
      ch = Utf8ToU32(s.substr(0, tab));
    } catch (const DataError& e) {
      throw DataError(Where(source, lineno) + ": " + e.what());
    }
    if (ch.size() != 1) {
      throw DataError(Where(source, lineno) + ": expected a single character");
    }
    SyllableSeq prons = SplitSyllables(s.substr(tab + 1), ' ');
    if (prons.empty()) throw DataError(Where(source, lineno) + ": no pronunciation");
    for (const auto& p : prons) {
      if (!IsSyllableText(p) || (inventory && !inventory->Contains(p))) {
        throw DataError(Where(source, lineno) + ": illegal syllable '" + p + "'");
      }
    }
    if (dict.map_.count(ch[0])) {
      throw DataError(Where(source, lineno) + ": duplicate character");
    }
    dict.Add(ch[0], std::move(prons));
  }
  return dict;
}

void CharPinyinDict::Add(char32_t ch, SyllableSeq pronunciations) {
  if (pronunciations.empty()) throw ContractError("character without pronunciation");
  auto [it, inserted] = map_.emplace(ch, std::move(pronunciations));
  if (!inserted) throw ContractError("duplicate dictionary character");
  order_.push_back(ch);
  for (const auto& p : it->second) {
    auto& chars = reverse_[p];
    if (std::find(chars.begin(), chars.end(), ch) == chars.end()) chars.push_back(ch);
  }
}

const SyllableSeq* CharPinyinDict::Pronunciations(char32_t ch) const {
  auto it = map_.find(ch);
  return it == map_.end() ? nullptr : &it->second;
}

const std::vector<char32_t>& CharPinyinDict::CharsFor(std::string_view syllable) const {
  static const std::vector<char32_t> kEmpty;
  auto it = reverse_.find(std::string(syllable));
  return it == reverse_.end() ? kEmpty : it->second;
}

// --- annotation and MIUs ---

SyllableSeq AnnotatePinyin(std::u32string_view line, const CharPinyinDict& dict,
                           CjkRange range) {
  SyllableSeq out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!IsCjk(line[i], range)) continue;
    const SyllableSeq* prons = dict.Pronunciations(line[i]);
    if (prons == nullptr) {
      throw InputError("unknown character '" + U32ToUtf8(line[i]) + "' at offset " +
                           std::to_string(i),
                       i);
    }
    out.push_back(prons->front());
  }
  return out;
}

SyllableSeq AnnotatePinyin(std::string_view utf8_line, const CharPinyinDict& dict,
                           CjkRange range) {
  return AnnotatePinyin(std::u32string_view(Utf8ToU32(utf8_line)), dict, range);
}

std::vector<Miu> SplitMius(std::u32string_view line, CjkRange range) {
  std::vector<Miu> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (!IsCjk(line[i], range)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && IsCjk(line[j], range)) ++j;
    out.push_back(Miu{HanziSeq(line.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

std::vector<Miu> SplitMius(std::string_view utf8_line, CjkRange range) {
  return SplitMius(std::u32string_view(Utf8ToU32(utf8_line)), range);
}

// --- parallel sentences ---

SyllableSeq ParallelSentence::Syllables() const {
  SyllableSeq out;
  for (const auto& w : pinyin_words) out.insert(out.end(), w.begin(), w.end());
  return out;
}

HanziSeq ParallelSentence::Hanzi() const {
  HanziSeq out;
  for (const auto& w : hanzi_words) out += w;
  return out;
}

void ParallelSentence::Validate() const {
  if (pinyin_words.size() != hanzi_words.size()) {
    throw ContractError("parallel sentence has " + std::to_string(pinyin_words.size()) +
                        " pinyin words but " + std::to_string(hanzi_words.size()) +
                        " hanzi words");
  }
  for (std::size_t i = 0; i < pinyin_words.size(); ++i) {
    if (pinyin_words[i].empty() || pinyin_words[i].size() != hanzi_words[i].size()) {
      throw ContractError("word " + std::to_string(i) +
                          ": syllable count differs from character count");
    }
  }
}

std::string FormatParallel(const ParallelSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.pinyin_words.size(); ++i) {
    if (i) out.push_back(' ');
    out += JoinSyllables(sentence.pinyin_words[i]);
  }
  out.push_back('\t');
  for (std::size_t i = 0; i < sentence.hanzi_words.size(); ++i) {
    if (i) out.push_back(' ');
    out += U32ToUtf8(sentence.hanzi_words[i]);
  }
  return out;
}

ParallelSentence ParseParallel(std::string_view line) {
  line = Trim(line);
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) throw DataError("expected <pinyin>\\t<hanzi>");
  ParallelSentence s;
  for (const auto& word : SplitSyllables(line.substr(0, tab), ' ')) {
    s.pinyin_words.push_back(SplitSyllables(word, '\''));
  }
  for (const auto& word : SplitSyllables(line.substr(tab + 1), ' ')) {
    s.hanzi_words.push_back(Utf8ToU32(word));
  }
  try {
    s.Validate();
  } catch (const ContractError& e) {
    throw DataError(e.what());
  }
  return s;
}

std::vector<ParallelSentence> LoadParallelCorpus(const std::string& path) {
  auto in = OpenInput(path);
  std::vector<ParallelSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(ParseParallel(line));
    } catch (const DataError& e) {
      throw DataError(Where(path, lineno) + ": " + e.what());
    }
  }
  return out;
}

void SaveParallelCorpus(const std::vector<ParallelSentence>& corpus,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& s : corpus) out << FormatParallel(s) << '\n';
}

void BuildParallelCorpus(std::istream& corpus, const CharPinyinDict& dict,
                         const Trie<char32_t>& segmenter,
                         const CorpusOptions& options, CorpusStats* stats,
                         const std::function<void(ParallelSentence)>& sink) {
  CorpusStats local;
  CorpusStats& st = stats ? *stats : local;
  std::string line;
  while (std::getline(corpus, line)) {
    ++st.lines;
    std::u32string text;
    std::vector<Miu> mius;
    std::vector<SyllableSeq> miu_pinyin;
    try {
      text = Utf8ToU32(line);
      mius = SplitMius(std::u32string_view(text), options.cjk);
      for (const auto& m : mius) {
        miu_pinyin.push_back(AnnotatePinyin(std::u32string_view(m.chars), dict, options.cjk));
      }
    } catch (const std::exception& e) {
      spdlog::warn("corpus line {} skipped: {}", st.lines, e.what());
      ++st.skipped;
      continue;
    }
    if (mius.empty()) continue;

    ParallelSentence current;
    auto flush = [&] {
      if (current.hanzi_words.empty()) return;
      st.words += current.hanzi_words.size();
      ++st.sentences;
      sink(std::move(current));
      current = ParallelSentence{};
    };
    for (std::size_t m = 0; m < mius.size(); ++m) {
      ++st.mius;
      const auto& chars = mius[m].chars;
      const auto lengths =
          MaxMatchLengths(segmenter, std::span<const char32_t>(chars.data(), chars.size()));
      if (!current.hanzi_words.empty() &&
          current.hanzi_words.size() + lengths.size() > options.max_words) {
        flush();
      }
      std::size_t pos = 0;
      for (std::size_t len : lengths) {
        current.hanzi_words.push_back(chars.substr(pos, len));
        current.pinyin_words.emplace_back(miu_pinyin[m].begin() + pos,
                                          miu_pinyin[m].begin() + pos + len);
        pos += len;
      }
    }
    flush();
  }
}

std::vector<ParallelSentence> BuildParallelCorpus(std::istream& corpus,
                                                  const CharPinyinDict& dict,
                                                  const Trie<char32_t>& segmenter,
                                                  const CorpusOptions& options,
                                                  CorpusStats* stats) {
  std::vector<ParallelSentence> out;
  BuildParallelCorpus(corpus, dict, segmenter, options, stats,
                      [&](ParallelSentence s) { out.push_back(std::move(s)); });
  return out;
}

std::vector<std::string> ReadLines(const std::string& path) {
  auto in = OpenInput(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace openime
