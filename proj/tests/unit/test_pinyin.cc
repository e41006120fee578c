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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "openime/error.h"
#include "openime/pinyin.h"
#include "openime/utf8.h"
#include "toy.h"

namespace openime {
namespace {

using testing::H;
using testing::S;

// Maximal CJK runs by a plain scan; the reference for SplitMius.
std::vector<std::pair<std::size_t, std::size_t>> CjkRuns(const std::u32string& line) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] >= 0x4E00 && line[i] <= 0x9FFF) {
      std::size_t j = i;
      while (j < line.size() && line[j] >= 0x4E00 && line[j] <= 0x9FFF) ++j;
      runs.emplace_back(i, j);
      i = j;
    } else {
      ++i;
    }
  }
  return runs;
}

TEST(Utf8, RoundTripAndRejectsMalformed) {
  const std::string text = "北京, hello 欢迎你!";
  EXPECT_EQ(U32ToUtf8(std::u32string_view(Utf8ToU32(text))), text);
  EXPECT_THROW(Utf8ToU32("\xe5\x8c"), DataError);
  EXPECT_THROW(Utf8ToU32("\xff"), DataError);
}

TEST(Utf8, CjkRangeBoundaries) {
  EXPECT_TRUE(IsCjk(0x4E00));
  EXPECT_TRUE(IsCjk(0x9FFF));
  EXPECT_FALSE(IsCjk(0x4DFF));
  EXPECT_FALSE(IsCjk(0x3400));
  EXPECT_TRUE(IsCjk(0x3400, CjkRange{true}));
  EXPECT_FALSE(IsCjk(U'，'));
}

TEST(SyllableInventory, ParsesDeduplicatesAndRejects) {
  std::istringstream three("bei\njing\nni\n");
  EXPECT_EQ(SyllableInventory::Parse(three, "s").size(), 3u);
  std::istringstream dup("ni\nni\n");
  EXPECT_EQ(SyllableInventory::Parse(dup, "s").size(), 1u);
  std::istringstream bad("bei\nb3i\n");
  try {
    SyllableInventory::Parse(bad, "s.txt");
    FAIL() << "expected a parse error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("s.txt:2"), std::string::npos) << e.what();
  }
}

TEST(SyllableInventory, SegmentsLettersByLongestMatch) {
  const auto inv = SyllableInventory::Load(testing::FixturePath("syllables.txt"));
  EXPECT_EQ(inv.Segment("beijinghuanyingni"),
            (SyllableSeq{"bei", "jing", "huan", "ying", "ni"}));
  EXPECT_EQ(inv.Segment("bei'jing"), (SyllableSeq{"bei", "jing"}));
  try {
    inv.Segment("xq");
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(CharPinyinDict, FirstReadingAndReverseLookup) {
  const auto toy = testing::MakeToy();
  EXPECT_EQ(toy.dict.size(), 10u);
  std::istringstream poly("长\tchang zhang\n");
  const auto dict = CharPinyinDict::Parse(poly, "d");
  EXPECT_EQ(*dict.Pronunciations(U'长'), (SyllableSeq{"chang", "zhang"}));
  EXPECT_EQ(AnnotatePinyin("长", dict), (SyllableSeq{"chang"}));
  EXPECT_EQ(dict.CharsFor("zhang"), std::vector<char32_t>{U'长'});
  EXPECT_EQ(toy.dict.CharsFor("bei"), (std::vector<char32_t>{U'北', U'背'}));
}

TEST(CharPinyinDict, FixturePolyphoneUsesFirstEntry) {
  const auto inv = SyllableInventory::Load(testing::FixturePath("syllables.txt"));
  const auto dict = CharPinyinDict::Load(testing::FixturePath("char_pinyin.tsv"), &inv);
  // Oracle: the first listed reading in the shipped TSV.
  std::ifstream in(testing::FixturePath("char_pinyin.tsv"));
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const auto hanzi = Utf8ToU32(line.substr(0, tab));
    std::string first = line.substr(tab + 1);
    first = first.substr(0, first.find(' '));
    EXPECT_EQ(AnnotatePinyin(std::u32string_view(hanzi), dict), SyllableSeq{first}) << line;
    ++checked;
  }
  EXPECT_EQ(checked, dict.size());
  EXPECT_EQ(AnnotatePinyin("长", dict), SyllableSeq{"chang"});
}

TEST(AnnotatePinyin, ExamplesAndErrors) {
  const auto toy = testing::MakeToy();
  EXPECT_EQ(AnnotatePinyin("北京", toy.dict), (SyllableSeq{"bei", "jing"}));
  EXPECT_TRUE(AnnotatePinyin("", toy.dict).empty());
  EXPECT_EQ(AnnotatePinyin("北京，ok你", toy.dict), (SyllableSeq{"bei", "jing", "ni"}));
  try {
    AnnotatePinyin("北京好", toy.dict);
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_NE(std::string(e.what()).find("好"), std::string::npos);
  }
}

TEST(SplitMius, Examples) {
  auto texts = [](const std::vector<Miu>& mius) {
    std::vector<std::string> out;
    for (const auto& m : mius) out.push_back(S(m.chars));
    return out;
  };
  EXPECT_EQ(texts(SplitMius(std::string_view("北京，欢迎你!"))),
            (std::vector<std::string>{"北京", "欢迎你"}));
  EXPECT_TRUE(SplitMius(std::string_view("hello 2024")).empty());
  EXPECT_EQ(texts(SplitMius(std::string_view("你"))), std::vector<std::string>{"你"});
}

TEST(SplitMius, MatchesScanOracleAndIsIdempotent) {
  std::mt19937_64 rng(5);
  const char32_t alphabet[] = {U'北', U'京', U'你', U'a', U' ', U'，', U'。', U'7'};
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string line;
    const std::size_t len = rng() % 16;
    for (std::size_t i = 0; i < len; ++i) line.push_back(alphabet[rng() % 8]);
    const auto mius = SplitMius(std::u32string_view(line));
    const auto runs = CjkRuns(line);
    ASSERT_EQ(mius.size(), runs.size()) << S(line);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < mius.size(); ++i) {
      EXPECT_EQ(mius[i].begin, runs[i].first);
      EXPECT_EQ(mius[i].end, runs[i].second);
      EXPECT_EQ(mius[i].chars, line.substr(runs[i].first, runs[i].second - runs[i].first));
      covered += mius[i].chars.size();
      const auto again = SplitMius(std::u32string_view(mius[i].chars));
      ASSERT_EQ(again.size(), 1u);
      EXPECT_EQ(again[0].chars, mius[i].chars);
    }
    std::size_t cjk = 0;
    for (char32_t c : line) cjk += IsCjk(c);
    EXPECT_EQ(covered, cjk);
  }
}

TEST(AnnotatePinyin, LengthEqualsCjkCount) {
  const auto toy = testing::MakeToy();
  std::mt19937_64 rng(9);
  const char32_t alphabet[] = {U'北', U'京', U'你', U'影', U'x', U'，'};
  for (int trial = 0; trial < 300; ++trial) {
    std::u32string line;
    for (std::size_t i = 0, n = rng() % 12; i < n; ++i) line.push_back(alphabet[rng() % 6]);
    std::size_t cjk = 0;
    for (char32_t c : line) cjk += IsCjk(c);
    EXPECT_EQ(AnnotatePinyin(std::u32string_view(line), toy.dict).size(), cjk);
  }
}

TEST(BuildParallelCorpus, Examples) {
  const auto toy = testing::MakeToy();
  Trie<char32_t> words;
  for (const char* w : {"北京", "欢迎", "你"}) words.Add(std::u32string_view(H(w)), 0);
  std::istringstream one("北京欢迎你\n");
  const auto corpus = BuildParallelCorpus(one, toy.dict, words);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].pinyin_words,
            (std::vector<SyllableSeq>{{"bei", "jing"}, {"huan", "ying"}, {"ni"}}));
  EXPECT_EQ(corpus[0].hanzi_words, (std::vector<HanziSeq>{H("北京"), H("欢迎"), H("你")}));

  std::istringstream punct("，。!!\n");
  EXPECT_TRUE(BuildParallelCorpus(punct, toy.dict, words).empty());

  Trie<char32_t> empty;
  std::istringstream bj("北京\n");
  const auto split = BuildParallelCorpus(bj, toy.dict, empty);
  ASSERT_EQ(split.size(), 1u);
  EXPECT_EQ(split[0].pinyin_words, (std::vector<SyllableSeq>{{"bei"}, {"jing"}}));
  EXPECT_EQ(split[0].hanzi_words, (std::vector<HanziSeq>{H("北"), H("京")}));
}

TEST(BuildParallelCorpus, SkipsUnknownCharactersAndCounts) {
  const auto toy = testing::MakeToy();
  Trie<char32_t> words;
  std::istringstream in("北京\n好人\n你\n");
  CorpusStats stats;
  const auto corpus = BuildParallelCorpus(in, toy.dict, words, {}, &stats);
  EXPECT_EQ(corpus.size(), 2u);
  EXPECT_EQ(stats.lines, 3u);
  EXPECT_EQ(stats.skipped, 1u);
}

TEST(BuildParallelCorpus, SplitsLongSentencesAtMiuBoundaries) {
  const auto toy = testing::MakeToy();
  Trie<char32_t> words;
  std::istringstream in("北京，欢迎，你\n");
  CorpusOptions options;
  options.max_words = 3;
  const auto corpus = BuildParallelCorpus(in, toy.dict, words, options);
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].Hanzi(), H("北京"));
  EXPECT_EQ(corpus[1].Hanzi(), H("欢迎你"));
}

TEST(BuildParallelCorpus, FixtureSentencesAreAligned) {
  const auto f = testing::LoadFixture();
  ASSERT_FALSE(f.corpus.empty());
  for (const auto& s : f.corpus) {
    ASSERT_EQ(s.pinyin_words.size(), s.hanzi_words.size());
    std::size_t syllables = 0, chars = 0;
    for (std::size_t w = 0; w < s.hanzi_words.size(); ++w) {
      EXPECT_EQ(s.pinyin_words[w].size(), s.hanzi_words[w].size());
      syllables += s.pinyin_words[w].size();
      chars += s.hanzi_words[w].size();
    }
    EXPECT_EQ(syllables, chars);
    EXPECT_LE(s.hanzi_words.size(), 60u);
  }
}

TEST(ParallelTsv, FormatParseRoundTrip) {
  ParallelSentence s{{{"bei", "jing"}, {"ni"}}, {H("北京"), H("你")}};
  EXPECT_EQ(FormatParallel(s), "bei'jing ni\t北京 你");
  EXPECT_EQ(ParseParallel(FormatParallel(s)), s);
  EXPECT_THROW(ParseParallel("bei'jing\t北"), DataError);
}

}  // namespace
}  // namespace openime
