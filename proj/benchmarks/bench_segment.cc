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


#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "openime/pinyin.h"
#include "openime/utf8.h"
#include "openime/vocab.h"

namespace {

using namespace openime;

struct Data {
  SyllableInventory inventory;
  CharPinyinDict dict;
  Vocabulary vocab;
  std::vector<std::string> lines;
  std::vector<std::string> letters;

  Data() {
    const std::string dir = OPENIME_FIXTURE_DIR;
    inventory = SyllableInventory::Load(dir + "/syllables.txt");
    dict = CharPinyinDict::Load(dir + "/char_pinyin.tsv", &inventory);
    vocab = VocabularyFromLexicon(ReadLines(dir + "/lexicon.txt"), dict);
    lines = ReadLines(dir + "/general.txt");
    for (const auto& line : lines) {
      std::string l;
      for (const auto& s : AnnotatePinyin(line, dict)) l += s;
      letters.push_back(l);
    }
  }
};

const Data& Shared() {
  static const Data d;
  return d;
}

void BM_HanziMaxMatch(benchmark::State& state) {
  const Data& d = Shared();
  std::vector<std::u32string> text;
  for (const auto& l : d.lines) text.push_back(Utf8ToU32(l));
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(MaxMatchSegment(text[i++ % text.size()], d.vocab.hanzi_trie()));
}
BENCHMARK(BM_HanziMaxMatch);

void BM_PinyinMaxMatch(benchmark::State& state) {
  const Data& d = Shared();
  std::vector<SyllableSeq> text;
  for (const auto& l : d.letters) text.push_back(d.inventory.Segment(l));
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(MaxMatchSegment(text[i++ % text.size()], d.vocab.pinyin_trie()));
}
BENCHMARK(BM_PinyinMaxMatch);

void BM_SyllableSplit(benchmark::State& state) {
  const Data& d = Shared();
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(d.inventory.Segment(d.letters[i++ % d.letters.size()]));
}
BENCHMARK(BM_SyllableSplit);

void BM_AnnotatePinyin(benchmark::State& state) {
  const Data& d = Shared();
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(AnnotatePinyin(d.lines[i++ % d.lines.size()], d.dict));
}
BENCHMARK(BM_AnnotatePinyin);

}  // namespace

BENCHMARK_MAIN();
