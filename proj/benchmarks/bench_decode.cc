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

#include <fstream>
#include <string>

#include "openime/experiments.h"
#include "openime/metrics.h"

namespace {

using namespace openime;

struct Fixture {
  SyllableInventory inventory;
  CharPinyinDict dict;
  Vocabulary vocab;
  P2CModel model;
  std::vector<EvalItem> items;

  Fixture() {
    const std::string dir = OPENIME_FIXTURE_DIR;
    inventory = SyllableInventory::Load(dir + "/syllables.txt");
    dict = CharPinyinDict::Load(dir + "/char_pinyin.tsv", &inventory);
    auto lexicon = ReadLines(dir + "/lexicon.txt");
    std::ifstream in(dir + "/general.txt");
    auto corpus =
        BuildParallelCorpus(in, dict, VocabularyFromLexicon(lexicon, dict).hanzi_trie());
    vocab = BuildInitialVocabulary(corpus, lexicon, dict);
    // Weights do not change the cost of a decode.
    model = P2CModel(DeskProfile().model, inventory, dict, vocab);
    items = ItemsFromLines(ReadLines(dir + "/general.txt"), dict);
  }
};

const Fixture& Shared() {
  static const Fixture f;
  return f;
}

// Arg: kept fraction in thousandths.
void BM_DecodeKeepFraction(benchmark::State& state) {
  const Fixture& f = Shared();
  DecodeOptions options;
  options.keep_fraction = static_cast<double>(state.range(0)) / 1000.0;
  std::size_t i = 0;
  for (auto _ : state) {
    const EvalItem& item = f.items[i++ % f.items.size()];
    benchmark::DoNotOptimize(f.model.Decode(item.pinyin, f.vocab, f.dict, options));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DecodeKeepFraction)->Arg(1000)->Arg(889)->Arg(750)->Arg(500)
    ->Unit(benchmark::kMicrosecond);

void BM_DecodeBeam(benchmark::State& state) {
  const Fixture& f = Shared();
  DecodeOptions options;
  options.beam = static_cast<std::size_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    const EvalItem& item = f.items[i++ % f.items.size()];
    benchmark::DoNotOptimize(f.model.Decode(item.pinyin, f.vocab, f.dict, options));
  }
}
BENCHMARK(BM_DecodeBeam)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_TargetVocab(benchmark::State& state) {
  const Fixture& f = Shared();
  std::size_t i = 0;
  for (auto _ : state) {
    const EvalItem& item = f.items[i++ % f.items.size()];
    benchmark::DoNotOptimize(f.model.BuildTargetVocab(item.pinyin, f.vocab, f.dict));
  }
}
BENCHMARK(BM_TargetVocab);

}  // namespace

BENCHMARK_MAIN();
