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


// Built against the 64-bit numeric library.

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "gradcheck.h"
#include "lattice_oracle.h"
#include "openime/error.h"
#include "openime/model.h"
#include "toy.h"

namespace openime {
namespace {

using testing::H;
using testing::MakeToy;
using testing::RefLogSoftmax;
using testing::ShortInputs;

ModelConfig TinyConfig() {
  ModelConfig c;
  c.layers = 2;
  c.hidden = 3;
  c.embed = 4;
  c.char_hidden = 2;
  c.dropout = 0;
  c.filter_ratio = 0.5;
  c.common_words = 2;
  c.seed = 11;
  return c;
}

ParallelSentence Sentence(const std::string& line) { return ParseParallel(line); }

// At the default init scale attention is nearly uniform and source-side
// gradients sit near round-off, so finite differences need wider weights.
void Spread(P2CModel& model) {
  Rng rng(21);
  for (Parameter* p : model.Parameters()) rng.FillUniform(p->value, -0.5, 0.5);
}

TEST(Model, ComposedStepPassesFiniteDifferences) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  Spread(model);
  const std::vector<ParallelSentence> batch = {Sentence("bei'jing huan'ying\t北京 欢迎")};
  const auto report = testing::CheckGradients(model.Parameters(), [&](Tape& t) {
    return model.BatchLoss(t, batch, toy.vocab, toy.dict, false, nullptr);
  });
  EXPECT_LE(report.max_rel_error, 1e-3) << report.worst;
}

TEST(Model, ComposedStepWithDropoutPassesFiniteDifferences) {
  auto toy = MakeToy();
  ModelConfig config = TinyConfig();
  config.dropout = 0.3;
  P2CModel model(config, toy.inventory, toy.dict, toy.vocab);
  Spread(model);
  const std::vector<ParallelSentence> batch = {Sentence("bei'jing ni\t背景 你")};
  const auto report = testing::CheckGradients(model.Parameters(), [&](Tape& t) {
    Rng rng(5);  // same mask for every evaluation
    return model.BatchLoss(t, batch, toy.vocab, toy.dict, true, &rng);
  });
  EXPECT_LE(report.max_rel_error, 1e-3) << report.worst;
}

// Standalone LSTM cell from a zero state, gate order i f g o.
std::vector<double> HandLstm(const Tensor& w, const Tensor& b, const std::vector<double>& x,
                             std::size_t hidden) {
  const std::size_t cols = w.cols();
  std::vector<double> z(4 * hidden);
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    z[r] = b[r];
    for (std::size_t k = 0; k < x.size(); ++k) z[r] += w[r * cols + k] * x[k];
  }
  auto sig = [](double v) { return 1 / (1 + std::exp(-v)); };
  std::vector<double> h(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double c = sig(z[j]) * std::tanh(z[2 * hidden + j]);
    h[j] = sig(z[3 * hidden + j]) * std::tanh(c);
  }
  return h;
}

struct EncoderFixture {
  P2CModel model;
  Tensor x;  // 2 x ED
  std::vector<double> Row(std::size_t i) const {
    std::vector<double> r;
    for (std::size_t k = 0; k < x.cols(); ++k) r.push_back(x[i * x.cols() + k]);
    return r;
  }
};

EncoderFixture OneLayerEncoder() {
  auto toy = MakeToy();
  ModelConfig config = TinyConfig();
  config.layers = 1;
  EncoderFixture f{P2CModel(config, toy.inventory, toy.dict, toy.vocab), Tensor({2, config.embed})};
  Rng rng(3);
  rng.FillUniform(f.x, -1, 1);
  return f;
}

void ZeroRecurrent(Parameter& w, std::size_t in) {
  for (std::size_t r = 0; r < w.value.rows(); ++r) {
    for (std::size_t c = in; c < w.value.cols(); ++c) w.value[r * w.value.cols() + c] = 0;
  }
}

TEST(Model, EncoderStepMatchesHandLstm) {
  auto f = OneLayerEncoder();
  const std::size_t h = f.model.config().hidden, ed = f.model.config().embed;
  ZeroRecurrent(f.model.encoder[0], ed);
  ZeroRecurrent(f.model.encoder[2], ed);
  Tape t(false);
  const Tensor out = f.model.Encode(t, t.Constant(f.x), false, nullptr).value();
  ASSERT_EQ(out.shape(), (Shape{2, 2 * h}));
  const auto fwd0 = HandLstm(f.model.encoder[0].value, f.model.encoder[1].value, f.Row(0), h);
  const auto bwd1 = HandLstm(f.model.encoder[2].value, f.model.encoder[3].value, f.Row(1), h);
  for (std::size_t j = 0; j < h; ++j) {
    EXPECT_NEAR(out[j], fwd0[j], 1e-6);
    EXPECT_NEAR(out[2 * h + h + j], bwd1[j], 1e-6);
  }
  // Reversed input: the forward direction now starts from the second word.
  Tensor rev({2, ed});
  for (std::size_t k = 0; k < ed; ++k) {
    rev[k] = f.x[ed + k];
    rev[ed + k] = f.x[k];
  }
  Tape t2(false);
  const Tensor out_rev = f.model.Encode(t2, t2.Constant(rev), false, nullptr).value();
  const auto fwd_rev = HandLstm(f.model.encoder[0].value, f.model.encoder[1].value, f.Row(1), h);
  const auto bwd_rev = HandLstm(f.model.encoder[2].value, f.model.encoder[3].value, f.Row(0), h);
  for (std::size_t j = 0; j < h; ++j) {
    EXPECT_NEAR(out_rev[j], fwd_rev[j], 1e-6);
    EXPECT_NEAR(out_rev[2 * h + h + j], bwd_rev[j], 1e-6);
  }
}

TEST(Model, ReversalSwapsDirectionsWithTiedWeights) {
  auto f = OneLayerEncoder();
  const std::size_t h = f.model.config().hidden, ed = f.model.config().embed;
  f.model.encoder[2].value = f.model.encoder[0].value;
  f.model.encoder[3].value = f.model.encoder[1].value;
  Tensor rev({2, ed});
  for (std::size_t k = 0; k < ed; ++k) {
    rev[k] = f.x[ed + k];
    rev[ed + k] = f.x[k];
  }
  Tape t(false);
  const Tensor a = f.model.Encode(t, t.Constant(f.x), false, nullptr).value();
  const Tensor b = f.model.Encode(t, t.Constant(rev), false, nullptr).value();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      EXPECT_NEAR(a[i * 2 * h + j], b[(1 - i) * 2 * h + h + j], 1e-12);
      EXPECT_NEAR(a[i * 2 * h + h + j], b[(1 - i) * 2 * h + j], 1e-12);
    }
  }
}

TEST(Model, EncoderIsDeterministicWithoutDropout) {
  auto f = OneLayerEncoder();
  Tape t(false);
  const Tensor first = f.model.Encode(t, t.Constant(f.x), false, nullptr).value();
  EXPECT_EQ(first, f.model.Encode(t, t.Constant(f.x), false, nullptr).value());
  Tape t1(false);
  const Tensor one({1, f.model.config().embed}, 0.5);
  EXPECT_EQ(f.model.Encode(t1, t1.Constant(one), false, nullptr).shape(),
            (Shape{1, 2 * f.model.config().hidden}));
}

TEST(Model, SingleWordTargetHasProbabilityOne) {
  auto inv = SyllableInventory::FromList({"ni"});
  std::istringstream in("你\tni\n");
  auto dict = CharPinyinDict::Parse(in, "one", &inv);
  Vocabulary vocab;
  vocab.Add(BilingualEntry{{"ni"}, H("你"), 1, 0});
  ModelConfig config = TinyConfig();
  config.common_words = 0;
  P2CModel model(config, inv, dict, vocab);
  DecodeSession session(model, {"ni"}, vocab, dict);
  ASSERT_EQ(session.target().size(), 1u);
  EXPECT_EQ(session.Step(session.Initial(), -1).first[0], 0.0);
  const auto out = model.Decode({"ni"}, vocab, dict);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].text, H("你"));
  EXPECT_EQ(out[0].score, 0.0);
}

TEST(Model, ZeroWeightsGiveUniformDistribution) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  for (Parameter* p : model.Parameters()) p->value.Fill(0);
  DecodeSession session(model, {"bei", "jing", "ni"}, toy.vocab, toy.dict);
  const double m = static_cast<double>(session.target().size());
  auto [logp, state] = session.Step(session.Initial(), -1);
  for (double v : logp) EXPECT_NEAR(v, -std::log(m), 1e-12);
  auto [logp2, state2] = session.Step(state, 0);
  for (double v : logp2) EXPECT_NEAR(v, -std::log(m), 1e-12);
}

TEST(Model, RestrictedDistributionEqualsMaskedFullSoftmax) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  std::vector<HanziSeq> all;
  for (const auto& e : toy.vocab.entries()) all.push_back(e.hanzi);
  for (char32_t c : toy.dict.chars()) all.push_back(HanziSeq(1, c));
  const std::vector<std::int64_t> subset = {0, 2, 3, 7, 9};
  Tape t(false);
  const std::vector<SyllableSeq> src = {{"bei", "jing"}, {"ni"}};
  Var hbar = model.Encode(t, model.SourceEmbeddings(t, src), false, nullptr);
  Var keys = model.AttentionKeys(t, hbar);
  Var full = model.TargetEmbeddings(t, all, true);
  Var part = GatherRows(full, subset);
  const DecoderState s0 = model.InitialState(t);
  const Tensor lf = model.DecodeStep(t, model.Bos(t), s0, hbar, keys, full, false, nullptr).first.value();
  const Tensor lp = model.DecodeStep(t, model.Bos(t), s0, hbar, keys, part, false, nullptr).first.value();
  Tensor masked({all.size()}, -INFINITY);
  for (auto id : subset) masked[id] = lf[id];
  const auto a = RefLogSoftmax(lp);
  const auto b = RefLogSoftmax(masked);
  double total = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    EXPECT_NEAR(a[i], b[subset[i]], 1e-12);
    total += std::exp(a[i]);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Model, TargetVocabContainsLatticeWordsAndReference) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  const SyllableSeq py = {"bei", "jing", "huan", "ying", "ni"};
  const TargetVocab decode = model.BuildTargetVocab(py, toy.vocab, toy.dict);
  for (const char* w : {"北京", "背景", "欢迎", "幻影", "你"}) {
    ASSERT_TRUE(decode.Find(H(w))) << w;
    EXPECT_TRUE(decode.sources[*decode.Find(H(w))] & TargetVocab::kPrefix);
  }
  for (auto s : decode.sources) EXPECT_FALSE(s & TargetVocab::kReference);
  // Vc: the two most frequent words.
  EXPECT_TRUE(decode.sources[*decode.Find(H("你"))] & TargetVocab::kCommon);
  EXPECT_TRUE(decode.sources[*decode.Find(H("北京"))] & TargetVocab::kCommon);
  EXPECT_FALSE(decode.sources[*decode.Find(H("欢迎"))] & TargetVocab::kCommon);

  // A reference word outside the lattice vocabulary still lands in V̂.
  const std::vector<HanziSeq> ref = {H("被惊"), H("欢迎"), H("你")};
  const TargetVocab train = model.BuildTargetVocab(py, toy.vocab, toy.dict, &ref);
  for (const auto& w : ref) {
    ASSERT_TRUE(train.Find(w));
    EXPECT_TRUE(train.sources[*train.Find(w)] & TargetVocab::kReference);
  }
  EXPECT_EQ(train.size(), decode.size() + 1);
}

TEST(Model, TableWordsAmongCandidates) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  const auto out = model.Decode({"bei", "jing"}, toy.vocab, toy.dict, {.beam = 20, .top_k = 20});
  std::set<HanziSeq> texts;
  for (const auto& c : out) texts.insert(c.text);
  // 北京 背景 plus the four character combinations.
  EXPECT_EQ(texts, (std::set<HanziSeq>{H("北京"), H("背景"), H("北景"), H("背京")}));
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(out[i - 1].score, out[i].score);
}

TEST(Model, UnknownSyllableFailsBeforeDecoding) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  try {
    model.Decode({"bei", "xyz"}, toy.vocab, toy.dict);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.offset(), 1u);
  }
  EXPECT_THROW(model.Decode({}, toy.vocab, toy.dict), InputError);
}

TEST(Model, BeamEqualsExhaustiveEnumeration) {
  auto toy = MakeToy();
  ASSERT_LE(toy.vocab.size() + toy.dict.size(), 30u);
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  const std::size_t k = 10;
  int inputs = 0;
  for (const auto& py : ShortInputs(toy.inventory)) {
    const auto e = testing::EnumerateLattice(model, py, toy.vocab, toy.dict, k);
    const auto& expected = e.top;
    const auto got = model.Decode(py, toy.vocab, toy.dict, {.beam = e.paths, .top_k = k});
    ASSERT_EQ(got.size(), expected.size()) << JoinSyllables(py);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].text, expected[i].second) << JoinSyllables(py) << " rank " << i;
      EXPECT_NEAR(got[i].score, expected[i].first, 1e-9) << JoinSyllables(py);
    }
    ++inputs;
  }
  EXPECT_EQ(inputs, 5 + 25 + 125);
}

TEST(Model, BeamOfOneEqualsGreedy) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  for (const auto& py : ShortInputs(toy.inventory)) {
    const auto beam = model.Decode(py, toy.vocab, toy.dict, {.beam = 1, .top_k = 5});
    const auto greedy = model.Greedy(py, toy.vocab, toy.dict);
    ASSERT_EQ(beam.size(), 1u);
    EXPECT_EQ(beam[0].text, greedy.text);
    EXPECT_EQ(beam[0].words, greedy.words);
    EXPECT_DOUBLE_EQ(beam[0].score, greedy.score);
  }
}

TEST(Model, CandidatesConsumeInputExactly) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    SyllableSeq py;
    const std::size_t n = 1 + rng.Below(7);
    const std::vector<std::string> syl(toy.inventory.syllables().begin(), toy.inventory.syllables().end());
    for (std::size_t i = 0; i < n; ++i) py.push_back(syl[rng.Below(syl.size())]);
    const auto out = model.Decode(py, toy.vocab, toy.dict, {.beam = 4, .top_k = 10});
    ASSERT_FALSE(out.empty());
    for (const auto& c : out) {
      ASSERT_EQ(c.text.size(), py.size());
      EXPECT_TRUE(std::isfinite(c.score));
      for (std::size_t i = 0; i < py.size(); ++i) {
        const SyllableSeq* readings = toy.dict.Pronunciations(c.text[i]);
        ASSERT_NE(readings, nullptr);
        EXPECT_NE(std::find(readings->begin(), readings->end(), py[i]), readings->end());
      }
    }
  }
}

TEST(Model, PruningKeepsLatticeConnected) {
  auto toy = MakeToy();
  P2CModel model(TinyConfig(), toy.inventory, toy.dict, toy.vocab);
  const SyllableSeq py = {"bei", "jing", "huan", "ying", "ni"};
  DecodeSession full(model, py, toy.vocab, toy.dict, 1.0);
  DecodeSession pruned(model, py, toy.vocab, toy.dict, 0.25);
  EXPECT_LT(pruned.target().size(), full.target().size());
  for (std::size_t pos = 0; pos < py.size(); ++pos) EXPECT_FALSE(pruned.arcs(pos).empty());
  EXPECT_FALSE(model.Decode(py, toy.vocab, toy.dict, {.keep_fraction = 0.25}).empty());
}

TEST(Embedding, OnesWordTableGivesCharacterEmbedding) {
  Rng rng(2);
  EmbeddingBank bank("b", 6, 3, 4, 2, rng);
  bank.word_table.value.Fill(1);
  const std::vector<std::vector<std::int32_t>> units = {{1, 2}, {3}, {4, 5, 1}};
  const std::vector<std::int64_t> rows = {0, -1, 2};
  Tape t(false);
  const Tensor cwe = bank.Compose(t, units, rows).value();
  EXPECT_EQ(cwe, bank.ComposeChars(t, units).value());
}

TEST(Embedding, WordsWithoutRowUseCharactersOnly) {
  Rng rng(2);
  EmbeddingBank bank("b", 6, 3, 4, 2, rng);
  const std::vector<std::vector<std::int32_t>> units = {{1, 2}, {3}};
  const std::vector<std::int64_t> rows = {1, -1};
  Tape t(false);
  const Tensor cwe = bank.Compose(t, units, rows).value();
  const Tensor ce = bank.ComposeChars(t, units).value();
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(cwe[4 + j], ce[4 + j]);
    EXPECT_DOUBLE_EQ(cwe[j], ce[j] * bank.word_table.value[4 + j]);
  }
}

TEST(Embedding, FilterRatioEndpoints) {
  auto toy = MakeToy();
  const auto none = MakeKeys(toy.inventory, toy.dict, toy.vocab, 0.0);
  const auto all = MakeKeys(toy.inventory, toy.dict, toy.vocab, 1.0);
  const auto half = MakeKeys(toy.inventory, toy.dict, toy.vocab, 0.5);
  EXPECT_TRUE(none.hanzi_words.empty());
  EXPECT_TRUE(none.pinyin_words.empty());
  EXPECT_EQ(all.hanzi_words.size(), 6u);
  EXPECT_EQ(all.pinyin_words.size(), 4u);
  EXPECT_EQ(half.hanzi_words, (std::vector<HanziSeq>{H("你"), H("北京"), H("欢迎")}));
  ModelConfig config = TinyConfig();
  config.filter_ratio = 0;
  P2CModel model(config, toy.inventory, toy.dict, toy.vocab);
  EXPECT_EQ(model.TargetWordRow(H("北京")), -1);
  config.filter_ratio = 1;
  P2CModel full(config, toy.inventory, toy.dict, toy.vocab);
  for (const auto& e : toy.vocab.entries()) EXPECT_GE(full.TargetWordRow(e.hanzi), 0);
}

TEST(Model, UntrainedLossIsNearLogOfTargetSize) {
  auto toy = MakeToy();
  ModelConfig config = TinyConfig();
  config.hidden = 16;
  config.embed = 16;
  P2CModel model(config, toy.inventory, toy.dict, toy.vocab);
  for (const char* line : {"bei'jing huan'ying ni\t北京 欢迎 你", "huan'ying\t幻影"}) {
    const ParallelSentence s = Sentence(line);
    const std::vector<ParallelSentence> batch = {s};
    const auto tv = model.BuildTargetVocab(s.Syllables(), toy.vocab, toy.dict, &s.hanzi_words);
    Tape t(false);
    std::size_t words = 0;
    const double loss = model.BatchLoss(t, batch, toy.vocab, toy.dict, false, nullptr, &words).value()[0];
    const double expected = static_cast<double>(words) * std::log(static_cast<double>(tv.size()));
    EXPECT_NEAR(loss / expected, 1.0, 0.05) << line;
  }
}

}  // namespace
}  // namespace openime
