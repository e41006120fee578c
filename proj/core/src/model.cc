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

#include "openime/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

Parameter Uniform(const std::string& name, Shape shape, Rng& rng, double range) {
  Tensor t(std::move(shape));
  rng.FillUniform(t, -range, range);
  return Parameter(name, std::move(t));
}

Parameter LstmBias(const std::string& name, std::size_t hidden, Rng& rng, double range) {
  Parameter p = Uniform(name, {4 * hidden}, rng, range);
  for (std::size_t i = hidden; i < 2 * hidden; ++i) p.value[i] += 1;  // forget gate
  return p;
}

std::size_t KeepCount(double ratio, std::size_t n) {
  if (ratio <= 0) return 0;
  if (ratio >= 1) return n;
  return std::min(n, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9)));
}

std::string PinyinKey(const SyllableSeq& word) { return JoinSyllables(word); }

// Gate order: input, forget, candidate, output.
std::pair<Var, Var> LstmCell(Tape& tape, const Parameter& w, const Parameter& b, const Var& x,
                             const Var& h, const Var& c, std::size_t hidden) {
  const Var xh[] = {x, h};
  Var z = Add(Matmul(tape.Param(w), Concat(xh)), tape.Param(b));
  Var i = Sigmoid(Slice(z, 0, hidden));
  Var f = Sigmoid(Slice(z, hidden, 2 * hidden));
  Var g = Tanh(Slice(z, 2 * hidden, 3 * hidden));
  Var o = Sigmoid(Slice(z, 3 * hidden, 4 * hidden));
  Var c_next = Add(Mul(f, c), Mul(i, g));
  return {Mul(o, Tanh(c_next)), c_next};
}

std::vector<double> LogSoftmax(const Tensor& logits) {
  std::vector<double> out(logits.size());
  double mx = -INFINITY;
  for (Real x : logits.data()) mx = std::max(mx, static_cast<double>(x));
  double z = 0;
  for (Real x : logits.data()) z += std::exp(static_cast<double>(x) - mx);
  const double lse = mx + std::log(z);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(logits[i]) - lse;
  return out;
}

}  // namespace

ModelKeys MakeKeys(const SyllableInventory& inventory, const CharPinyinDict& dict,
                   const Vocabulary& vocab, double filter_ratio) {
  ModelKeys keys;
  keys.syllables.assign(inventory.syllables().begin(), inventory.syllables().end());
  keys.chars = dict.chars();
  auto hanzi = vocab.MostFrequentWords();
  hanzi.resize(KeepCount(filter_ratio, hanzi.size()));
  keys.hanzi_words = std::move(hanzi);
  auto pinyin = vocab.MostFrequentPinyin();
  pinyin.resize(KeepCount(filter_ratio, pinyin.size()));
  keys.pinyin_words = std::move(pinyin);
  return keys;
}

std::optional<std::size_t> TargetVocab::Find(const HanziSeq& word) const {
  auto it = index.find(word);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t TargetVocab::Insert(const HanziSeq& word, Source source) {
  auto [it, inserted] = index.emplace(word, words.size());
  if (inserted) {
    words.push_back(word);
    sources.push_back(source);
  } else {
    sources[it->second] |= source;
  }
  return it->second;
}

P2CModel::P2CModel(const ModelConfig& config, ModelKeys keys)
    : config_(config), keys_(std::move(keys)) {
  Init();
}

P2CModel::P2CModel(const ModelConfig& config, const SyllableInventory& inventory,
                   const CharPinyinDict& dict, const Vocabulary& vocab)
    : P2CModel(config, MakeKeys(inventory, dict, vocab, config.filter_ratio)) {}

void P2CModel::Init() {
  if (config_.layers == 0 || config_.hidden == 0 || config_.embed == 0 || config_.char_hidden == 0) {
    throw ContractError("model config: layers, hidden, embed and char_hidden must be >= 1");
  }
  if (config_.dropout < 0 || config_.dropout >= 1) throw ContractError("model config: dropout outside [0,1)");
  if (!(config_.init_range > 0)) throw ContractError("model config: init_range must be > 0");
  IndexKeys();
  Rng rng(config_.seed);
  const std::size_t h = config_.hidden, ed = config_.embed;
  const double r = config_.init_range;
  source_bank = EmbeddingBank("src", keys_.syllables.size() + 1, keys_.pinyin_words.size(), ed,
                              config_.char_hidden, rng, r);
  target_bank = EmbeddingBank("tgt", keys_.chars.size() + 1, keys_.hanzi_words.size(), ed,
                              config_.char_hidden, rng, r);
  out_bias = Parameter("out.bias", Tensor({keys_.hanzi_words.size(), 1}));
  encoder.clear();
  decoder.clear();
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::size_t in = l == 0 ? ed : 2 * h;
    const std::string p = "enc." + std::to_string(l);
    encoder.push_back(Uniform(p + ".fwd.w", {4 * h, in + h}, rng, r));
    encoder.push_back(LstmBias(p + ".fwd.b", h, rng, r));
    encoder.push_back(Uniform(p + ".bwd.w", {4 * h, in + h}, rng, r));
    encoder.push_back(LstmBias(p + ".bwd.b", h, rng, r));
  }
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::size_t in = l == 0 ? 2 * ed : h;
    const std::string p = "dec." + std::to_string(l);
    decoder.push_back(Uniform(p + ".w", {4 * h, in + h}, rng, r));
    decoder.push_back(LstmBias(p + ".b", h, rng, r));
  }
  attn_wa = Uniform("attn.wa", {2 * h, h}, rng, r);
  attn_wc = Uniform("attn.wc", {ed, 3 * h}, rng, r);
  attn_bc = Uniform("attn.bc", {ed}, rng, r);
  bos = Uniform("dec.bos", {ed}, rng, r);
}

void P2CModel::IndexKeys() {
  syllable_ids_.clear();
  char_ids_.clear();
  pinyin_rows_.clear();
  hanzi_rows_.clear();
  for (std::size_t i = 0; i < keys_.syllables.size(); ++i) {
    syllable_ids_.emplace(keys_.syllables[i], static_cast<std::int32_t>(i + 1));
  }
  for (std::size_t i = 0; i < keys_.chars.size(); ++i) {
    char_ids_.emplace(keys_.chars[i], static_cast<std::int32_t>(i + 1));
  }
  for (std::size_t i = 0; i < keys_.pinyin_words.size(); ++i) {
    pinyin_rows_.emplace(PinyinKey(keys_.pinyin_words[i]), static_cast<std::int64_t>(i));
  }
  for (std::size_t i = 0; i < keys_.hanzi_words.size(); ++i) {
    hanzi_rows_.emplace(keys_.hanzi_words[i], static_cast<std::int64_t>(i));
  }
}

std::vector<Parameter*> P2CModel::Parameters() {
  std::vector<Parameter*> out = source_bank.Parameters();
  for (Parameter* p : target_bank.Parameters()) out.push_back(p);
  out.push_back(&out_bias);
  for (Parameter& p : encoder) out.push_back(&p);
  for (Parameter& p : decoder) out.push_back(&p);
  out.push_back(&attn_wa);
  out.push_back(&attn_wc);
  out.push_back(&attn_bc);
  out.push_back(&bos);
  return out;
}

std::vector<const Parameter*> P2CModel::Parameters() const {
  auto mut = const_cast<P2CModel*>(this)->Parameters();
  return {mut.begin(), mut.end()};
}

std::size_t P2CModel::ParameterCount() const {
  std::size_t n = 0;
  for (const Parameter* p : Parameters()) n += p->value.size();
  return n;
}

std::vector<std::int32_t> P2CModel::SourceUnits(const SyllableSeq& word) const {
  std::vector<std::int32_t> ids;
  for (const auto& s : word) {
    auto it = syllable_ids_.find(s);
    ids.push_back(it == syllable_ids_.end() ? 0 : it->second);
  }
  return ids;
}

std::vector<std::int32_t> P2CModel::TargetUnits(const HanziSeq& word) const {
  std::vector<std::int32_t> ids;
  for (char32_t c : word) {
    auto it = char_ids_.find(c);
    ids.push_back(it == char_ids_.end() ? 0 : it->second);
  }
  return ids;
}

std::int64_t P2CModel::SourceWordRow(const SyllableSeq& word) const {
  auto it = pinyin_rows_.find(PinyinKey(word));
  return it == pinyin_rows_.end() ? -1 : it->second;
}

std::int64_t P2CModel::TargetWordRow(const HanziSeq& word) const {
  auto it = hanzi_rows_.find(word);
  return it == hanzi_rows_.end() ? -1 : it->second;
}

void P2CModel::CheckSyllables(const SyllableSeq& syllables) const {
  if (syllables.empty()) throw InputError("empty pinyin input", 0);
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    if (!syllable_ids_.contains(syllables[i])) {
      throw InputError("unknown syllable '" + syllables[i] + "'", i);
    }
  }
}

std::vector<SyllableSeq> P2CModel::SegmentSource(const SyllableSeq& syllables,
                                                 const Vocabulary& vocab) {
  return MaxMatchSegment(syllables, vocab.pinyin_trie());
}

TargetVocab P2CModel::BuildTargetVocab(const SyllableSeq& syllables, const Vocabulary& vocab,
                                       const CharPinyinDict& dict,
                                       const std::vector<HanziSeq>* reference) const {
  TargetVocab tv;
  const std::span<const std::string> all(syllables);
  for (std::size_t pos = 0; pos < syllables.size(); ++pos) {
    for (const auto& cand : CandidatesForPrefix(vocab, dict, all.subspan(pos))) {
      tv.Insert(cand.entry.hanzi, TargetVocab::kPrefix);
    }
  }
  for (const auto& w : vocab.MostFrequentWords(config_.common_words)) tv.Insert(w, TargetVocab::kCommon);
  if (reference) {
    for (const auto& w : *reference) tv.Insert(w, TargetVocab::kReference);
  }
  return tv;
}

Var P2CModel::SourceEmbeddings(Tape& tape, std::span<const SyllableSeq> words) const {
  std::vector<std::vector<std::int32_t>> units;
  std::vector<std::int64_t> rows;
  for (const auto& w : words) {
    units.push_back(SourceUnits(w));
    rows.push_back(SourceWordRow(w));
  }
  return source_bank.Compose(tape, units, rows);
}

Var P2CModel::TargetEmbeddings(Tape& tape, std::span<const HanziSeq> words, bool with_bias) const {
  std::vector<std::vector<std::int32_t>> units;
  std::vector<std::int64_t> rows;
  for (const auto& w : words) {
    units.push_back(TargetUnits(w));
    rows.push_back(TargetWordRow(w));
  }
  Var cwe = target_bank.Compose(tape, units, rows);
  if (!with_bias) return cwe;
  const Var parts[] = {cwe, GatherRows(tape.Param(out_bias), rows, Real(0))};
  return Concat(parts);
}

Var P2CModel::Encode(Tape& tape, const Var& source, bool train, Rng* rng) const {
  const std::size_t n = source.shape()[0], h = config_.hidden;
  const Real p = static_cast<Real>(config_.dropout);
  std::vector<Var> inputs;
  for (std::size_t i = 0; i < n; ++i) inputs.push_back(Row(source, i));
  for (std::size_t l = 0; l < config_.layers; ++l) {
    if (l > 0 && train && p > 0) {
      for (auto& x : inputs) x = Dropout(x, p, true, *rng);
    }
    const Parameter* w = &encoder[4 * l];
    std::vector<Var> fwd(n), bwd(n);
    Var hf = tape.Constant(Tensor({h})), cf = hf, hb = hf, cb = hf;
    for (std::size_t i = 0; i < n; ++i) {
      std::tie(hf, cf) = LstmCell(tape, w[0], w[1], inputs[i], hf, cf, h);
      fwd[i] = hf;
      const std::size_t j = n - 1 - i;
      std::tie(hb, cb) = LstmCell(tape, w[2], w[3], inputs[j], hb, cb, h);
      bwd[j] = hb;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Var both[] = {fwd[i], bwd[i]};
      inputs[i] = Concat(both);
    }
  }
  return Stack(inputs);
}

Var P2CModel::AttentionKeys(Tape& tape, const Var& hbar) const {
  return Matmul(hbar, tape.Param(attn_wa));
}

DecoderState P2CModel::InitialState(Tape& tape) const {
  DecoderState s;
  Var zero = tape.Constant(Tensor({config_.hidden}));
  s.h.assign(config_.layers, zero);
  s.c.assign(config_.layers, zero);
  s.feed = tape.Constant(Tensor({config_.embed}));
  return s;
}

Var P2CModel::Bos(Tape& tape) const { return tape.Param(bos); }

std::pair<Var, DecoderState> P2CModel::DecodeStep(Tape& tape, const Var& input,
                                                  const DecoderState& state, const Var& hbar,
                                                  const Var& keys, const Var& outputs, bool train,
                                                  Rng* rng) const {
  const std::size_t h = config_.hidden;
  const Real p = train ? static_cast<Real>(config_.dropout) : Real(0);
  DecoderState next;
  next.h.resize(config_.layers);
  next.c.resize(config_.layers);
  const Var first[] = {input, state.feed};
  Var x = Concat(first);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    if (l > 0 && p > 0) x = Dropout(x, p, true, *rng);
    std::tie(next.h[l], next.c[l]) =
        LstmCell(tape, decoder[2 * l], decoder[2 * l + 1], x, state.h[l], state.c[l], h);
    x = next.h[l];
  }
  const Var& top = next.h.back();
  Var alpha = Softmax(Matmul(keys, top));
  Var context = Matmul(alpha, hbar);
  const Var ch[] = {context, top};
  Var attentional = Tanh(Add(Matmul(tape.Param(attn_wc), Concat(ch)), tape.Param(attn_bc)));
  next.feed = attentional;
  Var out = p > 0 ? Dropout(attentional, p, true, *rng) : attentional;
  const Var with_one[] = {out, tape.Constant(Tensor({1}, Real(1)))};
  return {Matmul(outputs, Concat(with_one)), std::move(next)};
}

Var P2CModel::BatchLoss(Tape& tape, std::span<const ParallelSentence> batch, const Vocabulary& vocab,
                        const CharPinyinDict& dict, bool train, Rng* rng,
                        std::size_t* words) const {
  if (batch.empty()) throw ContractError("batch loss: empty batch");
  if (train && config_.dropout > 0 && rng == nullptr) throw ContractError("batch loss: dropout needs an rng");
  struct Item {
    std::vector<std::size_t> source;     // rows in the source union
    std::vector<std::size_t> outputs;    // target vocab -> rows in the target union
    std::vector<std::size_t> reference;  // reference words -> rows in the target union
    std::vector<std::size_t> labels;     // reference words -> ids in the target vocab
  };
  std::vector<Item> items;
  TargetVocab target_union;
  std::vector<SyllableSeq> source_union;
  std::unordered_map<std::string, std::size_t> source_index;
  for (const auto& sentence : batch) {
    sentence.Validate();
    if (sentence.hanzi_words.empty()) throw ContractError("batch loss: empty sentence");
    const SyllableSeq syllables = sentence.Syllables();
    Item item;
    for (const auto& w : SegmentSource(syllables, vocab)) {
      auto [it, inserted] = source_index.emplace(PinyinKey(w), source_union.size());
      if (inserted) source_union.push_back(w);
      item.source.push_back(it->second);
    }
    const TargetVocab tv = BuildTargetVocab(syllables, vocab, dict, &sentence.hanzi_words);
    for (const auto& w : tv.words) item.outputs.push_back(target_union.Insert(w, TargetVocab::kPrefix));
    for (const auto& w : sentence.hanzi_words) {
      item.reference.push_back(*target_union.Find(w));
      item.labels.push_back(*tv.Find(w));
    }
    items.push_back(std::move(item));
  }
  Var source_all = SourceEmbeddings(tape, source_union);
  Var target_all = TargetEmbeddings(tape, target_union.words, true);
  Var input_all = Slice(target_all, 0, config_.embed);
  Var total;
  std::size_t count = 0;
  for (const Item& item : items) {
    std::vector<std::int64_t> ids(item.source.begin(), item.source.end());
    Var hbar = Encode(tape, GatherRows(source_all, ids), train, rng);
    Var keys = AttentionKeys(tape, hbar);
    ids.assign(item.outputs.begin(), item.outputs.end());
    Var outputs = GatherRows(target_all, ids);
    ids.assign(item.reference.begin(), item.reference.end());
    Var inputs = GatherRows(input_all, ids);
    DecoderState state = InitialState(tape);
    Var prev = Bos(tape);
    for (std::size_t t = 0; t < item.labels.size(); ++t) {
      auto [logits, next] = DecodeStep(tape, prev, state, hbar, keys, outputs, train, rng);
      Var loss = CrossEntropy(logits, item.labels[t]);
      total = total.valid() ? Add(total, loss) : loss;
      state = std::move(next);
      prev = Row(inputs, t);
    }
    count += item.labels.size();
  }
  if (words) *words = count;
  return Scale(total, Real(1) / static_cast<Real>(batch.size()));
}

DecodeSession::DecodeSession(const P2CModel& model, const SyllableSeq& syllables,
                             const Vocabulary& vocab, const CharPinyinDict& dict,
                             double keep_fraction)
    : model_(model) {
  model.CheckSyllables(syllables);
  if (!(keep_fraction > 0 && keep_fraction <= 1)) {
    throw ContractError("decode: keep fraction must be in (0,1]");
  }
  target_ = model.BuildTargetVocab(syllables, vocab, dict);
  const std::span<const std::string> all(syllables);
  arcs_.resize(syllables.size());
  for (std::size_t pos = 0; pos < syllables.size(); ++pos) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& cand : CandidatesForPrefix(vocab, dict, all.subspan(pos))) {
      const LatticeArc arc{*target_.Find(cand.entry.hanzi), cand.entry.pinyin.size()};
      if (seen.emplace(arc.target, arc.length).second) arcs_[pos].push_back(arc);
    }
  }
  if (keep_fraction < 1) {
    // Keep the most frequent share, plus the best single character at every
    // position so the lattice stays connected.
    const std::size_t n = target_.size();
    std::vector<std::size_t> order(n);
    std::vector<std::uint64_t> freq(n);
    for (std::size_t i = 0; i < n; ++i) {
      order[i] = i;
      freq[i] = vocab.HanziFrequency(target_.words[i]);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (freq[a] != freq[b]) return freq[a] > freq[b];
      return target_.words[a] < target_.words[b];
    });
    std::vector<bool> keep(n, false);
    const std::size_t kept = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(n) - 1e-9)));
    for (std::size_t i = 0; i < kept && i < n; ++i) keep[order[i]] = true;
    for (const auto& arcs : arcs_) {
      std::optional<std::size_t> best;
      for (const auto& arc : arcs) {
        if (arc.length != 1) continue;
        if (!best || freq[arc.target] > freq[*best]) best = arc.target;
      }
      if (best) keep[*best] = true;
    }
    TargetVocab pruned;
    std::vector<std::optional<std::size_t>> remap(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!keep[i]) continue;
      remap[i] = pruned.Insert(target_.words[i], TargetVocab::kPrefix);
      pruned.sources[*remap[i]] = target_.sources[i];
    }
    for (auto& arcs : arcs_) {
      std::vector<LatticeArc> kept_arcs;
      for (const auto& arc : arcs) {
        if (remap[arc.target]) kept_arcs.push_back({*remap[arc.target], arc.length});
      }
      arcs = std::move(kept_arcs);
    }
    target_ = std::move(pruned);
  }
  for (std::size_t pos = 0; pos < arcs_.size(); ++pos) {
    if (arcs_[pos].empty()) {
      throw InputError("no character reads '" + syllables[pos] + "'", pos);
    }
  }
  const auto source = P2CModel::SegmentSource(syllables, vocab);
  hbar_ = model.Encode(tape_, model.SourceEmbeddings(tape_, source), false, nullptr);
  keys_ = model.AttentionKeys(tape_, hbar_);
  outputs_ = model.TargetEmbeddings(tape_, target_.words, true);
  inputs_ = Slice(outputs_, 0, model.config().embed);
  states_.push_back(model.InitialState(tape_));
}

std::pair<std::vector<double>, DecodeSession::StateId> DecodeSession::Step(StateId state,
                                                                          std::int64_t prev) {
  Var input = prev < 0 ? model_.Bos(tape_) : Row(inputs_, static_cast<std::size_t>(prev));
  auto [logits, next] = model_.DecodeStep(tape_, input, states_.at(state), hbar_, keys_, outputs_,
                                          false, nullptr);
  states_.push_back(std::move(next));
  return {LogSoftmax(logits.value()), states_.size() - 1};
}

namespace {

struct Hypothesis {
  double score = 0;
  std::size_t cursor = 0;
  DecodeSession::StateId state = 0;
  std::int64_t last = -1;
  std::vector<std::size_t> words;
};

Candidate MakeCandidate(const TargetVocab& target, const Hypothesis& h) {
  Candidate c;
  c.score = h.score;
  for (std::size_t id : h.words) {
    c.words.push_back(target.words[id]);
    c.text += target.words[id];
  }
  return c;
}

bool Better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.text != b.text) return a.text < b.text;
  return a.words < b.words;
}

}  // namespace

CandidateList P2CModel::Decode(const SyllableSeq& syllables, const Vocabulary& vocab,
                               const CharPinyinDict& dict, const DecodeOptions& options) const {
  if (options.beam == 0 || options.top_k == 0) throw ContractError("decode: beam and K must be >= 1");
  DecodeSession session(*this, syllables, vocab, dict, options.keep_fraction);
  const std::size_t n = session.length();
  std::map<HanziSeq, Candidate> finished;
  std::vector<Hypothesis> beam(1);
  while (!beam.empty()) {
    std::vector<Hypothesis> expansions;
    for (const Hypothesis& h : beam) {
      auto [logp, state] = session.Step(h.state, h.last);
      for (const LatticeArc& arc : session.arcs(h.cursor)) {
        Hypothesis e;
        e.score = h.score + logp[arc.target];
        e.cursor = h.cursor + arc.length;
        e.state = state;
        e.last = static_cast<std::int64_t>(arc.target);
        e.words = h.words;
        e.words.push_back(arc.target);
        expansions.push_back(std::move(e));
      }
    }
    std::stable_sort(expansions.begin(), expansions.end(), [](const Hypothesis& a, const Hypothesis& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.words < b.words;
    });
    if (expansions.size() > options.beam) expansions.resize(options.beam);
    beam.clear();
    for (auto& e : expansions) {
      if (e.cursor == n) {
        Candidate c = MakeCandidate(session.target(), e);
        auto it = finished.find(c.text);
        if (it == finished.end()) {
          finished.emplace(c.text, std::move(c));
        } else if (Better(c, it->second)) {
          it->second = std::move(c);
        }
      } else {
        beam.push_back(std::move(e));
      }
    }
  }
  CandidateList out;
  for (auto& [text, c] : finished) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), Better);
  if (out.size() > options.top_k) out.resize(options.top_k);
  return out;
}

Candidate P2CModel::Greedy(const SyllableSeq& syllables, const Vocabulary& vocab,
                           const CharPinyinDict& dict) const {
  DecodeSession session(*this, syllables, vocab, dict);
  Hypothesis h;
  while (h.cursor < session.length()) {
    auto [logp, state] = session.Step(h.state, h.last);
    const LatticeArc* best = nullptr;
    for (const LatticeArc& arc : session.arcs(h.cursor)) {
      if (!best || logp[arc.target] > logp[best->target] ||
          (logp[arc.target] == logp[best->target] && arc.target < best->target)) {
        best = &arc;
      }
    }
    h.score += logp[best->target];
    h.cursor += best->length;
    h.state = state;
    h.last = static_cast<std::int64_t>(best->target);
    h.words.push_back(best->target);
  }
  return MakeCandidate(session.target(), h);
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
