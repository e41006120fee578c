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

// Attention encoder-decoder over pinyin words.
//
// Source: pinyin words (max-matched against the vocabulary) embedded by a
// syllable-level bank, then a stacked bi-LSTM. Target: hanzi words from a
// per-sentence restricted vocabulary, embedded by a character-level bank
// that is shared between decoder input and output layer. Decoding walks the
// syllable lattice, so every hypothesis spells out the input exactly.

#ifndef OPENIME_MODEL_H_
#define OPENIME_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "openime/autograd.h"
#include "openime/embedding.h"
#include "openime/optim.h"
#include "openime/pinyin.h"
#include "openime/vocab.h"

namespace openime {
inline namespace OPENIME_NN_NS {

struct ModelConfig {
  std::size_t layers = 3;
  std::size_t hidden = 500;      // LSTM cells per direction and in the decoder
  std::size_t embed = 200;       // ED
  std::size_t char_hidden = 100; // composer GRU width per direction
  double dropout = 0.3;
  double filter_ratio = 0.9;     // share of words that get a word-table row
  std::size_t common_words = 100;  // |Vc|
  double init_range = 0.08;        // weights start uniform in [-r, r]
  std::uint64_t seed = 1;

  bool operator==(const ModelConfig&) const = default;
};

// Row layout of the embedding tables. Unit row 0 is the unknown unit, so
// syllables[i] and chars[i] live at row i + 1.
struct ModelKeys {
  std::vector<std::string> syllables;
  std::vector<char32_t> chars;
  std::vector<SyllableSeq> pinyin_words;
  std::vector<HanziSeq> hanzi_words;

  bool operator==(const ModelKeys&) const = default;
};

// Frequent-word key lists for a vocabulary snapshot: the ceil(ratio * n)
// most frequent distinct words on each side.
ModelKeys MakeKeys(const SyllableInventory& inventory, const CharPinyinDict& dict,
                   const Vocabulary& vocab, double filter_ratio);

// Per-sentence output vocabulary with provenance bits per id.
struct TargetVocab {
  enum Source : std::uint8_t { kPrefix = 1, kCommon = 2, kReference = 4 };

  std::vector<HanziSeq> words;
  std::vector<std::uint8_t> sources;
  std::unordered_map<HanziSeq, std::size_t> index;

  std::size_t size() const { return words.size(); }
  std::optional<std::size_t> Find(const HanziSeq& word) const;
  std::size_t Insert(const HanziSeq& word, Source source);
};

struct LatticeArc {
  std::size_t target;  // id in the TargetVocab
  std::size_t length;  // syllables consumed
};

struct Candidate {
  HanziSeq text;
  double score = 0;  // total log-probability
  std::vector<HanziSeq> words;
};
using CandidateList = std::vector<Candidate>;

struct DecodeOptions {
  std::size_t beam = 10;
  std::size_t top_k = 10;
  // Share of the target vocabulary kept (by frequency) before decoding.
  double keep_fraction = 1.0;
};

struct DecoderState {
  std::vector<Var> h, c;
  Var feed;  // previous attentional state
};

class P2CModel;

// Encoder output and lattice for one input, plus incremental decoder steps.
// Used by beam search and by anything that needs to score lattice paths.
class DecodeSession {
 public:
  DecodeSession(const P2CModel& model, const SyllableSeq& syllables, const Vocabulary& vocab,
                const CharPinyinDict& dict, double keep_fraction = 1.0);
  DecodeSession(const DecodeSession&) = delete;
  DecodeSession& operator=(const DecodeSession&) = delete;

  using StateId = std::size_t;

  std::size_t length() const { return arcs_.size(); }
  const TargetVocab& target() const { return target_; }
  // Arcs leaving syllable position `cursor`.
  const std::vector<LatticeArc>& arcs(std::size_t cursor) const { return arcs_[cursor]; }
  StateId Initial() const { return 0; }
  // Log-probabilities over target() for the next word given `state` and
  // the previous word (-1 at sentence start), with the state reached after
  // consuming that previous word.
  std::pair<std::vector<double>, StateId> Step(StateId state, std::int64_t prev);

 private:
  const P2CModel& model_;
  Tape tape_{false};
  TargetVocab target_;
  std::vector<std::vector<LatticeArc>> arcs_;
  Var hbar_, keys_, inputs_, outputs_;
  std::vector<DecoderState> states_;
};

class P2CModel {
 public:
  P2CModel() = default;
  P2CModel(const ModelConfig& config, ModelKeys keys);
  P2CModel(const ModelConfig& config, const SyllableInventory& inventory,
           const CharPinyinDict& dict, const Vocabulary& vocab);

  const ModelConfig& config() const { return config_; }
  const ModelKeys& keys() const { return keys_; }

  std::vector<Parameter*> Parameters();
  std::vector<const Parameter*> Parameters() const;
  std::size_t ParameterCount() const;

  // Source-side word segmentation used for both training and decoding.
  static std::vector<SyllableSeq> SegmentSource(const SyllableSeq& syllables,
                                                const Vocabulary& vocab);

  // Vs (prefix candidates at every position) and Vc (common words), plus Vy
  // when `reference` is given.
  TargetVocab BuildTargetVocab(const SyllableSeq& syllables, const Vocabulary& vocab,
                               const CharPinyinDict& dict,
                               const std::vector<HanziSeq>* reference = nullptr) const;

  // Word representations. Target rows carry the output bias as an extra
  // last column when `with_bias`.
  Var SourceEmbeddings(Tape& tape, std::span<const SyllableSeq> words) const;
  Var TargetEmbeddings(Tape& tape, std::span<const HanziSeq> words, bool with_bias) const;

  // Encoder states, one 2H row per source word.
  Var Encode(Tape& tape, const Var& source, bool train, Rng* rng) const;
  // W_a applied to every encoder state, precomputed once per input.
  Var AttentionKeys(Tape& tape, const Var& hbar) const;
  DecoderState InitialState(Tape& tape) const;
  Var Bos(Tape& tape) const;
  // One decoder step: returns logits over the rows of `outputs` and the new
  // state.
  std::pair<Var, DecoderState> DecodeStep(Tape& tape, const Var& input, const DecoderState& state,
                                          const Var& hbar, const Var& keys, const Var& outputs,
                                          bool train, Rng* rng) const;

  // Mean over sentences of the summed per-word cross-entropy, teacher
  // forced, each sentence over its own training-mode target vocabulary.
  Var BatchLoss(Tape& tape, std::span<const ParallelSentence> batch, const Vocabulary& vocab,
                const CharPinyinDict& dict, bool train, Rng* rng,
                std::size_t* words = nullptr) const;

  // Lattice-constrained beam search.
  CandidateList Decode(const SyllableSeq& syllables, const Vocabulary& vocab,
                       const CharPinyinDict& dict, const DecodeOptions& options = {}) const;
  // Arg-max word at every step.
  Candidate Greedy(const SyllableSeq& syllables, const Vocabulary& vocab,
                   const CharPinyinDict& dict) const;

  std::vector<std::int32_t> SourceUnits(const SyllableSeq& word) const;
  std::vector<std::int32_t> TargetUnits(const HanziSeq& word) const;
  std::int64_t SourceWordRow(const SyllableSeq& word) const;
  std::int64_t TargetWordRow(const HanziSeq& word) const;

  void CheckSyllables(const SyllableSeq& syllables) const;

  EmbeddingBank source_bank;
  EmbeddingBank target_bank;
  Parameter out_bias;  // target word rows x 1
  std::vector<Parameter> encoder;  // per layer: fwd_w, fwd_b, bwd_w, bwd_b
  std::vector<Parameter> decoder;  // per layer: w, b
  Parameter attn_wa;   // 2H x H
  Parameter attn_wc;   // ED x 3H
  Parameter attn_bc;   // ED
  Parameter bos;       // ED

 private:
  void Init();
  void IndexKeys();

  ModelConfig config_;
  ModelKeys keys_;
  std::unordered_map<std::string, std::int32_t> syllable_ids_;
  std::unordered_map<char32_t, std::int32_t> char_ids_;
  std::unordered_map<std::string, std::int64_t> pinyin_rows_;
  std::unordered_map<HanziSeq, std::int64_t> hanzi_rows_;
};

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_MODEL_H_
