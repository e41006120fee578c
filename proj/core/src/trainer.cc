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

#include "openime/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

std::string FindNonFinite(const P2CModel& model, std::span<const ParallelSentence> batch,
                          const Vocabulary& vocab, const CharPinyinDict& dict) {
  for (const auto& sentence : batch) {
    Tape tape(false);
    const double loss = model.BatchLoss(tape, std::span(&sentence, 1), vocab, dict, false, nullptr)
                            .value()[0];
    if (!std::isfinite(loss)) return FormatParallel(sentence);
  }
  return "(batch with dropout)";
}

}  // namespace

std::vector<EpochLog> Train(P2CModel& model, const std::vector<ParallelSentence>& corpus,
                            const Vocabulary& vocab, const CharPinyinDict& dict,
                            const TrainOptions& options, const EpochCallback& on_epoch) {
  if (corpus.empty()) throw ContractError("train: empty corpus");
  if (options.batch == 0) throw ContractError("train: batch must be >= 1");
  Rng rng(options.seed);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Parameter*> params, frozen_params;
  for (Parameter* p : model.Parameters()) {
    p->ZeroGrad();
    bool frozen = false;
    for (const auto& prefix : options.frozen_prefixes) frozen = frozen || p->name.starts_with(prefix);
    (frozen ? frozen_params : params).push_back(p);
  }
  std::vector<EpochLog> logs;
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochLog log;
    log.epoch = static_cast<int>(epoch);
    log.learning_rate = LearningRateForEpoch(log.epoch, options.learning_rate, options.halve_after);
    if (options.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    }
    double loss_sum = 0;
    std::size_t words = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += options.batch) {
      const std::size_t end = std::min(order.size(), begin + options.batch);
      std::vector<ParallelSentence> batch;
      for (std::size_t i = begin; i < end; ++i) batch.push_back(corpus[order[i]]);
      Tape tape;
      std::size_t batch_words = 0;
      Var loss = model.BatchLoss(tape, batch, vocab, dict, true, &rng, &batch_words);
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " on " +
                           FindNonFinite(model, batch, vocab, dict));
      }
      tape.Backward(loss);
      SgdStep(params, {static_cast<Real>(log.learning_rate), static_cast<Real>(options.clip_norm)});
      for (Parameter* p : frozen_params) p->ZeroGrad();
      loss_sum += value * static_cast<double>(batch.size());
      words += batch_words;
    }
    log.sentences = corpus.size();
    log.loss = loss_sum / static_cast<double>(corpus.size());
    log.word_loss = words ? loss_sum / static_cast<double>(words) : 0;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    logs.push_back(log);
    if (on_epoch && !on_epoch(log, model)) break;
  }
  return logs;
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
