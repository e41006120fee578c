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

#ifndef OPENIME_TRAINER_H_
#define OPENIME_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "openime/model.h"

namespace openime {
inline namespace OPENIME_NN_NS {

struct TrainOptions {
  std::size_t epochs = 13;
  std::size_t batch = 32;
  double learning_rate = 1.0;
  int halve_after = 9;
  double clip_norm = 5;
  bool shuffle = true;
  std::uint64_t seed = 1;
  // Parameters whose name starts with one of these are left untouched.
  std::vector<std::string> frozen_prefixes;
};

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0;
  double loss = 0;       // mean summed-over-words loss per sentence
  double word_loss = 0;  // mean loss per target word
  double seconds = 0;
  std::size_t sentences = 0;
};

// Called after every epoch; returning false stops training.
using EpochCallback = std::function<bool(const EpochLog&, const P2CModel&)>;

// Minibatch SGD with teacher forcing. Throws NumericError naming the
// offending sentence when a loss is not finite.
std::vector<EpochLog> Train(P2CModel& model, const std::vector<ParallelSentence>& corpus,
                            const Vocabulary& vocab, const CharPinyinDict& dict,
                            const TrainOptions& options, const EpochCallback& on_epoch = {});

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_TRAINER_H_
