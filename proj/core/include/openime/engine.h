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


// Interactive conversion loop with online vocabulary growth and periodic
// online training.
//
// Converts read an immutable (model, vocabulary) snapshot and may run from
// any thread. Submissions are serialized; each one publishes a new
// vocabulary snapshot, and every `train_every` submissions a copy of the
// model is trained on the buffered turns and swapped in.

#ifndef OPENIME_ENGINE_H_
#define OPENIME_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "openime/model.h"
#include "openime/pinyin.h"
#include "openime/vocab.h"

namespace openime {
inline namespace OPENIME_NN_NS {

struct OnlineConfig {
  std::size_t train_every = 64;
  std::size_t online_batch = 1;
  std::size_t online_epochs = 1;
  // Replay every accepted turn so far instead of only the buffer.
  bool full_replay = false;
  double learning_rate = 0.1;
  double clip_norm = 5;
  // Source bank and encoder stay fixed during online training.
  bool freeze_encoder = false;
  // No vocabulary updates and no training.
  bool frozen = false;
  DecodeOptions decode;
  UpdateOptions update;
  std::uint64_t seed = 1;
};

// A conversion waiting for the user's choice.
struct PendingTurn {
  std::uint64_t turn_id = 0;
  SyllableSeq pinyin;
  CandidateList shown;
};

struct SessionTurn {
  std::uint64_t turn_id = 0;
  SyllableSeq pinyin;
  CandidateList shown;
  HanziSeq choice;
  std::optional<std::size_t> rank_of_chosen;  // 1-based within shown
  UpdateReport update;
  std::size_t vocab_size = 0;
  bool flushed = false;
};

struct EngineStats {
  std::size_t vocab_size = 0;
  std::uint64_t turns = 0;  // accepted submissions
  std::uint64_t flushes = 0;
  std::optional<std::uint64_t> last_flush_turn;
  std::size_t buffered = 0;
};

class OnlineEngine {
 public:
  OnlineEngine(P2CModel model, Vocabulary vocab, SyllableInventory inventory, CharPinyinDict dict,
               OnlineConfig config = {});
  OnlineEngine(const OnlineEngine&) = delete;
  OnlineEngine& operator=(const OnlineEngine&) = delete;

  // Letters ("beijing") or apostrophe-separated syllables ("bei'jing").
  // Throws InputError with the byte offset that cannot be segmented.
  SyllableSeq ParsePinyin(std::string_view input) const;

  // Pure lookup on the current snapshot.
  CandidateList Candidates(const SyllableSeq& syllables) const;

  // Converts and remembers the turn for a later Submit().
  PendingTurn Convert(std::string_view input);
  PendingTurn Convert(const SyllableSeq& syllables);

  // Applies the user's choice for a pending turn. Throws StaleTurnError for
  // an unknown or already submitted turn and ContractError when the choice
  // length differs from the syllable count; neither changes any state.
  SessionTurn Submit(std::uint64_t turn_id, const HanziSeq& chosen);

  // Convert + Submit(gold) for every item. Items that fail are logged and
  // skipped.
  std::vector<SessionTurn> Replay(const std::vector<ParallelSentence>& stream);

  // Trains on the buffer now, regardless of its size. No-op when empty or
  // frozen.
  void Flush();

  EngineStats stats() const;
  const OnlineConfig& config() const { return config_; }
  const SyllableInventory& inventory() const { return inventory_; }
  const CharPinyinDict& dict() const { return dict_; }
  std::shared_ptr<const P2CModel> model() const;
  std::shared_ptr<const Vocabulary> vocabulary() const;

  // Model checkpoint, vocabulary, buffer and counters under `dir`.
  void Save(const std::string& dir) const;
  static std::unique_ptr<OnlineEngine> Load(const std::string& dir, SyllableInventory inventory,
                                            CharPinyinDict dict, OnlineConfig config = {});

 private:
  void FlushLocked();

  OnlineConfig config_;
  SyllableInventory inventory_;
  CharPinyinDict dict_;

  mutable std::shared_mutex snapshot_mutex_;
  std::shared_ptr<const P2CModel> model_;
  std::shared_ptr<const Vocabulary> vocab_;

  std::mutex pending_mutex_;
  std::map<std::uint64_t, PendingTurn> pending_;
  std::uint64_t next_turn_ = 1;

  mutable std::mutex submit_mutex_;
  std::vector<ParallelSentence> buffer_;
  std::vector<ParallelSentence> history_;
  EngineStats stats_;
};

void WriteTurnLogHeader(std::ostream& out);
// turn_id,pinyin,top1,chosen,rank_of_chosen,added_words,vocab_size
void WriteTurnLogRow(std::ostream& out, const SessionTurn& turn);

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_ENGINE_H_
