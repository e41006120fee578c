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


#include "openime/engine.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "openime/checkpoint.h"
#include "openime/error.h"
#include "openime/trainer.h"
#include "openime/utf8.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

constexpr std::size_t kMaxPending = 4096;

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

OnlineEngine::OnlineEngine(P2CModel model, Vocabulary vocab, SyllableInventory inventory,
                           CharPinyinDict dict, OnlineConfig config)
    : config_(std::move(config)),
      inventory_(std::move(inventory)),
      dict_(std::move(dict)),
      model_(std::make_shared<const P2CModel>(std::move(model))),
      vocab_(std::make_shared<const Vocabulary>(std::move(vocab))) {
  if (config_.train_every == 0) throw ContractError("online config: train_every must be >= 1");
  if (config_.online_batch == 0) throw ContractError("online config: online_batch must be >= 1");
  stats_.vocab_size = vocab_->size();
}

SyllableSeq OnlineEngine::ParsePinyin(std::string_view input) const {
  const std::string text = Trim(input);
  if (text.empty()) throw InputError("empty pinyin", 0);
  return inventory_.Segment(text);
}

std::shared_ptr<const P2CModel> OnlineEngine::model() const {
  std::shared_lock lock(snapshot_mutex_);
  return model_;
}

std::shared_ptr<const Vocabulary> OnlineEngine::vocabulary() const {
  std::shared_lock lock(snapshot_mutex_);
  return vocab_;
}

CandidateList OnlineEngine::Candidates(const SyllableSeq& syllables) const {
  if (syllables.empty()) throw InputError("empty pinyin", 0);
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    if (!inventory_.Contains(syllables[i])) {
      throw InputError("unknown syllable '" + syllables[i] + "'", i);
    }
  }
  std::shared_ptr<const P2CModel> model;
  std::shared_ptr<const Vocabulary> vocab;
  {
    std::shared_lock lock(snapshot_mutex_);
    model = model_;
    vocab = vocab_;
  }
  return model->Decode(syllables, *vocab, dict_, config_.decode);
}

PendingTurn OnlineEngine::Convert(std::string_view input) { return Convert(ParsePinyin(input)); }

PendingTurn OnlineEngine::Convert(const SyllableSeq& syllables) {
  PendingTurn turn;
  turn.pinyin = syllables;
  turn.shown = Candidates(syllables);
  std::lock_guard lock(pending_mutex_);
  turn.turn_id = next_turn_++;
  pending_[turn.turn_id] = turn;
  while (pending_.size() > kMaxPending) pending_.erase(pending_.begin());
  return turn;
}

SessionTurn OnlineEngine::Submit(std::uint64_t turn_id, const HanziSeq& chosen) {
  std::lock_guard submit(submit_mutex_);
  PendingTurn pending;
  {
    std::lock_guard lock(pending_mutex_);
    auto it = pending_.find(turn_id);
    if (it == pending_.end()) throw StaleTurnError("turn " + std::to_string(turn_id) + " is not pending");
    if (chosen.size() != it->second.pinyin.size()) {
      throw ContractError("choice has " + std::to_string(chosen.size()) + " characters for " +
                          std::to_string(it->second.pinyin.size()) + " syllables");
    }
    pending = std::move(it->second);
    pending_.erase(it);
  }

  SessionTurn turn;
  turn.turn_id = pending.turn_id;
  turn.pinyin = std::move(pending.pinyin);
  turn.shown = std::move(pending.shown);
  turn.choice = chosen;
  for (std::size_t i = 0; i < turn.shown.size(); ++i) {
    if (turn.shown[i].text == chosen) {
      turn.rank_of_chosen = i + 1;
      break;
    }
  }
  ++stats_.turns;
  if (!config_.frozen) {
    // Nothing shown means nothing predicted; compare against the choice.
    const HanziSeq& predicted = turn.shown.empty() ? chosen : turn.shown.front().text;
    auto next = std::make_shared<Vocabulary>(*vocabulary());
    turn.update = UpdateVocabulary(*next, turn.pinyin, predicted, chosen, stats_.turns, config_.update);
    ParallelSentence instance = SegmentAligned(*next, turn.pinyin, chosen);
    {
      std::unique_lock lock(snapshot_mutex_);
      vocab_ = std::move(next);
    }
    buffer_.push_back(instance);
    if (config_.full_replay) history_.push_back(std::move(instance));
    if (buffer_.size() >= config_.train_every) {
      FlushLocked();
      turn.flushed = true;
    }
  } else {
    turn.update.turn = stats_.turns;
  }
  stats_.vocab_size = vocabulary()->size();
  turn.vocab_size = stats_.vocab_size;
  return turn;
}

std::vector<SessionTurn> OnlineEngine::Replay(const std::vector<ParallelSentence>& stream) {
  std::vector<SessionTurn> log;
  for (const auto& sentence : stream) {
    try {
      const PendingTurn p = Convert(sentence.Syllables());
      log.push_back(Submit(p.turn_id, sentence.Hanzi()));
    } catch (const std::exception& e) {
      spdlog::warn("replay skipped '{}': {}", FormatParallel(sentence), e.what());
    }
  }
  return log;
}

void OnlineEngine::Flush() {
  std::lock_guard submit(submit_mutex_);
  FlushLocked();
}

void OnlineEngine::FlushLocked() {
  if (config_.frozen || buffer_.empty()) return;
  auto next = std::make_shared<P2CModel>(*model());
  TrainOptions options;
  options.epochs = config_.online_epochs;
  options.batch = config_.online_batch;
  options.learning_rate = config_.learning_rate;
  options.halve_after = std::numeric_limits<int>::max();
  options.clip_norm = config_.clip_norm;
  options.seed = config_.seed + stats_.flushes;
  if (config_.freeze_encoder) options.frozen_prefixes = {"src.", "enc."};
  const auto& data = config_.full_replay ? history_ : buffer_;
  Train(*next, data, *vocabulary(), dict_, options);
  {
    std::unique_lock lock(snapshot_mutex_);
    model_ = std::move(next);
  }
  buffer_.clear();
  ++stats_.flushes;
  stats_.last_flush_turn = stats_.turns;
  spdlog::debug("online flush {} at turn {}", stats_.flushes, stats_.turns);
}

EngineStats OnlineEngine::stats() const {
  std::lock_guard submit(submit_mutex_);
  EngineStats s = stats_;
  s.buffered = buffer_.size();
  s.vocab_size = vocabulary()->size();
  return s;
}

void OnlineEngine::Save(const std::string& dir) const {
  namespace fs = std::filesystem;
  std::lock_guard submit(submit_mutex_);
  fs::create_directories(dir);
  const fs::path root(dir);
  SaveCheckpoint(*model(), (root / "model.oime").string());
  SaveVocabulary(*vocabulary(), (root / "vocab.tsv").string());
  SaveParallelCorpus(buffer_, (root / "buffer.tsv").string());
  SaveParallelCorpus(history_, (root / "history.tsv").string());
  nlohmann::json state{{"turns", stats_.turns}, {"flushes", stats_.flushes}};
  if (stats_.last_flush_turn) state["last_flush_turn"] = *stats_.last_flush_turn;
  std::ofstream out(root / "state.json");
  out << state.dump(2) << '\n';
  if (!out) throw DataError(dir + ": cannot write engine state");
}

std::unique_ptr<OnlineEngine> OnlineEngine::Load(const std::string& dir, SyllableInventory inventory,
                                                 CharPinyinDict dict, OnlineConfig config) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  auto engine = std::make_unique<OnlineEngine>(LoadCheckpoint((root / "model.oime").string()),
                                               LoadVocabulary((root / "vocab.tsv").string()),
                                               std::move(inventory), std::move(dict), std::move(config));
  engine->buffer_ = LoadParallelCorpus((root / "buffer.tsv").string());
  engine->history_ = LoadParallelCorpus((root / "history.tsv").string());
  std::ifstream in(root / "state.json");
  if (!in) throw DataError(dir + ": missing state.json");
  try {
    const auto state = nlohmann::json::parse(in);
    engine->stats_.turns = state.at("turns").get<std::uint64_t>();
    engine->stats_.flushes = state.at("flushes").get<std::uint64_t>();
    if (state.contains("last_flush_turn")) {
      engine->stats_.last_flush_turn = state["last_flush_turn"].get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir + "/state.json: " + e.what());
  }
  engine->stats_.vocab_size = engine->vocab_->size();
  return engine;
}

void WriteTurnLogHeader(std::ostream& out) {
  out << "turn_id,pinyin,top1,chosen,rank_of_chosen,added_words,vocab_size\n";
}

void WriteTurnLogRow(std::ostream& out, const SessionTurn& turn) {
  out << turn.turn_id << ',' << JoinSyllables(turn.pinyin) << ','
      << (turn.shown.empty() ? std::string() : U32ToUtf8(turn.shown.front().text)) << ','
      << U32ToUtf8(turn.choice) << ',';
  if (turn.rank_of_chosen) out << *turn.rank_of_chosen;
  out << ',';
  for (std::size_t i = 0; i < turn.update.added.size(); ++i) {
    out << (i ? "|" : "") << U32ToUtf8(turn.update.added[i].hanzi);
  }
  out << ',' << turn.vocab_size << '\n';
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
