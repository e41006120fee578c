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


#include "openime/experiments.h"

#include <algorithm>
#include <chrono>
#include <ostream>

#include <spdlog/spdlog.h>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

Profile DeskProfile() {
  Profile p;
  p.name = "desk";
  p.model.layers = 1;
  p.model.hidden = 64;
  p.model.embed = 64;
  p.model.char_hidden = 32;
  p.model.dropout = 0.3;
  p.model.filter_ratio = 0.9;
  p.model.common_words = 20;
  // With a single small layer the default +-0.08 leaves source-side
  // gradients near zero for dozens of epochs.
  p.model.init_range = 0.24;
  p.train.epochs = 50;
  p.train.batch = 16;
  p.train.learning_rate = 1.0;
  p.train.halve_after = 30;
  p.train.clip_norm = 5;
  p.online.train_every = 64;
  p.online.online_batch = 1;
  p.online.online_epochs = 1;
  p.online.learning_rate = 0.1;
  return p;
}

Profile PaperProfile() {
  Profile p;
  p.name = "paper";
  p.model.layers = 3;
  p.model.hidden = 500;
  p.model.embed = 200;
  p.model.char_hidden = 100;
  p.model.dropout = 0.3;
  p.model.filter_ratio = 0.9;
  p.model.common_words = 100;
  p.train.epochs = 13;
  p.train.batch = 32;
  p.train.learning_rate = 1.0;
  p.train.halve_after = 9;
  p.online.train_every = 64;
  p.online.online_batch = 1;
  p.online.online_epochs = 25;
  p.online.full_replay = true;
  p.online.learning_rate = 0.1;
  return p;
}

Profile ProfileByName(std::string_view name) {
  if (name == "desk") return DeskProfile();
  if (name == "paper") return PaperProfile();
  throw ContractError("unknown profile '" + std::string(name) + "' (expected desk or paper)");
}

Evaluation Evaluate(const P2CModel& model, const Vocabulary& vocab, const CharPinyinDict& dict,
                    std::vector<EvalItem> items, const DecodeOptions& options, const KyssConfig& kyss) {
  if (items.empty()) throw ContractError("evaluate: no items");
  const auto start = Clock::now();
  for (auto& item : items) {
    item.candidates.clear();
    for (auto& c : model.Decode(item.pinyin, vocab, dict, options)) item.candidates.push_back(std::move(c.text));
  }
  Evaluation e;
  e.seconds = Seconds(start);
  e.top1 = TopKAccuracy(items, 1);
  e.top5 = TopKAccuracy(items, 5);
  e.top10 = TopKAccuracy(items, 10);
  KyssConfig k = kyss;
  k.max_candidates = options.top_k;
  e.kyss = Kyss(items, k);
  e.items = std::move(items);
  return e;
}

std::vector<MetricRow> EvaluationRows(const Evaluation& eval, const std::string& config) {
  return {{"top1", config, eval.top1},
          {"top5", config, eval.top5},
          {"top10", config, eval.top10},
          {"kyss", config, eval.kyss},
          {"items", config, static_cast<double>(eval.items.size())}};
}

std::vector<EvalItem> ItemsFromCorpus(const std::vector<ParallelSentence>& corpus) {
  std::vector<EvalItem> items;
  items.reserve(corpus.size());
  for (const auto& s : corpus) items.push_back({s.Syllables(), s.Hanzi(), {}});
  return items;
}

std::vector<Segment> InterlaceSegments(const std::vector<ParallelSentence>& a, const std::string& label_a,
                                       const std::vector<ParallelSentence>& b, const std::string& label_b,
                                       std::size_t segment_size) {
  if (segment_size == 0) throw ContractError("interlace: segment size must be >= 1");
  std::vector<Segment> out;
  std::size_t ia = 0, ib = 0;
  for (bool take_a = true;; take_a = !take_a) {
    const auto& src = take_a ? a : b;
    std::size_t& pos = take_a ? ia : ib;
    if (pos + segment_size > src.size()) break;
    Segment seg{take_a ? label_a : label_b, {}};
    seg.sentences.assign(src.begin() + static_cast<std::ptrdiff_t>(pos),
                         src.begin() + static_cast<std::ptrdiff_t>(pos + segment_size));
    pos += segment_size;
    out.push_back(std::move(seg));
  }
  if (out.size() < 2) throw ContractError("interlace: need at least two segments");
  return out;
}

InterlacedRun InterlacedEval(const P2CModel& model, const Vocabulary& vocab,
                             const SyllableInventory& inventory, const CharPinyinDict& dict,
                             const OnlineConfig& online, const std::vector<Segment>& segments,
                             std::size_t group_size) {
  if (group_size == 0) throw ContractError("interlace: group size must be >= 1");
  OnlineConfig frozen_config = online;
  frozen_config.frozen = true;
  OnlineConfig online_config = online;
  online_config.frozen = false;
  OnlineEngine live(model, vocab, inventory, dict, online_config);
  OnlineEngine frozen(model, vocab, inventory, dict, frozen_config);
  InterlacedRun run;
  std::size_t group = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& sentences = segments[s].sentences;
    for (std::size_t begin = 0, g = 0; begin < sentences.size(); begin += group_size, ++g) {
      const std::size_t end = std::min(sentences.size(), begin + group_size);
      const std::vector<ParallelSentence> chunk(sentences.begin() + static_cast<std::ptrdiff_t>(begin),
                                                sentences.begin() + static_cast<std::ptrdiff_t>(end));
      for (auto* engine : {&live, &frozen}) {
        const auto log = engine->Replay(chunk);
        std::size_t hits = 0;
        for (const auto& t : log) hits += t.rank_of_chosen == 1u;
        GroupPoint p{group, segments[s].label, s, g,
                     static_cast<double>(hits) / static_cast<double>(chunk.size()),
                     engine->vocabulary()->size()};
        (engine == &live ? run.online : run.frozen).push_back(std::move(p));
      }
      ++group;
    }
  }
  return run;
}

double PostSwitchAdvantage(const InterlacedRun& run, std::size_t groups) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < run.online.size() && i < run.frozen.size(); ++i) {
    const auto& p = run.online[i];
    if (p.segment_index == 0 || p.group_in_segment >= groups) continue;
    sum += p.top1 - run.frozen[i].top1;
    ++n;
  }
  if (n == 0) throw ContractError("interlace: no post-switch groups");
  return sum / static_cast<double>(n);
}

void WriteInterlacedCsv(std::ostream& out, const std::vector<GroupPoint>& series) {
  out << "group_index,segment_label,top1\n";
  for (const auto& p : series) out << p.group_index << ',' << p.segment_label << ',' << p.top1 << '\n';
}

std::vector<PruneRow> PruneBench(const P2CModel& model, const Vocabulary& vocab,
                                 const CharPinyinDict& dict, const std::vector<EvalItem>& items,
                                 const std::vector<double>& fractions, std::size_t repetitions,
                                 const DecodeOptions& options) {
  if (items.empty() || fractions.empty()) throw ContractError("prune bench: nothing to run");
  if (repetitions == 0) throw ContractError("prune bench: repetitions must be >= 1");
  for (double f : fractions) {
    if (!(f > 0 && f <= 1)) throw ContractError("prune bench: fraction outside (0,1]");
  }
  std::vector<PruneRow> rows(fractions.size());
  std::vector<std::vector<double>> times(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    rows[i].fraction = fractions[i];
    std::vector<EvalItem> scored = items;
    double sizes = 0;
    for (auto& item : scored) {
      DecodeOptions o = options;
      o.keep_fraction = fractions[i];
      for (auto& c : model.Decode(item.pinyin, vocab, dict, o)) item.candidates.push_back(std::move(c.text));
      sizes += static_cast<double>(DecodeSession(model, item.pinyin, vocab, dict, fractions[i]).target().size());
    }
    rows[i].top1 = TopKAccuracy(scored, 1);
    rows[i].top5 = TopKAccuracy(scored, 5);
    rows[i].mean_target_size = sizes / static_cast<double>(items.size());
  }
  // Fractions are interleaved per item, in rotated order, so load spikes and
  // drift land on every fraction alike. Each repetition is one pass per fraction.
  std::vector<DecodeOptions> opts(fractions.size(), options);
  for (std::size_t i = 0; i < fractions.size(); ++i) opts[i].keep_fraction = fractions[i];
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    std::vector<double> seconds(fractions.size(), 0);
    for (std::size_t k = 0; k < items.size(); ++k) {
      for (std::size_t step = 0; step < fractions.size(); ++step) {
        const std::size_t i = (rep + k + step) % fractions.size();
        const auto start = Clock::now();
        model.Decode(items[k].pinyin, vocab, dict, opts[i]);
        seconds[i] += Seconds(start);
      }
    }
    for (std::size_t i = 0; i < fractions.size(); ++i) {
      times[i].push_back(seconds[i] * 1000 / static_cast<double>(items.size()));
    }
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) rows[i].ms_per_miu = Median(times[i]);
  return rows;
}

void WritePruneCsv(std::ostream& out, const std::vector<PruneRow>& rows) {
  out << "fraction,ms_per_miu,top1,top5,mean_target_size\n";
  for (const auto& r : rows) {
    out << r.fraction << ',' << r.ms_per_miu << ',' << r.top1 << ',' << r.top5 << ','
        << r.mean_target_size << '\n';
  }
}

std::vector<SweepRow> FilterRatioSweep(const std::vector<ParallelSentence>& corpus,
                                       const Vocabulary& vocab, const SyllableInventory& inventory,
                                       const CharPinyinDict& dict, const std::vector<EvalItem>& items,
                                       const Profile& profile, const std::vector<double>& ratios,
                                       const std::function<void(const SweepRow&)>& on_row) {
  std::vector<SweepRow> rows;
  for (double ratio : ratios) {
    ModelConfig config = profile.model;
    config.filter_ratio = ratio;
    P2CModel model(config, inventory, dict, vocab);
    Train(model, corpus, vocab, dict, profile.train);
    const Evaluation e = Evaluate(model, vocab, dict, items, profile.online.decode);
    rows.push_back({ratio, e.top1, e.top5});
    spdlog::info("filter ratio {}: top1 {:.3f} top5 {:.3f}", ratio, e.top1, e.top5);
    if (on_row) on_row(rows.back());
  }
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "filter_ratio,top1,top5\n";
  for (const auto& r : rows) out << r.ratio << ',' << r.top1 << ',' << r.top5 << '\n';
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
