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


// Evaluation runs and the analysis experiments built on top of the model
// and the online engine.

#ifndef OPENIME_EXPERIMENTS_H_
#define OPENIME_EXPERIMENTS_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "openime/engine.h"
#include "openime/metrics.h"
#include "openime/model.h"
#include "openime/trainer.h"

namespace openime {
inline namespace OPENIME_NN_NS {

struct Profile {
  std::string name;
  ModelConfig model;
  TrainOptions train;
  OnlineConfig online;
};

// Small single-core configuration for the shipped fixture.
Profile DeskProfile();
// Full-size settings: 3x500 LSTMs, 13 epochs, batch 32.
Profile PaperProfile();
// "desk" or "paper"; throws ContractError otherwise.
Profile ProfileByName(std::string_view name);

struct Evaluation {
  double top1 = 0, top5 = 0, top10 = 0;
  double kyss = 0;
  double seconds = 0;
  std::vector<EvalItem> items;  // with candidates filled in
};

// Decodes every item and scores the candidate lists.
Evaluation Evaluate(const P2CModel& model, const Vocabulary& vocab, const CharPinyinDict& dict,
                    std::vector<EvalItem> items, const DecodeOptions& options = {},
                    const KyssConfig& kyss = {});
std::vector<MetricRow> EvaluationRows(const Evaluation& eval, const std::string& config);

// Training-set items for a parallel corpus: one item per sentence.
std::vector<EvalItem> ItemsFromCorpus(const std::vector<ParallelSentence>& corpus);

struct Segment {
  std::string label;
  std::vector<ParallelSentence> sentences;
};

// A B A B ... segments of `segment_size` sentences until either side runs
// out.
std::vector<Segment> InterlaceSegments(const std::vector<ParallelSentence>& a, const std::string& label_a,
                                       const std::vector<ParallelSentence>& b, const std::string& label_b,
                                       std::size_t segment_size);

struct GroupPoint {
  std::size_t group_index = 0;
  std::string segment_label;
  std::size_t segment_index = 0;
  std::size_t group_in_segment = 0;
  double top1 = 0;
  std::size_t vocab_size = 0;  // after the group
};

struct InterlacedRun {
  std::vector<GroupPoint> online;
  std::vector<GroupPoint> frozen;
};

// Streams the segments through two engines started from the same model and
// vocabulary, one online and one frozen, with the gold text as the user's
// choice. Groups never straddle a segment boundary.
InterlacedRun InterlacedEval(const P2CModel& model, const Vocabulary& vocab,
                             const SyllableInventory& inventory, const CharPinyinDict& dict,
                             const OnlineConfig& online, const std::vector<Segment>& segments,
                             std::size_t group_size);

// Mean (online - frozen) top-1 over the first `groups` groups of every
// segment after the first.
double PostSwitchAdvantage(const InterlacedRun& run, std::size_t groups = 3);

void WriteInterlacedCsv(std::ostream& out, const std::vector<GroupPoint>& series);

struct PruneRow {
  double fraction = 1;
  double ms_per_miu = 0;  // median over repetitions
  double top1 = 0;
  double top5 = 0;
  double mean_target_size = 0;
};

// Decodes `items` once per fraction and repetition, fractions interleaved
// within each repetition.
std::vector<PruneRow> PruneBench(const P2CModel& model, const Vocabulary& vocab,
                                 const CharPinyinDict& dict, const std::vector<EvalItem>& items,
                                 const std::vector<double>& fractions, std::size_t repetitions = 5,
                                 const DecodeOptions& options = {});
void WritePruneCsv(std::ostream& out, const std::vector<PruneRow>& rows);

struct SweepRow {
  double ratio = 0;
  double top1 = 0;
  double top5 = 0;
};

// Trains one model per filter ratio with `profile` and evaluates it on
// `items`.
std::vector<SweepRow> FilterRatioSweep(const std::vector<ParallelSentence>& corpus,
                                       const Vocabulary& vocab, const SyllableInventory& inventory,
                                       const CharPinyinDict& dict, const std::vector<EvalItem>& items,
                                       const Profile& profile, const std::vector<double>& ratios,
                                       const std::function<void(const SweepRow&)>& on_row = {});
void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_EXPERIMENTS_H_
