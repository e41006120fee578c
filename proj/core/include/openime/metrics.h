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

#ifndef OPENIME_METRICS_H_
#define OPENIME_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "openime/pinyin.h"

namespace openime {

/// One MIU with the converter's ranked output.
struct EvalItem {
  SyllableSeq pinyin;
  HanziSeq gold;
  std::vector<HanziSeq> candidates;  // rank order, best first
};

/// 1-based rank of the gold text, nullopt if absent.
std::optional<std::size_t> RankOf(const EvalItem& item);

/// Fraction of items whose gold is among the first k candidates. Throws
/// ContractError for k == 0 or an empty item set.
double TopKAccuracy(const std::vector<EvalItem>& items, std::size_t k);

struct KyssConfig {
  std::size_t page_size = 5;
  std::size_t selection_keystrokes = 1;
  std::size_t page_turn_keystrokes = 1;
  std::size_t max_candidates = 10;  // K: candidates reachable by paging
};

/// Keystrokes spent on one item under the paging model:
///   found at rank r <= K: letters + floor((r-1)/page)*turn + select
///   otherwise:            letters + floor((K-1)/page)*turn
///                         + sum over characters of (syllable letters + 1)
std::size_t ActualKeystrokes(const EvalItem& item, const KyssConfig& config);
std::size_t IdealKeystrokes(const EvalItem& item, const KyssConfig& config);

/// Mean of ideal/actual keystrokes over the items; 1.0 for an ideal IME.
double Kyss(const std::vector<EvalItem>& items, const KyssConfig& config = {});

/// Builds evaluation MIUs from raw hanzi lines: every MIU whose characters
/// all annotate becomes one item (candidates left empty).
std::vector<EvalItem> ItemsFromLines(const std::vector<std::string>& lines,
                                     const CharPinyinDict& dict);

/// `metric,config,value` rows.
struct MetricRow {
  std::string metric;
  std::string config;
  double value = 0;
};
void WriteMetricsCsv(std::ostream& out, const std::vector<MetricRow>& rows);

}  // namespace openime

#endif  // OPENIME_METRICS_H_
