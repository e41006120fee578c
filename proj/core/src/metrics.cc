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

#include "openime/metrics.h"

#include <ostream>

#include "openime/error.h"

namespace openime {

std::optional<std::size_t> RankOf(const EvalItem& item) {
  for (std::size_t i = 0; i < item.candidates.size(); ++i) {
    if (item.candidates[i] == item.gold) return i + 1;
  }
  return std::nullopt;
}

double TopKAccuracy(const std::vector<EvalItem>& items, std::size_t k) {
  if (k == 0) throw ContractError("top-k accuracy needs k >= 1");
  if (items.empty()) throw ContractError("top-k accuracy over an empty item set");
  std::size_t hits = 0;
  for (const auto& item : items) {
    const auto rank = RankOf(item);
    if (rank && *rank <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

std::size_t IdealKeystrokes(const EvalItem& item, const KyssConfig& config) {
  return LetterCount(item.pinyin) + config.selection_keystrokes;
}

std::size_t ActualKeystrokes(const EvalItem& item, const KyssConfig& config) {
  if (config.page_size == 0) throw ContractError("page_size must be >= 1");
  const std::size_t letters = LetterCount(item.pinyin);
  const auto rank = RankOf(item);
  if (rank && *rank <= config.max_candidates) {
    return letters + (*rank - 1) / config.page_size * config.page_turn_keystrokes +
           config.selection_keystrokes;
  }
  const std::size_t k = config.max_candidates == 0 ? 1 : config.max_candidates;
  std::size_t cost = letters + (k - 1) / config.page_size * config.page_turn_keystrokes;
  for (const auto& syllable : item.pinyin) cost += syllable.size() + 1;
  return cost;
}

double Kyss(const std::vector<EvalItem>& items, const KyssConfig& config) {
  if (items.empty()) throw ContractError("KySS over an empty item set");
  double total = 0;
  for (const auto& item : items) {
    total += static_cast<double>(IdealKeystrokes(item, config)) /
             static_cast<double>(ActualKeystrokes(item, config));
  }
  return total / static_cast<double>(items.size());
}

std::vector<EvalItem> ItemsFromLines(const std::vector<std::string>& lines,
                                     const CharPinyinDict& dict) {
  std::vector<EvalItem> items;
  for (const auto& line : lines) {
    for (auto& miu : SplitMius(std::string_view(line))) {
      EvalItem item;
      try {
        item.pinyin = AnnotatePinyin(std::u32string_view(miu.chars), dict);
      } catch (const InputError&) {
        continue;
      }
      item.gold = std::move(miu.chars);
      items.push_back(std::move(item));
    }
  }
  return items;
}

void WriteMetricsCsv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "metric,config,value\n";
  for (const auto& r : rows) out << r.metric << ',' << r.config << ',' << r.value << '\n';
}

}  // namespace openime
