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

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library.

#ifndef OPENIME_TESTS_ORACLES_H_
#define OPENIME_TESTS_ORACLES_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace openime::testing {

// Longest word at each position found by trying every vocabulary word,
// single unit when none matches.
template <typename Seq>
std::vector<Seq> BruteForceMaxMatch(const Seq& text, const std::set<Seq>& words) {
  std::vector<Seq> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best = 0;
    for (const Seq& w : words) {
      if (w.empty() || w.size() <= best || pos + w.size() > text.size()) continue;
      bool match = true;
      for (std::size_t i = 0; i < w.size(); ++i) match = match && text[pos + i] == w[i];
      if (match) best = w.size();
    }
    if (best == 0) best = 1;
    out.emplace_back(text.begin() + static_cast<std::ptrdiff_t>(pos),
                     text.begin() + static_cast<std::ptrdiff_t>(pos + best));
    pos += best;
  }
  return out;
}

struct MaxMatchCase {
  std::u32string text;
  std::set<std::u32string> words;
};

// Strings of length <= 8 over a 5-symbol alphabet with random vocabularies.
inline MaxMatchCase RandomMaxMatchCase(std::mt19937_64& rng) {
  auto symbol = [&]() { return static_cast<char32_t>(U'一' + rng() % 5); };
  MaxMatchCase c;
  const std::size_t len = rng() % 9;
  for (std::size_t i = 0; i < len; ++i) c.text.push_back(symbol());
  const std::size_t n_words = rng() % 12;
  for (std::size_t w = 0; w < n_words; ++w) {
    std::u32string word;
    const std::size_t wl = 1 + rng() % 4;
    for (std::size_t i = 0; i < wl; ++i) word.push_back(symbol());
    c.words.insert(word);
  }
  return c;
}

// Windows [begin, begin + n) that the vocabulary update should accept, by
// exhaustive enumeration from the longest length down. A window qualifies
// when both its end characters differ between `predicted` and `chosen` and
// it does not lie inside an already accepted window.
inline std::vector<std::pair<std::size_t, std::size_t>> ExpectedWindows(
    const std::u32string& predicted, const std::u32string& chosen, std::size_t max_n = 6,
    std::size_t min_n = 2) {
  std::vector<std::pair<std::size_t, std::size_t>> accepted;
  const std::size_t len = chosen.size();
  for (std::size_t n = std::min(max_n, len); n >= min_n && n >= 1; --n) {
    for (std::size_t b = 0; b + n <= len; ++b) {
      const std::size_t e = b + n - 1;
      if (predicted[b] == chosen[b] || predicted[e] == chosen[e]) continue;
      bool inside = false;
      for (auto [ab, an] : accepted) inside = inside || (b >= ab && b + n <= ab + an);
      if (!inside) accepted.emplace_back(b, n);
    }
    if (n == min_n) break;
  }
  return accepted;
}

}  // namespace openime::testing

#endif  // OPENIME_TESTS_ORACLES_H_
